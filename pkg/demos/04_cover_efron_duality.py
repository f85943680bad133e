"""
Polytopes and cones share their face statistics
================================================

The positive hull of N random vectors in R^(d+1), conditioned to be a proper
cone, has as many (k+1)-faces on average as the random Gale polytope has
k-faces. Both simulations should bracket the same exact value.
"""

from galelab import Dims, verify_duality_identity

for dims in [Dims(2, 4, 1), Dims(3, 6, 1)]:
    rep = verify_duality_identity(dims, trials=3000, seed=11)
    print(f"{dims}: exact {float(rep.exact):.4f}")
    print(f"  polytope f_k    {rep.gale.mean:.4f} +- {rep.gale.stderr:.4f}")
    print(f"  cone f_(k+1)    {rep.cone.mean:.4f} +- {rep.cone.stderr:.4f}")
    print(f"  both consistent: {rep.passed}")
