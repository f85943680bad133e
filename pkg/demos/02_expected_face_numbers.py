"""
Expected face numbers of random Gale polytopes
==============================================

A random Gale diagram is N i.i.d. vectors in R^(N-d-1), conditioned on
holding the origin in their hull. Its polytope has an expected number of
k-faces given by a ratio of Wendel probabilities.
"""

from galelab import Dims, SamplerConfig, estimate_fk, expected_fk, expected_fk_ratio

for d, N, k in [(2, 4, 1), (3, 6, 1), (4, 8, 2)]:
    dims = Dims(d, N, k)
    exact = expected_fk(dims)
    est = estimate_fk(SamplerConfig(dims, seed=7), k, trials=3000)
    print(
        f"d={d} N={N} k={k}: E f_k = {exact} ({float(exact):.4f}), "
        f"ratio {float(expected_fk_ratio(dims)):.4f}, "
        f"simulated {est.mean:.4f} +- {est.stderr:.4f}"
    )
