"""
Wendel's probability, three ways
================================

The chance that M symmetric random vectors in R^r miss the origin with
their convex hull has a closed form. We compute it exactly, recover it by
flipping signs of one fixed configuration, and estimate it by sampling.
"""

import numpy as np

from galelab import VectorConfig, estimate_containment, wendel, wendel_sign_oracle

r, M = 3, 8

# the closed form is an exact rational
exact = wendel(r, M)
print(f"P_{{{r},{M}}} = {exact} = {float(exact):.6f}")

# every sign pattern of a fixed generic configuration is equally likely,
# so counting the patterns that miss the origin gives the same number
rng = np.random.default_rng(0)
cfg = VectorConfig.from_rows(rng.standard_normal((M, r)))
print("sign-pattern count:", wendel_sign_oracle(r, M, cfg))

# plain Monte Carlo over fresh Gaussian draws
est = estimate_containment(r, M, trials=20000, seed=1)
print(f"sampled miss frequency: {1 - est.mean:.4f} +- {est.stderr:.4f}")
