"""
How often is a random Gale polytope neighborly?
===============================================

Below the strong threshold, every (k+1)-subset spans a face with
probability tending to 1. A union bound gives an exact lower bound at each
finite size; simulation shows the probability climbing with d.
"""

from galelab import SamplerConfig, estimate_neighborly_prob, neighborly_prob_lower_bound, phase_dims

delta, rho = 0.9, 0.05
for d in (10, 15, 20):
    dims = phase_dims(delta, rho, d)
    est = estimate_neighborly_prob(SamplerConfig(dims, seed=5), dims.k, trials=300)
    bound = neighborly_prob_lower_bound(dims)
    print(f"d={d} N={dims.N} k={dims.k}: P(neighborly) ~ {est.mean:.3f} +- {est.stderr:.3f}"
          f"  (union bound {float(bound):.3f})")
