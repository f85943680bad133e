"""Exact combinatorics for random Gale diagrams.

Everything here works on Python integers and :class:`fractions.Fraction`;
no floating point enters the exact path. A log-domain float variant is
provided separately for very large dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "Dims",
    "binomial",
    "wendel",
    "origin_in_hull_prob",
    "expected_fk",
    "expected_fk_ratio",
    "neighborly_prob_lower_bound",
    "log_wendel",
    "log_expected_fk_ratio",
]


@dataclass(frozen=True)
class Dims:
    """Parameter triple ``(d, N, k)`` of a random Gale polytope.

    ``d`` is the polytope dimension, ``N`` the number of points and ``k`` the
    face dimension. The diagram lives in dimension ``m = N - d - 1``.
    """

    d: int
    N: int
    k: int

    def __post_init__(self):
        for name in ("d", "N", "k"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"{name} must be an int")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got d={self.d}")
        if self.N < self.d + 2:
            raise ValueError(
                f"N must be >= d + 2, got d={self.d}, N={self.N}"
            )
        if not 0 <= self.k <= self.d - 1:
            raise ValueError(
                f"k must satisfy 0 <= k <= d - 1, got d={self.d}, k={self.k}"
            )

    @property
    def m(self) -> int:
        return self.N - self.d - 1


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient; zero outside ``0 <= k <= n``."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def _check_rm(r: int, M: int) -> None:
    if M < 1:
        raise ValueError(f"M must be >= 1, got M={M}")
    if r < 1:
        raise ValueError(f"r must be >= 1, got r={r}")
    if r > M:
        raise ValueError(f"r must be <= M, got r={r}, M={M}")


@lru_cache(maxsize=4096)
def wendel(r: int, M: int) -> Fraction:
    """Probability that ``M`` symmetric generic vectors in ``R^r`` miss the origin.

    ``P = 2^-(M-1) * sum_{i<r} C(M-1, i)``, returned exactly.
    """
    _check_rm(r, M)
    total = sum(math.comb(M - 1, i) for i in range(r))
    return Fraction(total, 2 ** (M - 1))


def origin_in_hull_prob(r: int, M: int) -> Fraction:
    """Probability that the origin lies in the hull of ``M`` such vectors in ``R^r``."""
    _check_rm(r, M)
    if r == M:
        raise ValueError(f"r must be < M, got r={r}, M={M}")
    return wendel(M - r, M)


def expected_fk(dims: Dims) -> Fraction:
    """Exact expected number of ``k``-faces of the random Gale polytope."""
    d, N, k = dims.d, dims.N, dims.k
    return math.comb(N, k + 1) * wendel(d - k, N - k - 1) / wendel(d + 1, N)


def expected_fk_ratio(dims: Dims) -> Fraction:
    """``E f_k / C(N, k+1)``: the expected fraction of ``(k+1)``-sets spanning faces."""
    return wendel(dims.d - dims.k, dims.N - dims.k - 1) / wendel(dims.d + 1, dims.N)


def neighborly_prob_lower_bound(dims: Dims) -> Fraction:
    """Union-bound lower bound on ``P(f_k = C(N, k+1))``.

    Every ``(k+1)``-set fails to be a face with the same conditional
    probability ``1 - ratio``; summing over all sets gives the bound.
    """
    miss = 1 - expected_fk_ratio(dims)
    bound = 1 - math.comb(dims.N, dims.k + 1) * miss
    return max(Fraction(0), bound)


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_wendel(r: int, M: int) -> float:
    """Natural log of :func:`wendel` computed in floating point.

    Uses log-gamma binomials and a log-sum-exp over the partial row, so it
    stays finite for ``M`` in the tens of thousands.
    """
    _check_rm(r, M)
    terms = [_log_binom(M - 1, i) for i in range(r)]
    top = max(terms)
    s = math.fsum(math.exp(t - top) for t in terms)
    return top + math.log(s) - (M - 1) * math.log(2.0)


def log_expected_fk_ratio(dims: Dims) -> float:
    """Float approximation of ``log(expected_fk_ratio(dims))`` for huge ``d``."""
    return log_wendel(dims.d - dims.k, dims.N - dims.k - 1) - log_wendel(
        dims.d + 1, dims.N
    )
