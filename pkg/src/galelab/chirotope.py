"""Exact determinant signs of float vector configurations.

Every float64 is a dyadic rational, so a configuration sampled in floating
point has an exact rational meaning. Signs of ``m x m`` minors are computed
with LAPACK and accepted only when the result clears a conservative
backward-error bound; the rest are recomputed with integer Bareiss
elimination. The sign vector over all ``m``-subsets (the chirotope) decides
every origin-in-hull question for configurations in general position.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

__all__ = [
    "exact_det_sign",
    "det_signs",
    "minor_index",
    "simplex_table",
    "good_simplices",
    "chirotope",
]

_EPS = 2.0**-53


@lru_cache(maxsize=None)
def _rel_bound(n: int) -> float:
    # LU with partial pivoting on rows scaled to max-norm in [1/2, 1):
    # |E| <= gamma_n * n * 2^(n-1) entrywise, then multilinear expansion of
    # det(A + E) by rows against Hadamard's bound; doubled for safety.
    gamma = n * _EPS / (1 - n * _EPS)
    col = math.sqrt(n) * gamma * n * 2 ** (n - 1)
    return 2.0 * ((1 + 2 * col) ** n - 1 + 2 * gamma)


def _bareiss_sign(rows: list[list[int]]) -> int:
    a = [r[:] for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ai, ak = a[i], a[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * ak[j]) // prev
        prev = akk
    d = a[n - 1][n - 1]
    return sign * (d > 0) - sign * (d < 0)


def exact_det_sign(mat) -> int:
    """Exact sign of the determinant of a square matrix of rationals.

    Accepts floats (interpreted exactly), ints or Fractions.
    """
    rows = [[Fraction(v) for v in row] for row in mat]
    n = len(rows)
    if n == 0:
        return 1
    den = 1
    for row in rows:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [[int(v * den) for v in row] for row in rows]
    return _bareiss_sign(ints)


def _normalize_rows(vectors: np.ndarray) -> np.ndarray:
    """Scale each vector by a power of two so its max-norm lies in [1/2, 1).

    Positive scaling of a vector never changes a determinant sign, and
    power-of-two scaling is exact in binary floating point.
    """
    rowmax = np.abs(vectors).max(axis=-1)
    _, expo = np.frexp(np.where(rowmax == 0, 1.0, rowmax))
    return np.ldexp(vectors, -expo[..., None])


def _signs_of_minors(scaled: np.ndarray, idx: np.ndarray) -> np.ndarray:
    # scaled: (B, N, n) rows normalized; idx: (K, n) row choices
    B, N, n = scaled.shape
    norms = np.sqrt(np.einsum("bij,bij->bi", scaled, scaled))
    mats = scaled[:, idx, :]
    dets = np.linalg.det(mats)
    hadamard = norms[:, idx].prod(axis=-1)
    out = np.zeros(dets.shape, dtype=np.int8)
    sure = np.abs(dets) > _rel_bound(n) * hadamard
    out[sure] = np.sign(dets[sure]).astype(np.int8)
    zero_row = (norms == 0)[:, idx].any(axis=-1)
    for b, k in zip(*np.nonzero(~sure & ~zero_row)):
        out[b, k] = exact_det_sign(scaled[b, idx[k]].tolist())
    return out


def det_signs(mats: np.ndarray) -> np.ndarray:
    """Exact determinant signs for a stack of float64 matrices ``(..., n, n)``.

    The result is an ``int8`` array of -1/0/+1. Matrices are read as exact
    rationals; floating point is only a filter.
    """
    mats = np.asarray(mats, dtype=np.float64)
    n = mats.shape[-1]
    flat = _normalize_rows(mats.reshape(-1, n, n))
    idx = np.arange(n, dtype=np.intp)[None, :]
    return _signs_of_minors(flat, idx)[:, 0].reshape(mats.shape[:-2])


@lru_cache(maxsize=32)
def _laplace_levels(N: int, m: int):
    """Expansion tables: level ``k`` minors from level ``k-1`` along column ``k-1``."""
    levels = []
    prev = {(): 0}
    for k in range(1, m + 1):
        subsets = list(combinations(range(N), k))
        sub_idx = np.empty((len(subsets), k), dtype=np.intp)
        rows = np.empty((len(subsets), k), dtype=np.intp)
        sign = np.empty(k, dtype=np.float64)
        for a, S in enumerate(subsets):
            for i in range(k):
                sub_idx[a, i] = prev[S[:i] + S[i + 1 :]]
                rows[a, i] = S[i]
        for i in range(k):
            sign[i] = (-1.0) ** (i + k - 1)
        levels.append((rows, sub_idx, sign))
        prev = {S: a for a, S in enumerate(subsets)}
    return levels


def _laplace_cost(N: int, m: int) -> int:
    return max(math.comb(N, k) for k in range(1, m + 1))


def _minor_signs_laplace(scaled: np.ndarray) -> np.ndarray:
    """All maximal minors by cofactor expansion, with a rigorous filter.

    Expansion of an ``n x n`` determinant has absolute error at most
    ``gamma_(2n) * per(|A|)``, and ``per(|A|)`` is bounded by the product
    of the row 1-norms.
    """
    B, N, m = scaled.shape
    levels = _laplace_levels(N, m)
    minors = np.ones((B, 1))
    for k, (rows, sub_idx, sign) in enumerate(levels):
        col = scaled[:, :, k]
        minors = (col[:, rows] * minors[:, sub_idx] * sign).sum(axis=-1)
    rows_m = levels[-1][0]
    l1 = np.abs(scaled).sum(axis=-1)
    bound = l1[:, rows_m].prod(axis=-1)
    gamma = 2 * (2 * m + 2) * _EPS
    out = np.zeros(minors.shape, dtype=np.int8)
    sure = np.abs(minors) > gamma * bound
    out[sure] = np.sign(minors[sure]).astype(np.int8)
    zero_row = (l1 == 0)[:, rows_m].any(axis=-1)
    for b, a in zip(*np.nonzero(~sure & ~zero_row)):
        out[b, a] = exact_det_sign(scaled[b, rows_m[a]].tolist())
    return out


@lru_cache(maxsize=64)
def minor_index(N: int, m: int) -> tuple[tuple[tuple[int, ...], ...], dict]:
    """All sorted ``m``-subsets of ``range(N)`` and their positions."""
    subsets = tuple(combinations(range(N), m))
    return subsets, {s: i for i, s in enumerate(subsets)}


def chirotope(vectors: np.ndarray) -> np.ndarray:
    """Signs ``det[x_i1 ... x_im]`` for every sorted ``m``-subset.

    ``vectors`` has shape ``(..., N, m)``; the output ``(..., C(N, m))``
    follows :func:`minor_index` order.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    N, m = vectors.shape[-2:]
    lead = vectors.shape[:-2]
    subsets, _ = minor_index(N, m)
    idx = np.array(subsets, dtype=np.intp).reshape(len(subsets), m)
    scaled = _normalize_rows(vectors.reshape(-1, N, m))
    if _laplace_cost(N, m) <= 2 * len(subsets):
        out = _minor_signs_laplace(scaled)
    else:
        out = _signs_of_minors(scaled, idx)
    return out.reshape(*lead, len(subsets))


@lru_cache(maxsize=64)
def simplex_table(N: int, m: int):
    """Index data for the ``(m+1)``-subsets of ``range(N)``.

    Returns ``(masks, minors, parity)``: the bitmask of each ``(m+1)``-subset
    ``T``, the minor index of ``T`` minus its ``i``-th element for each ``i``
    and the sign ``(-1)^i``.
    """
    _, pos = minor_index(N, m)
    simplices = list(combinations(range(N), m + 1))
    masks = np.array([sum(1 << t for t in T) for T in simplices], dtype=np.int64)
    minors = np.array(
        [[pos[T[:i] + T[i + 1 :]] for i in range(m + 1)] for T in simplices],
        dtype=np.intp,
    ).reshape(len(simplices), m + 1)
    parity = np.array([(-1) ** i for i in range(m + 1)], dtype=np.int8)
    return masks, minors, parity


def good_simplices(chi: np.ndarray, N: int, m: int) -> np.ndarray:
    """Boolean mask over ``(m+1)``-subsets whose hull contains the origin.

    For ``T = (t_0 < ... < t_m)`` in general position the unique linear
    dependence has coefficients ``(-1)^i det(T without t_i)``, so the origin
    lies in ``conv T`` exactly when those are all nonzero and of one sign.
    """
    _, minors, parity = simplex_table(N, m)
    s = chi[..., minors] * parity
    first = s[..., :1]
    return (first != 0)[..., 0] & (s == first).all(axis=-1)
