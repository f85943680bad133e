"""Gale transforms, realizations and face counting through the Gale criterion.

A ``(k+1)``-subset ``I`` spans a ``k``-face of the realized polytope exactly
when the origin lies in the convex hull of the diagram vectors outside
``I``. All face counting reduces to that predicate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .chirotope import chirotope, good_simplices, simplex_table
from .exactcomb import Dims, binomial
from .geomcore import (
    VectorConfig,
    is_general_position,
    origin_certificate,
)
from .lp import solve_lp

__all__ = [
    "GaleDiagram",
    "PointConfiguration",
    "DependenceWeights",
    "FaceCount",
    "EnumerationCapError",
    "PreconditionError",
    "DEFAULT_ENUMERATION_CAP",
    "gale_transform",
    "positive_dependence",
    "realize",
    "is_face",
    "count_faces",
    "face_sets",
    "is_k_neighborly",
    "null_space",
]

DEFAULT_ENUMERATION_CAP = 10**7
# largest C(N, m+1) for which face counting goes through the chirotope
CHIROTOPE_LIMIT = 20_000


class EnumerationCapError(RuntimeError):
    """Subset enumeration would exceed the configured cap."""


class PreconditionError(ValueError):
    """A structural precondition of the input does not hold."""


@dataclass(frozen=True)
class GaleDiagram:
    """``N`` vectors in ``R^(N-d-1)`` in general position with ``o`` in their hull."""

    dims: Dims
    vectors: VectorConfig

    def __post_init__(self):
        if self.vectors.dim != self.dims.m:
            raise PreconditionError(
                f"diagram vectors must have dimension N-d-1={self.dims.m}, "
                f"got {self.vectors.dim}"
            )
        if len(self.vectors) != self.dims.N:
            raise PreconditionError(
                f"expected N={self.dims.N} vectors, got {len(self.vectors)}"
            )
        if not is_general_position(self.vectors):
            raise PreconditionError("diagram vectors are not in linearly general position")
        if not _origin_in_hull(self.vectors, range(self.dims.N)):
            raise PreconditionError("origin is not in the convex hull of the diagram")

    @classmethod
    def from_rows(cls, d: int, rows) -> "GaleDiagram":
        cfg = VectorConfig.from_rows(rows)
        N = len(cfg)
        # k is irrelevant to the diagram itself; 0 is always valid
        return cls(Dims(d, N, 0), cfg)

    def array(self) -> np.ndarray:
        return self.vectors.to_array()


@dataclass(frozen=True)
class DependenceWeights:
    lambdas: tuple[Fraction, ...]


@dataclass(frozen=True)
class PointConfiguration:
    """``N`` points affinely spanning ``R^d``."""

    dims: Dims
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.points) != self.dims.N:
            raise PreconditionError(f"expected {self.dims.N} points, got {len(self.points)}")
        if any(len(p) != self.dims.d for p in self.points):
            raise PreconditionError(f"points must have dimension {self.dims.d}")
        lifted = [list(p) + [Fraction(1)] for p in self.points]
        if _rank(lifted) != self.dims.d + 1:
            raise PreconditionError("points do not affinely span R^d")

    @classmethod
    def from_rows(cls, rows) -> "PointConfiguration":
        pts = tuple(tuple(Fraction(x) for x in row) for row in rows)
        d = len(pts[0])
        return cls(Dims(d, len(pts), 0), pts)


@dataclass(frozen=True)
class FaceCount:
    dims: Dims
    count: int
    is_complete_neighborly: bool


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; pivot = first nonzero entry in column order."""
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def _rank(rows) -> int:
    return len(_rref([[Fraction(x) for x in r] for r in rows])[1])


def null_space(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Exact basis of ``{x : rows @ x = 0}``, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = _rref([[Fraction(x) for x in r] for r in rows])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def gale_transform(pts: PointConfiguration) -> VectorConfig:
    """Gale transform of an affinely spanning point sequence.

    The affine dependences of the points form an ``(N-d-1)``-dimensional
    space; a basis of it gives the rows of the lower block, whose columns
    are the transform vectors.
    """
    d, N = pts.dims.d, pts.dims.N
    upper = [[p[i] for p in pts.points] for i in range(d)] + [[Fraction(1)] * N]
    if _rank(upper) != d + 1:
        raise PreconditionError("points do not affinely span R^d")
    basis = null_space(upper, N)
    return VectorConfig(N - d - 1, tuple(tuple(row[j] for row in basis) for j in range(N)))


def positive_dependence(diagram: GaleDiagram) -> DependenceWeights:
    """Strictly positive ``lambda`` with ``sum lambda_i X_i = o`` and ``sum lambda = 1``.

    Maximises the smallest weight: ``lambda_i = t + mu_i`` with ``t, mu >= 0``.
    """
    X = diagram.vectors.vectors
    N, m = len(X), diagram.vectors.dim
    col_sums = [sum(v[c] for v in X) for c in range(m)]
    A = [[col_sums[c]] + [v[c] for v in X] for c in range(m)]
    A.append([Fraction(N)] + [Fraction(1)] * N)
    b = [0] * m + [1]
    cost = [-1] + [0] * N
    res = solve_lp(cost, A, b)
    if res.status != "optimal" or res.x[0] <= 0:
        raise PreconditionError("diagram admits no strictly positive linear dependence")
    t = res.x[0]
    lambdas = tuple(t + mu for mu in res.x[1:])
    for c in range(m):
        if sum(l * v[c] for l, v in zip(lambdas, X)) != 0:
            raise ArithmeticError("dependence failed exact verification")
    return DependenceWeights(lambdas)


def realize(diagram: GaleDiagram) -> PointConfiguration:
    """A point sequence whose Gale transform is a positive rescaling of ``diagram``.

    Coordinate rows are the exact null-space basis (deterministic pivots) of
    the scaled diagram rows stacked with the all-ones row, so the points
    are centred at the origin.
    """
    lam = positive_dependence(diagram).lambdas
    X = diagram.vectors.vectors
    N, m, d = len(X), diagram.vectors.dim, diagram.dims.d
    lower = [[l * v[c] for l, v in zip(lam, X)] for c in range(m)]
    coords = null_space(lower + [[Fraction(1)] * N], N)
    if len(coords) != d:
        raise PreconditionError("scaled diagram does not span R^(N-d-1)")
    points = tuple(tuple(row[j] for row in coords) for j in range(N))
    return PointConfiguration(Dims(d, N, 0), points)


def _origin_in_hull(cfg: VectorConfig, indices: Iterable[int]) -> bool:
    return origin_certificate(cfg, list(indices))[0]


def is_face(diagram: GaleDiagram, index_set: Iterable[int]) -> bool:
    """Whether the points indexed by ``index_set`` (0-based) span a face."""
    I = set(index_set)
    N = diagram.dims.N
    if any(not 0 <= i < N for i in I):
        raise ValueError(f"indices must lie in range({N})")
    if len(I) > diagram.dims.d:
        raise ValueError(f"index set larger than d={diagram.dims.d}")
    rest = [j for j in range(N) if j not in I]
    return _origin_in_hull(diagram.vectors, rest)


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _face_flags_chirotope(arr: np.ndarray, size: int) -> np.ndarray:
    """Face flag per ``size``-subset (combinations order) via the chirotope."""
    N, m = arr.shape
    chi = chirotope(arr)
    if (chi == 0).any():
        raise PreconditionError("diagram vectors are not in linearly general position")
    return _face_flags_from_chi(chi, N, m, size)


def _face_flags_from_chi(chi: np.ndarray, N: int, m: int, size: int) -> np.ndarray:
    masks, _, _ = simplex_table(N, m)
    good = masks[good_simplices(chi, N, m)]
    subsets = _subset_masks(N, size)
    flags = np.zeros(len(subsets), dtype=bool)
    if good.size == 0:
        return flags
    step = max(1, 4_000_000 // good.size)
    for lo in range(0, len(subsets), step):
        block = subsets[lo : lo + step]
        flags[lo : lo + step] = ((block[:, None] & good[None, :]) == 0).any(axis=1)
    return flags


_SUBSET_CACHE: dict = {}


def _subset_masks(N: int, size: int) -> np.ndarray:
    key = (N, size)
    if key not in _SUBSET_CACHE:
        _SUBSET_CACHE[key] = np.fromiter(
            (_mask(s) for s in combinations(range(N), size)),
            dtype=np.int64,
            count=math.comb(N, size),
        )
    return _SUBSET_CACHE[key]


def _face_flags_certified(cfg: VectorConfig, size: int) -> list[bool]:
    """Face flag per ``size``-subset, reusing certificates across subsets.

    A witness (indices whose hull contains ``o``) disjoint from ``I`` proves
    ``I`` is a face; a functional positive off a set ``T`` with ``T``
    contained in ``I`` proves it is not.
    """
    N = len(cfg)
    full = (1 << N) - 1
    witnesses: list[int] = []
    blockers: list[int] = []
    flags = []
    for I in combinations(range(N), size):
        im = _mask(I)
        if any(not (w & im) for w in witnesses):
            flags.append(True)
            continue
        if any(not (t & ~im) for t in blockers):
            flags.append(False)
            continue
        rest = [j for j in range(N) if not (im >> j) & 1]
        inside, cert = origin_certificate(cfg, rest)
        if inside:
            witnesses.append(_mask(cert))
        else:
            nonpos = [
                j
                for j, v in enumerate(cfg.vectors)
                if sum(a * b for a, b in zip(cert, v)) <= 0
            ]
            blockers.append(_mask(nonpos) & full)
        flags.append(inside)
    return flags


def face_flags(diagram: GaleDiagram, k: int) -> list[bool]:
    """Face flag for every ``(k+1)``-subset in lexicographic order."""
    N, m = diagram.dims.N, diagram.dims.m
    if math.comb(N, m + 1) <= CHIROTOPE_LIMIT and diagram.vectors.is_float_exact():
        return _face_flags_chirotope(diagram.array(), k + 1).tolist()
    return _face_flags_certified(diagram.vectors, k + 1)


def face_sets(diagram: GaleDiagram, k: int) -> set[frozenset[int]]:
    """All ``(k+1)``-subsets spanning ``k``-faces, by the Gale criterion."""
    flags = face_flags(diagram, k)
    return {
        frozenset(I)
        for I, f in zip(combinations(range(diagram.dims.N), k + 1), flags)
        if f
    }


def _check_k(dims: Dims, k: int, cap: int) -> None:
    if not 0 <= k <= dims.d - 1:
        raise ValueError(f"k must satisfy 0 <= k <= d-1={dims.d - 1}, got {k}")
    if math.comb(dims.N, k + 1) > cap:
        raise EnumerationCapError(
            f"C({dims.N}, {k + 1}) = {math.comb(dims.N, k + 1)} exceeds the "
            f"enumeration cap {cap}"
        )


def count_faces(
    diagram: GaleDiagram, k: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> FaceCount:
    """Exact ``f_k`` by enumerating all ``C(N, k+1)`` complements."""
    _check_k(diagram.dims, k, cap)
    count = sum(face_flags(diagram, k))
    dims = Dims(diagram.dims.d, diagram.dims.N, k)
    return FaceCount(dims, count, count == binomial(dims.N, k + 1))


def is_k_neighborly(
    diagram: GaleDiagram, j: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> bool:
    """Every ``j`` of the points span a face, i.e. ``f_(j-1) = C(N, j)``."""
    if not 1 <= j <= diagram.dims.d:
        raise ValueError(f"j must satisfy 1 <= j <= d={diagram.dims.d}, got {j}")
    return count_faces(diagram, j - 1, cap).is_complete_neighborly


def count_faces_array(arr: np.ndarray, k: int) -> int:
    """``f_k`` for a float diagram array; used by the Monte Carlo loops."""
    N, m = arr.shape
    if math.comb(N, m + 1) <= CHIROTOPE_LIMIT:
        return int(_face_flags_chirotope(arr, k + 1).sum())
    return sum(_face_flags_certified(VectorConfig.from_rows(arr), k + 1))
