"""Exact predicates on rational vector configurations."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .chirotope import exact_det_sign, det_signs
from .lp import solve_lp

__all__ = [
    "VectorConfig",
    "LPFeasibility",
    "DegenerateConfigError",
    "is_general_position",
    "contains_origin",
    "contains_origin_interior",
    "origin_in_hull",
    "origin_certificate",
    "origin_in_simplex",
    "EXHAUSTIVE_GP_LIMIT",
]

EXHAUSTIVE_GP_LIMIT = 16
GP_AUDIT_SUBSETS = 256


class DegenerateConfigError(ValueError):
    """Input violates linear general position."""


def _to_fraction(v) -> Fraction:
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    return Fraction(v)


@dataclass(frozen=True)
class VectorConfig:
    """An ordered sequence of nonzero vectors in ``Q^dim``."""

    dim: int
    vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        for v in self.vectors:
            if len(v) != self.dim:
                raise ValueError(f"vector {v} does not have dimension {self.dim}")
            if not any(v):
                raise ValueError("vectors must be nonzero")

    @classmethod
    def from_rows(cls, rows, dim: int | None = None) -> "VectorConfig":
        """Build from any nested sequence (floats are taken bit-exactly)."""
        if isinstance(rows, np.ndarray):
            rows = rows.tolist()
        vecs = tuple(tuple(_to_fraction(x) for x in row) for row in rows)
        if dim is None:
            if not vecs:
                raise ValueError("dim required for an empty configuration")
            dim = len(vecs[0])
        return cls(dim, vecs)

    def __len__(self) -> int:
        return len(self.vectors)

    def subconfig(self, indices: Sequence[int]) -> "VectorConfig":
        return VectorConfig(self.dim, tuple(self.vectors[i] for i in indices))

    @cached_property
    def _array(self) -> np.ndarray:
        arr = np.array([[float(x) for x in v] for v in self.vectors], dtype=float)
        arr = arr.reshape(len(self.vectors), self.dim)
        arr.setflags(write=False)
        return arr

    def to_array(self) -> np.ndarray:
        """Float64 view; exact when :meth:`is_float_exact` holds."""
        return self._array

    @cached_property
    def _float_exact(self) -> bool:
        return all(float(x) == x for v in self.vectors for x in v)

    def is_float_exact(self) -> bool:
        return self._float_exact


@dataclass(frozen=True)
class LPFeasibility:
    """Verified answer to "is the origin in the convex hull?".

    Feasible: ``certificate`` holds convex weights with weighted sum ``o``.
    Infeasible: ``certificate`` is a functional positive on every vector.
    """

    feasible: bool
    certificate: tuple[Fraction, ...]

    def verify(self, cfg: VectorConfig) -> bool:
        if self.feasible:
            return verify_weights(cfg, self.certificate)
        return verify_separator(cfg, self.certificate)


def _as_integers(vals: Sequence[Fraction]) -> list[int]:
    """Integers proportional to ``vals`` by a common positive factor."""
    scale = 1
    for v in vals:
        den = v.denominator
        if den != 1:
            scale = scale * den // math.gcd(scale, den)
    return [v.numerator * (scale // v.denominator) for v in vals]


def verify_weights(cfg: VectorConfig, weights: Sequence[Fraction]) -> bool:
    if len(weights) != len(cfg) or any(w < 0 for w in weights) or sum(weights) != 1:
        return False
    w = _as_integers(weights)
    for c in range(cfg.dim):
        col = _as_integers([v[c] for v in cfg.vectors])
        if sum(a * b for a, b in zip(w, col)) != 0:
            return False
    return True


def verify_separator(cfg: VectorConfig, u: Sequence[Fraction]) -> bool:
    if len(u) != cfg.dim:
        return False
    iu = _as_integers(u)
    return all(
        sum(a * b for a, b in zip(iu, _as_integers(v))) > 0 for v in cfg.vectors
    )


def is_general_position(cfg: VectorConfig, seed: int = 0) -> bool:
    """True iff every ``dim``-subset of the vectors is linearly independent.

    Exhaustive for up to 16 vectors. Larger inputs get a seeded audit of
    random subsets, which can only refute general position, never prove it.
    """
    m, N = cfg.dim, len(cfg)
    if N < m:
        # fewer vectors than the dimension: independence of the whole set
        return _rank(cfg.vectors) == N
    if N <= EXHAUSTIVE_GP_LIMIT:
        subsets = combinations(range(N), m)
        total = math.comb(N, m)
    else:
        rng = random.Random(seed)
        total = GP_AUDIT_SUBSETS
        subsets = (tuple(sorted(rng.sample(range(N), m))) for _ in range(total))
    if cfg.is_float_exact():
        arr = cfg.to_array()
        idx = np.array(list(subsets), dtype=np.intp).reshape(total, m)
        return bool((det_signs(arr[idx]) != 0).all())
    return all(exact_det_sign([cfg.vectors[i] for i in s]) != 0 for s in subsets)


def _rank(rows) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][c] != 0:
                f = a[i][c] / a[rank][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def contains_origin(cfg: VectorConfig) -> LPFeasibility:
    """Decide ``o in conv(vectors)`` by exact simplex, with a certificate.

    Phase one of ``{lambda >= 0, sum lambda = 1, sum lambda_i x_i = o}``;
    on infeasibility the Farkas multipliers of the coordinate rows form the
    separating functional.
    """
    if len(cfg) == 0:
        raise ValueError("configuration must be nonempty")
    N, m = len(cfg), cfg.dim
    A = [[v[c] for v in cfg.vectors] for c in range(m)] + [[1] * N]
    b = [0] * m + [1]
    res = solve_lp(None, A, b)
    if res.feasible:
        cert = LPFeasibility(True, res.x)
    else:
        # y = (u, t) with <x_i, u> + t >= 0 and t < 0
        cert = LPFeasibility(False, res.farkas[:m])
    if not cert.verify(cfg):
        raise ArithmeticError("certificate failed exact verification")
    return cert


def contains_origin_interior(cfg: VectorConfig) -> bool:
    """Origin in the interior of the hull, for inputs in general position.

    Raises :class:`DegenerateConfigError` otherwise.
    """
    if not is_general_position(cfg):
        raise DegenerateConfigError("configuration is not in linearly general position")
    if len(cfg) < cfg.dim + 1:
        return False
    return contains_origin(cfg).feasible


def _float_prepass(arr: np.ndarray):
    """HiGHS guess for ``o in conv(arr)``, certified in exact arithmetic.

    Returns ``(True, support)`` with a verified simplex around ``o``,
    ``(False, u)`` with a verified separating functional, or ``None``.
    """
    N, m = arr.shape
    res = linprog(
        np.zeros(m),
        A_ub=-arr,
        b_ub=-np.ones(N),
        bounds=[(None, None)] * m,
        method="highs",
    )
    if res.status == 0:
        u = tuple(Fraction(float(x)) for x in res.x)
        if all(_exact_dot(u, row) > 0 for row in arr.tolist()):
            return False, u
        return None
    if res.status != 2:
        return None
    res = linprog(
        np.zeros(N),
        A_eq=np.vstack([arr.T, np.ones(N)]),
        b_eq=np.r_[np.zeros(m), 1.0],
        bounds=(0, None),
        method="highs-ds",
    )
    if res.status != 0:
        return None
    support = np.sort(np.argsort(-res.x, kind="stable")[: m + 1])
    if origin_in_simplex(arr[support]):
        return True, tuple(int(i) for i in support)
    return None


def _exact_dot(u, row) -> Fraction:
    return sum((a * Fraction(b) for a, b in zip(u, row)), Fraction(0))


def origin_in_simplex(arr: np.ndarray) -> bool:
    """Exact test for ``m + 1`` float vectors in ``R^m``.

    The dependence coefficients are ``(-1)^i det(arr without row i)``; the
    origin is inside iff they are nonzero and share one sign.
    """
    m = arr.shape[1]
    minors = np.stack([np.delete(arr, i, axis=0) for i in range(m + 1)])
    s = det_signs(minors) * np.array([(-1) ** i for i in range(m + 1)], dtype=np.int8)
    return bool(s[0] != 0 and (s == s[0]).all())


def origin_certificate(cfg: VectorConfig, indices: Sequence[int]):
    """Exact ``o in conv{x_i : i in indices}`` with a reusable certificate.

    Returns ``(True, support)`` where ``support`` is a subset of ``indices``
    whose hull already contains ``o``, or ``(False, u)`` with
    ``<u, x_i> > 0`` for every ``i`` in ``indices``.
    """
    indices = list(indices)
    if not indices:
        return False, tuple(Fraction(0) for _ in range(cfg.dim))
    if cfg.is_float_exact():
        arr = cfg.to_array()[indices]
        if cfg.dim == 1:
            col = arr[:, 0]
            pos, neg = np.flatnonzero(col > 0), np.flatnonzero(col < 0)
            if pos.size and neg.size:
                return True, (indices[pos[0]], indices[neg[0]])
            return False, (Fraction(1 if pos.size else -1),)
        if len(indices) > cfg.dim:
            found = _float_prepass(arr)
            if found is not None:
                inside, cert = found
                if inside:
                    return True, tuple(indices[i] for i in cert)
                return False, cert
    res = contains_origin(cfg.subconfig(indices))
    if res.feasible:
        return True, tuple(i for i, w in zip(indices, res.certificate) if w > 0)
    return False, res.certificate


def origin_in_hull(arr: np.ndarray) -> bool:
    """Exact ``o in conv`` for the rows of a float64 array."""
    return origin_certificate(VectorConfig.from_rows(np.asarray(arr, dtype=float)),
                              range(len(arr)))[0]
