"""Brute-force oracles used to certify the fast paths at small sizes.

Both are deliberately naive: full enumeration, exact simplex per subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np
from scipy.optimize import linprog

from .galecore import EnumerationCapError, PointConfiguration
from .geomcore import DegenerateConfigError, VectorConfig, contains_origin, is_general_position
from .lp import free_system_solution

__all__ = ["FaceSetReport", "wendel_sign_oracle", "hull_faces", "SIGN_ORACLE_MAX_M"]

SIGN_ORACLE_MAX_M = 20


@dataclass(frozen=True)
class FaceSetReport:
    k: int
    faces: frozenset[frozenset[int]]


def wendel_sign_oracle(r: int, M: int, cfg: VectorConfig) -> Fraction:
    """Fraction of the ``2^M`` sign flips of ``cfg`` that miss the origin.

    For a symmetric law every sign pattern is equally likely given the
    absolute vectors, so this equals the Wendel probability exactly.
    """
    if cfg.dim != r or len(cfg) != M:
        raise ValueError(f"expected {M} vectors in dimension {r}")
    if M > SIGN_ORACLE_MAX_M:
        raise EnumerationCapError(f"M={M} exceeds the sign-oracle bound {SIGN_ORACLE_MAX_M}")
    if not is_general_position(cfg):
        raise DegenerateConfigError("sign oracle needs vectors in general position")
    # o lies in conv(X) iff it lies in conv(-X), so each pattern and its
    # global negation agree; fixing the first sign halves the enumeration.
    negated = [tuple(-x for x in v) for v in cfg.vectors]
    misses = 0
    for signs in product((False, True), repeat=M - 1):
        flipped = VectorConfig(
            r,
            (cfg.vectors[0],)
            + tuple(n if s else v for s, v, n in zip(signs, cfg.vectors[1:], negated[1:])),
        )
        if not contains_origin(flipped).feasible:
            misses += 2
    return Fraction(misses, 2**M)


def _affinely_general(points) -> bool:
    d = len(points[0])
    N = len(points)
    size = min(d + 1, N)
    for S in combinations(range(N), size):
        base = points[S[0]]
        rows = [[a - b for a, b in zip(points[i], base)] for i in S[1:]]
        if _rank(rows) != size - 1:
            return False
    return True


def _rank(rows) -> int:
    a = [list(r) for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, len(a)):
            if a[i][c] != 0:
                f = a[i][c] / a[rank][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def _solve_square(A, b):
    """Exact solution of a square system, or ``None`` if singular."""
    n = len(A)
    a = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[-1] for row in a]


def _certify_face(points, S, rest, u_float):
    """Exact check of a float supporting functional after projection.

    ``u`` is projected exactly onto the directions orthogonal to
    ``aff{a_i : i in S}``; then ``<u, a_j> < <u, a_s>`` must hold strictly
    for every ``j`` outside ``S``.
    """
    u = [Fraction(float(x)) for x in u_float]
    base = points[S[0]]
    D = [[a - b for a, b in zip(points[i], base)] for i in S[1:]]
    if D:
        gram = [[sum(x * y for x, y in zip(r1, r2)) for r2 in D] for r1 in D]
        rhs = [sum(x * y for x, y in zip(r, u)) for r in D]
        coef = _solve_square(gram, rhs)
        if coef is None:
            return False
        for cf, r in zip(coef, D):
            u = [x - cf * y for x, y in zip(u, r)]
    c = sum(x * y for x, y in zip(u, base))
    return all(sum(x * y for x, y in zip(u, points[j])) < c for j in rest)


def _certify_nonface(points, S, rest, z_float):
    """Exact point of ``conv{a_j : j in rest}`` lying on ``aff{a_i : i in S}``.

    This is the Farkas alternative of the supporting-hyperplane system.
    """
    d = len(points[0])
    take = d + 1 - (len(S) - 1)
    order = np.argsort(-np.asarray(z_float), kind="stable")[:take]
    Z = [rest[i] for i in sorted(order)]
    cols = [points[j] for j in Z] + [[-x for x in points[i]] for i in S]
    A = [[col[r] for col in cols] for r in range(d)]
    A.append([Fraction(1)] * len(Z) + [Fraction(0)] * len(S))
    A.append([Fraction(0)] * len(Z) + [Fraction(1)] * len(S))
    sol = _solve_square(A, [Fraction(0)] * d + [Fraction(1), Fraction(1)])
    return sol is not None and all(x >= 0 for x in sol[: len(Z)])


def _is_face_float_first(points, fpts, S, rest, rows):
    d = len(points[0])
    A_eq = np.hstack([fpts[list(S)], -np.ones((len(S), 1))])
    A_ub = np.hstack([fpts[rest], -np.ones((len(rest), 1))])
    res = linprog(
        np.zeros(d + 1),
        A_ub=A_ub,
        b_ub=-np.ones(len(rest)),
        A_eq=A_eq,
        b_eq=np.zeros(len(S)),
        bounds=[(None, None)] * (d + 1),
        method="highs",
    )
    if res.status == 0 and _certify_face(points, S, rest, res.x[:d]):
        return True
    if res.status == 2:
        n_z, n_w = len(rest), len(S)
        A = np.vstack(
            [
                np.hstack([fpts[rest].T, -fpts[list(S)].T]),
                np.r_[np.ones(n_z), np.zeros(n_w)],
                np.r_[np.zeros(n_z), np.ones(n_w)],
            ]
        )
        alt = linprog(
            np.zeros(n_z + n_w),
            A_eq=A,
            b_eq=np.r_[np.zeros(d), 1.0, 1.0],
            bounds=[(0, None)] * n_z + [(None, None)] * n_w,
            method="highs-ds",
        )
        if alt.status == 0 and _certify_nonface(points, S, rest, alt.x[:n_z]):
            return False
    eq = [rows[i] for i in S]
    le = [rows[j] for j in rest]
    return free_system_solution(eq, le) is not None


def hull_faces(
    pts: PointConfiguration,
    k: int,
    cap: int = 10**6,
    check_general: bool = True,
    exact_only: bool = False,
) -> FaceSetReport:
    """All ``(k+1)``-subsets whose hull is a ``k``-face of ``conv(pts)``.

    ``S`` is a face iff some ``(u, c)`` has ``<u, a_i> = c`` on ``S`` and
    ``<u, a_j> <= c - 1`` off ``S``. Indices are 0-based.

    With ``exact_only`` every subset goes through the exact simplex. By
    default a float LP proposes the answer and it is accepted only after an
    exact certificate (a projected supporting functional, or a point of
    ``conv(rest)`` on ``aff(S)``) checks out; otherwise the exact simplex
    decides.
    """
    N, d = pts.dims.N, pts.dims.d
    if not 0 <= k <= d - 1:
        raise ValueError(f"k must satisfy 0 <= k <= d-1, got {k}")
    if math.comb(N, k + 1) > cap:
        raise EnumerationCapError(f"C({N}, {k + 1}) exceeds the cap {cap}")
    if check_general and not _affinely_general(pts.points):
        raise DegenerateConfigError("points are not in affinely general position")
    # variables (u_1..u_d, c); rows encode <u, a> - c
    rows = [list(p) + [Fraction(-1)] for p in pts.points]
    fpts = np.array([[float(x) for x in p] for p in pts.points])
    faces = set()
    for S in combinations(range(N), k + 1):
        inside = set(S)
        rest = [j for j in range(N) if j not in inside]
        if exact_only:
            eq = [rows[i] for i in S]
            le = [rows[j] for j in rest]
            face = free_system_solution(eq, le) is not None
        else:
            face = _is_face_float_first(pts.points, fpts, S, rest, rows)
        if face:
            faces.add(frozenset(S))
    return FaceSetReport(k, frozenset(faces))
