"""Exact two-phase simplex over the rationals.

Solves ``min c.x  s.t.  A x = b, x >= 0`` with Bland's rule. The tableau is
kept fraction-free (integer entries over a common positive denominator, the
basis determinant), so every pivot is a handful of exact integer
multiplications followed by an exact division. This is much faster than
``Fraction`` arithmetic and gives identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["LPResult", "solve_lp", "free_system_solution", "Rational"]

Rational = int | Fraction


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`solve_lp`.

    ``status`` is ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.
    For ``"infeasible"``, ``farkas`` holds ``y`` with ``A^T y >= 0`` and
    ``b.y < 0``.
    """

    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    farkas: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _integer_row(row: Sequence[Rational], rhs: Rational) -> tuple[list[int], int, int]:
    """Scale ``row | rhs`` to integers with a nonnegative right-hand side.

    Returns the integer row, integer rhs and the (signed) scale applied.
    """
    vals = [v if isinstance(v, (int, Fraction)) else Fraction(v) for v in (*row, rhs)]
    scale = 1
    for v in vals:
        den = v.denominator
        if den != 1:
            scale = scale * den // math.gcd(scale, den)
    if vals[-1] < 0:
        scale = -scale
    ints = [v.numerator * (scale // v.denominator) for v in vals]
    return ints[:-1], ints[-1], scale


class _Tableau:
    # rows[0] is the objective row (reduced costs, then -objective in the rhs
    # slot); rows[1:] are constraints. Real value of an entry is entry / den.

    def __init__(self, rows, basis, den=1):
        self.rows = rows
        self.basis = basis
        self.den = den

    def pivot(self, r: int, c: int) -> None:
        rows, den = self.rows, self.den
        prow = rows[r]
        p = prow[c]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[c]
            if f:
                rows[i] = [(a * p - f * b) // den for a, b in zip(row, prow)]
            else:
                rows[i] = [(a * p) // den for a in row]
        if p < 0:
            for i, row in enumerate(rows):
                rows[i] = [-a for a in row]
            p = -p
        self.den = p
        self.basis[r - 1] = c

    def run(self, allowed: int) -> str:
        """Bland's-rule iterations on columns ``< allowed``."""
        rows = self.rows
        while True:
            obj = rows[0]
            c = next((j for j in range(allowed) if obj[j] < 0), None)
            if c is None:
                return "optimal"
            best = None
            for i in range(1, len(rows)):
                a = rows[i][c]
                if a <= 0:
                    continue
                rhs = rows[i][-1]
                if best is None:
                    best = i
                    continue
                b_rhs, b_a = rows[best][-1], rows[best][c]
                lhs, rhs_cmp = rhs * b_a, b_rhs * a
                if lhs < rhs_cmp or (
                    lhs == rhs_cmp and self.basis[i - 1] < self.basis[best - 1]
                ):
                    best = i
            if best is None:
                return "unbounded"
            self.pivot(best, c)


def solve_lp(
    c: Sequence[Rational] | None,
    A: Sequence[Sequence[Rational]],
    b: Sequence[Rational],
) -> LPResult:
    """Minimise ``c.x`` subject to ``A x = b``, ``x >= 0`` exactly.

    Pass ``c=None`` for a pure feasibility problem. Inputs may be ints or
    Fractions; outputs are Fractions.
    """
    m = len(A)
    n = len(A[0]) if m else (len(c) if c is not None else 0)
    if len(b) != m:
        raise ValueError("A and b have inconsistent row counts")
    if m == 0:
        if c is not None and any(Fraction(v) < 0 for v in c):
            return LPResult("unbounded")
        return LPResult("optimal", tuple(Fraction(0) for _ in range(n)), Fraction(0))

    scales = []
    cons = []
    for i, (row, rhs) in enumerate(zip(A, b)):
        if len(row) != n:
            raise ValueError("ragged constraint matrix")
        ints, irhs, s = _integer_row(row, rhs)
        scales.append(s)
        cons.append(ints + [1 if j == i else 0 for j in range(m)] + [irhs])

    width = n + m + 1
    obj = [0] * width
    for row in cons:
        for j in range(n):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    tab = _Tableau([obj] + cons, list(range(n, n + m)))
    tab.run(n + m)

    if tab.rows[0][-1] != 0:
        # phase-one optimum is positive; duals of the artificial columns
        # give the Farkas vector
        den = tab.den
        y = [1 - Fraction(tab.rows[0][n + i], den) for i in range(m)]
        farkas = tuple(-s * yi for s, yi in zip(scales, y))
        return LPResult("infeasible", farkas=farkas)

    # drive zero-level artificials out of the basis, dropping redundant rows
    r = 1
    while r < len(tab.rows):
        if tab.basis[r - 1] >= n:
            row = tab.rows[r]
            col = next((j for j in range(n) if row[j] != 0), None)
            if col is None:
                del tab.rows[r]
                del tab.basis[r - 1]
                continue
            tab.pivot(r, col)
        r += 1
    tab.rows = [row[:n] + row[-1:] for row in tab.rows]

    if c is None:
        cost = [0] * n
        cscale = 1
    else:
        if len(c) != n:
            raise ValueError("objective length does not match A")
        cost, _, cscale = _integer_row(c, 0)
    den = tab.den
    obj = [den * cj for cj in cost] + [0]
    for i, bj in enumerate(tab.basis, start=1):
        cb = cost[bj]
        if cb:
            row = tab.rows[i]
            obj = [o - cb * a for o, a in zip(obj, row)]
    tab.rows[0] = obj
    status = tab.run(n)
    if status == "unbounded":
        return LPResult("unbounded")

    den = tab.den
    x = [Fraction(0)] * n
    for i, bj in enumerate(tab.basis, start=1):
        x[bj] = Fraction(tab.rows[i][-1], den)
    value = Fraction(-tab.rows[0][-1], den * cscale)
    return LPResult("optimal", tuple(x), value)


def free_system_solution(
    eq_rows: Sequence[Sequence[Rational]], le_rows: Sequence[Sequence[Rational]]
) -> tuple[Fraction, ...] | None:
    """Free ``v`` with ``e.v = 0`` on ``eq_rows`` and ``g.v <= -1`` on ``le_rows``.

    Returns ``v`` exactly, or ``None`` when the system is infeasible.
    """
    rows = list(eq_rows) + list(le_rows)
    if not rows:
        raise ValueError("empty system")
    n = len(rows[0])
    k = len(le_rows)
    A, b = [], []
    for row in eq_rows:
        A.append(list(row) + [-x for x in row] + [0] * k)
        b.append(0)
    for j, row in enumerate(le_rows):
        A.append(list(row) + [-x for x in row] + [int(i == j) for i in range(k)])
        b.append(-1)
    res = solve_lp(None, A, b)
    if not res.feasible:
        return None
    return tuple(p - q for p, q in zip(res.x[:n], res.x[n : 2 * n]))
