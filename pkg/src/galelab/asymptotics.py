"""Entropy exponent and the strong/weak neighborliness thresholds.

Natural logarithms throughout. ``0 log 0`` is taken as 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal

__all__ = [
    "AsymptoticParams",
    "entropy",
    "g_exponent",
    "rho_strong",
    "rho_weak",
    "threshold_curve",
    "ThresholdDomainError",
]

LOG2 = math.log(2.0)
_EDGE = 1e-15


class ThresholdDomainError(ValueError):
    """Raised when a threshold is requested outside its domain."""

    def __init__(self, delta, message):
        super().__init__(message)
        self.delta = delta


@dataclass(frozen=True)
class AsymptoticParams:
    delta: float
    rho: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")


def entropy(x: float) -> float:
    """Binary entropy ``-x log x - (1-x) log(1-x)`` in nats."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy is defined on [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log1p(-x)


def g_exponent(p: AsymptoticParams) -> float:
    """``G(delta, rho) = H(delta) + delta H(rho) - (1 - delta rho) log 2``."""
    return entropy(p.delta) + p.delta * entropy(p.rho) - (1.0 - p.delta * p.rho) * LOG2


def _g(delta: float, rho: float) -> float:
    return entropy(delta) + delta * entropy(rho) - (1.0 - delta * rho) * LOG2


def rho_strong(delta: float, tol: float = 1e-12) -> float:
    """Unique zero of ``G(delta, .)`` on ``(0, 1)``, for ``1/2 < delta < 1``.

    Bracketed bisection on ``[1e-15, 1 - 1e-15]``. ``G(delta, 0) < 0`` for
    ``delta > 1/2`` and ``G(delta, 1) > 0``, so below the root ``G`` is
    negative. Bisection stops once ``|G| < tol`` or the bracket collapses
    to adjacent floats.
    """
    if not 0.5 < delta < 1.0:
        raise ThresholdDomainError(
            delta, f"strong threshold needs 1/2 < delta < 1, got delta={delta}"
        )
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = _EDGE, 1.0 - _EDGE
    g_lo, g_hi = _g(delta, lo), _g(delta, hi)
    if not (g_lo < 0.0 < g_hi):
        raise ThresholdDomainError(delta, f"no sign change of G at delta={delta}")
    while True:
        mid = 0.5 * (lo + hi)
        g_mid = _g(delta, mid)
        if abs(g_mid) < tol or mid in (lo, hi):
            return mid
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid


def rho_weak(delta: float) -> float:
    """``max(0, 2 - 1/delta)`` on ``0 < delta < 1``."""
    if not 0.0 < delta < 1.0:
        raise ThresholdDomainError(
            delta, f"weak threshold needs 0 < delta < 1, got delta={delta}"
        )
    return max(0.0, 2.0 - 1.0 / delta)


def threshold_curve(
    which: Literal["strong", "weak"], grid: Iterable[float], tol: float = 1e-12
) -> list[tuple[float, float]]:
    """Tabulate a threshold over ``grid``, preserving grid order.

    A point outside the domain raises :class:`ThresholdDomainError` naming
    the offending ``delta``.
    """
    if which == "strong":
        return [(delta, rho_strong(delta, tol)) for delta in grid]
    if which == "weak":
        return [(delta, rho_weak(delta)) for delta in grid]
    raise ValueError(f"which must be 'strong' or 'weak', got {which!r}")
