"""Seeded Monte Carlo for random Gale diagrams and Cover-Efron cones.

Every trial draws from its own Philox stream keyed by ``(seed, trial)``, so
results depend only on ``(seed, trials)`` and never on how trials are
scheduled across worker processes. Samples are float64 and are read as
exact rationals by all predicates.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .chirotope import chirotope, good_simplices, minor_index
from .exactcomb import (
    Dims,
    binomial,
    expected_fk,
    expected_fk_ratio,
    neighborly_prob_lower_bound,
    wendel,
)
from .galecore import (
    CHIROTOPE_LIMIT,
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    GaleDiagram,
    _face_flags_certified,
    _face_flags_from_chi,
)
from .geomcore import VectorConfig, origin_in_hull
from .lp import free_system_solution

__all__ = [
    "DISTRIBUTIONS",
    "WORKERS_ENV",
    "SamplerConfig",
    "MCEstimate",
    "ConeSample",
    "DualityReport",
    "PhaseRow",
    "RejectionBudgetExceeded",
    "trial_rng",
    "sample_gale_diagram",
    "sample_cover_efron",
    "count_cone_faces",
    "estimate_fk",
    "estimate_neighborly_prob",
    "estimate_cone_fk",
    "estimate_containment",
    "estimate_acceptance",
    "verify_duality_identity",
    "phase_experiment",
    "phase_dims",
]

DISTRIBUTIONS = ("gaussian-iid", "uniform-sphere")
WORKERS_ENV = "GALELAB_WORKERS"
_CHUNK = 256


class RejectionBudgetExceeded(RuntimeError):
    """The conditioning event was not hit within ``max_rejections`` redraws."""


@dataclass(frozen=True)
class SamplerConfig:
    dims: Dims
    distribution: str = "gaussian-iid"
    seed: int = 0
    max_rejections: int = 10**6

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(
                f"distribution must be one of {DISTRIBUTIONS}, got {self.distribution!r}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.max_rejections < 1:
            raise ValueError("max_rejections must be positive")


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with standard error and a normal 95% interval.

    With a single trial the standard error is undefined; it is reported
    as 0 and ``stderr_defined`` is False.
    """

    mean: float
    stderr: float
    ci95: tuple[float, float]
    trials: int
    seed: int
    rejected: int = 0
    stderr_defined: bool = True

    @classmethod
    def from_outcomes(cls, outcomes: Sequence[int], seed: int, rejected: int = 0):
        n = len(outcomes)
        if n == 0:
            raise ValueError("need at least one trial")
        s1 = sum(outcomes)
        mean = s1 / n
        if n == 1:
            return cls(mean, 0.0, (mean, mean), 1, seed, rejected, False)
        s2 = sum(x * x for x in outcomes)
        var = Fraction(n * s2 - s1 * s1, n * (n - 1))
        stderr = math.sqrt(var / n)
        half = 1.96 * stderr
        return cls(mean, stderr, (mean - half, mean + half), n, seed, rejected)

    def within(self, value, nsigma: float = 3.0) -> bool:
        """``|mean - value| <= nsigma * stderr``."""
        return abs(self.mean - float(value)) <= nsigma * self.stderr


@dataclass(frozen=True)
class ConeSample:
    """``N`` vectors in ``R^(d+1)`` whose positive hull is a proper cone."""

    dims: Dims
    vectors: VectorConfig

    def __post_init__(self):
        if self.vectors.dim != self.dims.d + 1 or len(self.vectors) != self.dims.N:
            raise ValueError("cone sample must hold N vectors in dimension d+1")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent counter-based stream for one trial."""
    ss = np.random.SeedSequence(seed, spawn_key=(trial,))
    return np.random.Generator(np.random.Philox(ss))


def _draw(rng: np.random.Generator, n: int, dim: int, distribution: str) -> np.ndarray:
    x = rng.standard_normal((n, dim))
    if distribution == "uniform-sphere":
        x = x / np.linalg.norm(x, axis=1, keepdims=True)
    return x


def _inside(arr: np.ndarray):
    """``(o in conv, chirotope or None)``; ``None`` inside if degenerate."""
    N, dim = arr.shape
    if math.comb(N, dim + 1) <= CHIROTOPE_LIMIT:
        chi = chirotope(arr)
        if (chi == 0).any():
            return None, chi
        if N <= dim:
            return False, chi
        return bool(good_simplices(chi, N, dim).any()), chi
    return origin_in_hull(arr), None


def _draw_conditioned(rng, N, dim, distribution, max_rejections, want_inside, expected):
    rejected = 0
    while True:
        arr = _draw(rng, N, dim, distribution)
        inside, chi = _inside(arr)
        if inside is not None and inside == want_inside:
            return arr, chi, rejected
        rejected += 1
        if rejected > max_rejections:
            raise RejectionBudgetExceeded(
                f"no accepted sample after {max_rejections} rejections; "
                f"expected acceptance probability is {expected} "
                f"(~{float(expected):.3g})"
            )


def _gale_draw(cfg: SamplerConfig, trial: int):
    d, N = cfg.dims.d, cfg.dims.N
    return _draw_conditioned(
        trial_rng(cfg.seed, trial),
        N,
        N - d - 1,
        cfg.distribution,
        cfg.max_rejections,
        True,
        wendel(d + 1, N),
    )


def _cone_draw(cfg: SamplerConfig, trial: int):
    d, N = cfg.dims.d, cfg.dims.N
    return _draw_conditioned(
        trial_rng(cfg.seed, trial),
        N,
        d + 1,
        cfg.distribution,
        cfg.max_rejections,
        False,
        wendel(d + 1, N),
    )


def sample_gale_diagram(cfg: SamplerConfig, trial: int = 0) -> GaleDiagram:
    """Random Gale diagram: i.i.d. vectors in ``R^(N-d-1)`` redrawn until ``o`` is in their hull."""
    arr, _, _ = _gale_draw(cfg, trial)
    return GaleDiagram(cfg.dims, VectorConfig.from_rows(arr))


def sample_cover_efron(cfg: SamplerConfig, trial: int = 0) -> ConeSample:
    """i.i.d. vectors in ``R^(d+1)`` redrawn until their positive hull is proper."""
    arr, _, _ = _cone_draw(cfg, trial)
    return ConeSample(cfg.dims, VectorConfig.from_rows(arr))


@lru_cache(maxsize=64)
def _cone_table(N: int, r: int, j: int):
    """Index data for cone faces of size ``j`` via contraction.

    For each ``j``-subset ``J`` and each ``(r-j+1)``-subset ``T`` of the
    rest, the minor positions and signs of ``det(J, T without t_i)`` with
    ``J`` placed first, times ``(-1)^i``.
    """
    _, pos = minor_index(N, r)
    rr = r - j
    idx, sgn = [], []
    for J in combinations(range(N), j):
        rest = [i for i in range(N) if i not in J]
        rows_i, rows_s = [], []
        for T in combinations(rest, rr + 1):
            ii, ss = [], []
            for t in range(rr + 1):
                S = T[:t] + T[t + 1 :]
                inv = sum(1 for a in J for b in S if a > b)
                ii.append(pos[tuple(sorted(J + S))])
                ss.append((-1) ** (inv + t))
            rows_i.append(ii)
            rows_s.append(ss)
        idx.append(rows_i)
        sgn.append(rows_s)
    nT = math.comb(N - j, rr + 1)
    idx = np.array(idx, dtype=np.intp).reshape(len(idx), nT, rr + 1)
    sgn = np.array(sgn, dtype=np.int8).reshape(len(sgn), nT, rr + 1)
    return idx, sgn


def _cone_faces_from_chi(chi: np.ndarray, N: int, r: int, j: int) -> int:
    idx, sgn = _cone_table(N, r, j)
    if idx.shape[1] == 0:
        return idx.shape[0]
    s = chi[idx] * sgn
    first = s[..., :1]
    blocked = ((first != 0)[..., 0] & (s == first).all(axis=-1)).any(axis=1)
    return int((~blocked).sum())


def count_cone_faces(
    cone: ConeSample | VectorConfig, j: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> int:
    """Number of ``j``-subsets ``J`` with ``pos{Z_i : i in J}`` a ``j``-face.

    ``J`` is a face iff some ``u`` vanishes on ``Z_J`` and is negative on
    the rest; for general position this is decided on the chirotope of the
    contraction by ``J``, otherwise by exact LP. A bare
    :class:`VectorConfig` is accepted for cones too small to carry
    valid :class:`Dims`.
    """
    cfg = cone.vectors if isinstance(cone, ConeSample) else cone
    N, r = len(cfg), cfg.dim
    if not 1 <= j <= r:
        raise ValueError(f"j must satisfy 1 <= j <= d+1={r}, got {j}")
    if math.comb(N, j) > cap:
        raise EnumerationCapError(f"C({N}, {j}) exceeds the enumeration cap {cap}")
    if cfg.is_float_exact() and math.comb(N, r) <= CHIROTOPE_LIMIT and N >= r:
        chi = chirotope(cfg.to_array())
        if not (chi == 0).any():
            return _cone_faces_from_chi(chi, N, r, j)
    count = 0
    for J in combinations(range(N), j):
        eq = [cfg.vectors[i] for i in J]
        le = [cfg.vectors[i] for i in range(N) if i not in J]
        if not le:
            count += 1
        elif free_system_solution(eq, le) is not None:
            count += 1
    return count


# --- per-trial workers (module level so they pickle) -------------------------


def _gale_fk_trial(cfg: SamplerConfig, k: int, trial: int) -> tuple[int, int]:
    arr, chi, rej = _gale_draw(cfg, trial)
    N, m = arr.shape
    if chi is not None:
        count = int(_face_flags_from_chi(chi, N, m, k + 1).sum())
    else:
        count = sum(_face_flags_certified(VectorConfig.from_rows(arr), k + 1))
    return count, rej


def _gale_neighborly_trial(cfg: SamplerConfig, k: int, trial: int) -> tuple[int, int]:
    count, rej = _gale_fk_trial(cfg, k, trial)
    return int(count == math.comb(cfg.dims.N, k + 1)), rej


def _cone_fk_trial(cfg: SamplerConfig, k: int, trial: int) -> tuple[int, int]:
    arr, chi, rej = _cone_draw(cfg, trial)
    N, r = arr.shape
    if chi is not None:
        return _cone_faces_from_chi(chi, N, r, k + 1), rej
    cone = ConeSample(cfg.dims, VectorConfig.from_rows(arr))
    return count_cone_faces(cone, k + 1), rej


def _containment_chunk(seed, r, M, distribution, lo, hi) -> list[int]:
    arrs = np.stack([_draw(trial_rng(seed, t), M, r, distribution) for t in range(lo, hi)])
    if math.comb(M, r + 1) > CHIROTOPE_LIMIT:
        return [int(origin_in_hull(a)) for a in arrs]
    if M <= r:
        return [0] * (hi - lo)
    chi = chirotope(arrs)
    hit = good_simplices(chi, M, r).any(axis=-1)
    out = hit.astype(int).tolist()
    for i in np.flatnonzero((chi == 0).any(axis=-1)):
        out[i] = int(origin_in_hull(arrs[i]))
    return out


def _apply_chunk(fn, args, lo, hi):
    return [fn(*args, t) for t in range(lo, hi)]


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    return max(1, int(workers))


def _run(fn: Callable, args: tuple, trials: int, workers: int | None) -> list:
    if trials < 1:
        raise ValueError("trials must be positive")
    workers = resolve_workers(workers)
    bounds = [(lo, min(lo + _CHUNK, trials)) for lo in range(0, trials, _CHUNK)]
    if workers == 1 or len(bounds) == 1:
        parts = [_apply_chunk(fn, args, lo, hi) for lo, hi in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_apply_chunk, fn, args, lo, hi) for lo, hi in bounds]
            parts = [f.result() for f in futures]
    return [x for part in parts for x in part]


def _estimate(fn, cfg: SamplerConfig, k: int, trials: int, workers) -> MCEstimate:
    if not 0 <= k <= cfg.dims.d - 1:
        raise ValueError(f"k must satisfy 0 <= k <= d-1, got {k}")
    results = _run(fn, (cfg, k), trials, workers)
    return MCEstimate.from_outcomes(
        [c for c, _ in results], cfg.seed, sum(r for _, r in results)
    )


def estimate_fk(
    cfg: SamplerConfig, k: int, trials: int, workers: int | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> MCEstimate:
    """Monte Carlo mean of ``f_k`` over conditioned random Gale diagrams."""
    if math.comb(cfg.dims.N, k + 1) > cap:
        raise EnumerationCapError(f"C({cfg.dims.N}, {k + 1}) exceeds the cap {cap}")
    return _estimate(_gale_fk_trial, cfg, k, trials, workers)


def estimate_neighborly_prob(
    cfg: SamplerConfig, k: int, trials: int, workers: int | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> MCEstimate:
    """Monte Carlo estimate of ``P(f_k = C(N, k+1))``.

    Trials are keyed by index, so two calls with the same seed and
    different ``k`` see the same diagrams.
    """
    if math.comb(cfg.dims.N, k + 1) > cap:
        raise EnumerationCapError(f"C({cfg.dims.N}, {k + 1}) exceeds the cap {cap}")
    return _estimate(_gale_neighborly_trial, cfg, k, trials, workers)


def estimate_cone_fk(
    cfg: SamplerConfig, k: int, trials: int, workers: int | None = None
) -> MCEstimate:
    """Monte Carlo mean of ``f_(k+1)`` of the Cover-Efron cone in ``R^(d+1)``."""
    return _estimate(_cone_fk_trial, cfg, k, trials, workers)


def estimate_containment(
    r: int, M: int, trials: int, seed: int,
    distribution: str = "gaussian-iid", workers: int | None = None,
) -> MCEstimate:
    """Unconditioned frequency of ``o in conv`` for ``M`` i.i.d. vectors in ``R^r``."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if distribution not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {distribution!r}")
    workers = resolve_workers(workers)
    step = 1024
    bounds = [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]
    args = (seed, r, M, distribution)
    if workers == 1 or len(bounds) == 1:
        parts = [_containment_chunk(*args, lo, hi) for lo, hi in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_containment_chunk, *args, lo, hi) for lo, hi in bounds]
            parts = [f.result() for f in futures]
    return MCEstimate.from_outcomes([x for p in parts for x in p], seed)


def estimate_acceptance(
    cfg: SamplerConfig, trials: int, model: str = "gale", workers: int | None = None
) -> MCEstimate:
    """Frequency with which one unconditioned draw satisfies the conditioning event.

    Both models accept with probability ``wendel(d+1, N)``.
    """
    d, N = cfg.dims.d, cfg.dims.N
    if model == "gale":
        est = estimate_containment(N - d - 1, N, trials, cfg.seed, cfg.distribution, workers)
        return est
    if model == "cone":
        est = estimate_containment(d + 1, N, trials, cfg.seed, cfg.distribution, workers)
        flipped = 1.0 - est.mean
        return MCEstimate(
            flipped, est.stderr, (flipped - 1.96 * est.stderr, flipped + 1.96 * est.stderr),
            est.trials, est.seed, stderr_defined=est.stderr_defined,
        )
    raise ValueError(f"model must be 'gale' or 'cone', got {model!r}")


@dataclass(frozen=True)
class DualityReport:
    dims: Dims
    exact: Fraction
    gale: MCEstimate
    cone: MCEstimate
    gale_pass: bool
    cone_pass: bool

    @property
    def passed(self) -> bool:
        return self.gale_pass and self.cone_pass


def verify_duality_identity(
    dims: Dims, trials: int, seed: int,
    distribution: str = "gaussian-iid", workers: int | None = None,
) -> DualityReport:
    """Check that the polytope ``f_k`` and cone ``f_(k+1)`` means share one exact value."""
    cfg = SamplerConfig(dims, distribution, seed)
    exact = expected_fk(dims)
    gale = estimate_fk(cfg, dims.k, trials, workers)
    cone = estimate_cone_fk(cfg, dims.k, trials, workers)
    return DualityReport(dims, exact, gale, cone, gale.within(exact), cone.within(exact))


@dataclass(frozen=True)
class PhaseRow:
    dims: Dims
    ratio: Fraction
    lower_bound: Fraction
    mc: MCEstimate | None = None
    note: str | None = None

    @property
    def d(self) -> int:
        return self.dims.d

    @property
    def N(self) -> int:
        return self.dims.N

    @property
    def k(self) -> int:
        return self.dims.k


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def phase_dims(delta: float, rho: float, d: int) -> Dims:
    """``N = round(d / delta)`` and ``k = round(rho d)``, clipped to a valid triple.

    ``N`` is raised to ``d + 2`` when rounding lands below it, and ``k`` is
    clipped to ``[0, d - 1]``.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not 0 <= rho <= 1:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    N = max(_round_half_up(d / delta), d + 2)
    k = min(max(_round_half_up(rho * d), 0), d - 1)
    return Dims(d, N, k)


def phase_experiment(
    delta: float, rho: float, d_list: Sequence[int], trials: int, seed: int,
    distribution: str = "gaussian-iid", workers: int | None = None,
    cap: int = 10**4,
) -> list[PhaseRow]:
    """Finite-size rows along ``d`` at fixed ``(delta, rho)``.

    The exact ratio ``E f_k / C(N, k+1)`` is always filled in; the Monte Carlo
    neighborliness probability only when ``C(N, k+1) <= cap`` and the
    diagram dimension is small enough for the chirotope path.
    """
    rows = []
    for d in d_list:
        dims = phase_dims(delta, rho, d)
        ratio = expected_fk_ratio(dims)
        bound = neighborly_prob_lower_bound(dims)
        mc, note = None, None
        if trials > 0:
            if binomial(dims.N, dims.k + 1) > cap:
                note = f"C(N, k+1) = {binomial(dims.N, dims.k + 1)} exceeds cap {cap}"
            elif math.comb(dims.N, dims.m + 1) > CHIROTOPE_LIMIT:
                note = f"C(N, m+1) = {math.comb(dims.N, dims.m + 1)} too large to enumerate"
            else:
                cfg = SamplerConfig(dims, distribution, seed)
                mc = estimate_neighborly_prob(cfg, dims.k, trials, workers)
        rows.append(PhaseRow(dims, ratio, bound, mc, note))
    return rows
