"""Command-line front end: JSON records for single results, CSV for grids.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
The worker count for simulations is read from ``GALELAB_WORKERS``; it never
changes results.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any

import numpy as np

from . import __version__
from .asymptotics import (
    AsymptoticParams,
    ThresholdDomainError,
    g_exponent,
    rho_strong,
    rho_weak,
)
from .exactcomb import (
    Dims,
    expected_fk,
    expected_fk_ratio,
    neighborly_prob_lower_bound,
    wendel,
)
from .galecore import EnumerationCapError, face_sets, realize
from .oracle import hull_faces
from .simulate import (
    MCEstimate,
    SamplerConfig,
    estimate_cone_fk,
    estimate_containment,
    estimate_fk,
    estimate_neighborly_prob,
    phase_experiment,
    sample_gale_diagram,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2
CSV_HEADER = [
    "delta", "rho", "d", "N", "k", "ratio_num", "ratio_den", "ratio_f64",
    "rho_w", "rho_s",
]
ROUNDTRIP_CAP = 5000


class UsageError(Exception):
    pass


def exact(q: Fraction) -> dict[str, str]:
    """Lossless rendering of a rational plus a 30-digit decimal."""
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = 30
        dec = Decimal(q.numerator) / Decimal(q.denominator)
    return {"num": str(q.numerator), "den": str(q.denominator), "decimal": str(dec)}


def from_exact(obj: dict[str, str]) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def estimate_dict(est: MCEstimate) -> dict[str, Any]:
    out = asdict(est)
    out["ci95"] = list(est.ci95)
    return out


@dataclass
class RunRecord:
    command: str
    params: dict[str, Any]
    results: dict[str, Any]
    seed: int | None = None
    trials: int | None = None
    wallclock_ms: int = 0
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))

    def payload(self) -> str:
        """Serialization without the wall-clock field, for determinism checks."""
        data = asdict(self)
        data.pop("wallclock_ms")
        return json.dumps(data, sort_keys=True)


def _wendel(args) -> tuple[RunRecord, int]:
    value = wendel(args.r, args.M)
    results: dict[str, Any] = {"wendel": exact(value)}
    seed = trials = None
    if args.mc is not None:
        if args.seed is None:
            raise UsageError("--mc requires --seed")
        seed, trials = args.seed, args.mc
        est = estimate_containment(args.r, args.M, trials, seed)
        miss = 1.0 - est.mean
        results["mc"] = {
            "miss_frequency": miss,
            "stderr": est.stderr,
            "within_3se": abs(miss - float(value)) <= 3 * est.stderr,
        }
    return RunRecord("wendel", {"r": args.r, "M": args.M}, results, seed, trials), EXIT_OK


def _efk(args) -> tuple[RunRecord, int]:
    dims = Dims(args.d, args.N, args.k)
    results: dict[str, Any] = {"expected_fk": exact(expected_fk(dims))}
    if args.ratio:
        results["ratio"] = exact(expected_fk_ratio(dims))
    if args.bound:
        results["neighborly_lower_bound"] = exact(neighborly_prob_lower_bound(dims))
    params = {"d": args.d, "N": args.N, "k": args.k}
    return RunRecord("efk", params, results), EXIT_OK


def _threshold(args) -> tuple[RunRecord, int]:
    if args.which == "weak":
        rho = rho_weak(args.delta)
        results: dict[str, Any] = {"rho": rho}
        if args.delta > 0.5:
            results["rho_exact"] = exact(2 - 1 / Fraction(args.delta).limit_denominator(10**12))
        else:
            results["rho_exact"] = exact(Fraction(0))
    else:
        rho = rho_strong(args.delta, args.tol)
        residual = g_exponent(AsymptoticParams(args.delta, rho))
        results = {"rho": rho, "residual": abs(residual)}
    params = {"delta": args.delta, "which": args.which, "tol": args.tol}
    return RunRecord("threshold", params, results), EXIT_OK


def _simulate(args) -> tuple[RunRecord, int]:
    dims = Dims(args.d, args.N, args.k)
    cfg = SamplerConfig(dims, args.distribution, args.seed)
    target = expected_fk(dims)
    params = {
        "model": args.model, "d": args.d, "N": args.N, "k": args.k,
        "distribution": args.distribution, "neighborly": args.neighborly,
    }
    code = EXIT_OK
    if args.neighborly:
        if args.model != "gale":
            raise UsageError("--neighborly applies to the gale model only")
        est = estimate_neighborly_prob(cfg, args.k, args.trials)
        bound = neighborly_prob_lower_bound(dims)
        ok = est.mean >= float(bound) - 3 * est.stderr
        results = {
            "estimate": estimate_dict(est),
            "lower_bound": exact(bound),
            "bound_respected": ok,
        }
        if not ok:
            code = EXIT_VERIFY
    else:
        if args.model == "gale":
            est = estimate_fk(cfg, args.k, args.trials)
        else:
            est = estimate_cone_fk(cfg, args.k, args.trials)
        results = {
            "estimate": estimate_dict(est),
            "exact": exact(target),
            "within_3se": est.within(target),
        }
    return RunRecord("simulate", params, results, args.seed, args.trials), code


def parse_grid(text: str) -> list[float]:
    """``a:b:n`` for ``n`` evenly spaced points, or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad grid {text!r}; use start:stop:count")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise UsageError("grid count must be positive")
        return [float(x) for x in np.linspace(lo, hi, n)]
    return [float(x) for x in text.split(",") if x.strip()]


def phase_rows(deltas, rhos, d, trials=0, seed=None):
    """Rows of the phase-diagram CSV, header first.

    With ``trials > 0`` two Monte Carlo columns are appended; they stay empty
    for cells too large to enumerate.
    """
    header = list(CSV_HEADER)
    if trials:
        header += ["mc_mean", "mc_stderr"]
    yield header
    for delta in deltas:
        rho_w = rho_weak(delta)
        rho_s = repr(rho_strong(delta)) if delta > 0.5 else ""
        for rho in rhos:
            (row,) = phase_experiment(delta, rho, [d], trials, seed or 0)
            ratio = row.ratio
            out = [
                repr(delta), repr(rho), row.d, row.N, row.k,
                ratio.numerator, ratio.denominator, repr(float(ratio)),
                repr(rho_w), rho_s,
            ]
            if trials:
                out += ["", ""] if row.mc is None else [repr(row.mc.mean), repr(row.mc.stderr)]
            yield out


def _phase_diagram(args) -> tuple[RunRecord | None, int]:
    deltas, rhos = parse_grid(args.delta_grid), parse_grid(args.rho_grid)
    trials = 0 if args.exact_only else args.trials
    if trials and args.seed is None:
        raise UsageError("Monte Carlo columns require --seed (or pass --exact-only)")
    rows = list(phase_rows(deltas, rhos, args.d, trials, args.seed))
    if args.out == "-":
        csv.writer(sys.stdout, lineterminator="\n").writerows(rows)
        return None, EXIT_OK
    with open(args.out, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    params = {
        "delta_grid": args.delta_grid, "rho_grid": args.rho_grid, "d": args.d,
        "exact_only": args.exact_only, "out": args.out,
    }
    results = {"rows": len(rows) - 1, "path": args.out}
    return RunRecord("phase-diagram", params, results, args.seed, trials or None), EXIT_OK


def _roundtrip(args) -> tuple[RunRecord, int]:
    dims = Dims(args.d, args.N, 0)
    total = sum(math.comb(args.N, k + 1) for k in range(args.d))
    if total > args.cap:
        raise EnumerationCapError(
            f"hull enumeration needs {total} subsets per instance, cap is {args.cap}"
        )
    cfg = SamplerConfig(dims, seed=args.seed)
    passed = 0
    failure = None
    for t in range(args.trials):
        diagram = sample_gale_diagram(cfg, trial=t)
        pts = realize(diagram)
        for k in range(args.d):
            predicted = face_sets(diagram, k)
            observed = set(hull_faces(pts, k).faces)
            if predicted != observed:
                diff = sorted(sorted(s) for s in predicted ^ observed)
                failure = {
                    "trial": t,
                    "k": k,
                    "diagram": [[exact(x) for x in v] for v in diagram.vectors.vectors],
                    "realization": [[exact(x) for x in p] for p in pts.points],
                    "differing_subsets": diff,
                }
                break
        if failure:
            break
        passed += 1
    results: dict[str, Any] = {
        "passed": passed,
        "trials": args.trials,
        "mismatches": 0 if failure is None else 1,
        "pass": f"{passed}/{args.trials}",
    }
    if failure:
        results["failure"] = failure
    params = {"d": args.d, "N": args.N, "cap": args.cap}
    code = EXIT_OK if failure is None else EXIT_VERIFY
    return RunRecord("roundtrip", params, results, args.seed, args.trials), code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="galelab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"galelab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("wendel", help="exact Wendel probability")
    w.add_argument("--r", type=int, required=True)
    w.add_argument("--M", type=int, required=True)
    w.add_argument("--mc", type=int, metavar="TRIALS")
    w.add_argument("--seed", type=int)
    w.set_defaults(func=_wendel)

    e = sub.add_parser("efk", help="exact expected number of k-faces")
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--N", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--ratio", action="store_true")
    e.add_argument("--bound", action="store_true")
    e.set_defaults(func=_efk)

    t = sub.add_parser("threshold", help="strong or weak threshold at delta")
    t.add_argument("--delta", type=float, required=True)
    t.add_argument("--which", choices=("strong", "weak"), required=True)
    t.add_argument("--tol", type=float, default=1e-12)
    t.set_defaults(func=_threshold)

    s = sub.add_parser("simulate", help="Monte Carlo face numbers")
    s.add_argument("model", choices=("gale", "cone"))
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--neighborly", action="store_true")
    s.add_argument("--distribution", default="gaussian-iid",
                   choices=("gaussian-iid", "uniform-sphere"))
    s.set_defaults(func=_simulate)

    ph = sub.add_parser("phase-diagram", help="CSV grid of exact face ratios")
    ph.add_argument("--delta-grid", required=True)
    ph.add_argument("--rho-grid", required=True)
    ph.add_argument("--d", type=int, required=True)
    ph.add_argument("--exact-only", action="store_true")
    ph.add_argument("--trials", type=int, default=200)
    ph.add_argument("--seed", type=int)
    ph.add_argument("--out", required=True)
    ph.set_defaults(func=_phase_diagram)

    r = sub.add_parser("roundtrip", help="Gale criterion against the hull oracle")
    r.add_argument("--d", type=int, required=True)
    r.add_argument("--N", type=int, required=True)
    r.add_argument("--trials", type=int, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--cap", type=int, default=ROUNDTRIP_CAP)
    r.set_defaults(func=_roundtrip)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        record, code = args.func(args)
    except (ValueError, UsageError, EnumerationCapError, ThresholdDomainError) as exc:
        print(f"galelab {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if record is not None:
        record.wallclock_ms = int((time.perf_counter() - start) * 1000)
        print(record.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
