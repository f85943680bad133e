"""The nine acceptance criteria, each at its stated size, tolerance and time budget.

Every test records one PASS/FAIL line, printed in the pytest terminal summary
(and to stdout when this file is run as a script).
"""

from __future__ import annotations

import io
import time
from contextlib import redirect_stdout
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from galelab.asymptotics import AsymptoticParams, g_exponent, rho_strong, rho_weak
from galelab.cli import RunRecord, main as cli_main
from galelab.exactcomb import (
    Dims,
    expected_fk,
    expected_fk_ratio,
    neighborly_prob_lower_bound,
    wendel,
)
from galelab.galecore import is_face, realize
from galelab.geomcore import VectorConfig, is_general_position
from galelab.oracle import hull_faces, wendel_sign_oracle
from galelab.simulate import (
    SamplerConfig,
    estimate_containment,
    estimate_fk,
    estimate_neighborly_prob,
    phase_dims,
    sample_gale_diagram,
    verify_duality_identity,
)

# Pinned by 40-digit mpmath root finding before the build.
RHO_S_ANCHORS = {0.75: 0.0346118771439888726, 0.9: 0.1050873065915448133}


def report(number: int, ok: bool, detail: str, seconds: float, budget: float) -> None:
    status = "PASS" if ok else "FAIL"
    line = f"{status} criterion {number}: {detail} [{seconds:.1f}s, budget {budget:.0f}s]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def generic_integer_config(rng, M, r):
    while True:
        cfg = VectorConfig.from_rows(rng.integers(-99, 100, (M, r)).tolist())
        if is_general_position(cfg):
            return cfg


def test_criterion_1_wendel_exactness():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    bad = []
    cases = 0
    for M in range(1, 13):
        for r in range(1, M + 1):
            cfg = generic_integer_config(rng, M, r)
            cases += 1
            if wendel_sign_oracle(r, M, cfg) != wendel(r, M):
                bad.append((r, M))
    took = time.perf_counter() - start
    ok = not bad and took < 60
    report(1, ok, f"{cases} (r, M) pairs, mismatches {bad}", took, 60)


@pytest.mark.parametrize("r,M", [(1, 2), (2, 5), (3, 8), (5, 12)])
def test_criterion_2_wendel_sampling(r, M):
    start = time.perf_counter()
    est = estimate_containment(r, M, 10**5, seed=1000 + M)
    target = 1 - wendel(r, M)
    took = time.perf_counter() - start
    ok = est.within(target) and took < 60
    z = (est.mean - float(target)) / est.stderr
    report(2, ok, f"(r,M)=({r},{M}) freq {est.mean:.5f} vs {float(target):.5f}, z={z:+.2f}",
           took, 60)


def test_criterion_3_expectation_formula():
    start = time.perf_counter()
    assert expected_fk(Dims(2, 4, 1)) == Fraction(24, 7)
    parts, ok = [], True
    for d, N, k in [(2, 4, 1), (3, 6, 1), (4, 8, 2), (6, 10, 3)]:
        dims = Dims(d, N, k)
        est = estimate_fk(SamplerConfig(dims, seed=3), k, 10**4)
        exact = expected_fk(dims)
        ok &= est.within(exact)
        parts.append(f"({d},{N},{k}) z={(est.mean - float(exact)) / est.stderr:+.2f}")
    took = time.perf_counter() - start
    report(3, ok and took < 300, "; ".join(parts), took, 300)


def test_criterion_4_gale_criterion_vs_hull_oracle():
    start = time.perf_counter()
    mismatches, checked = 0, 0
    for d, N in [(2, 5), (3, 7), (4, 9)]:
        cfg = SamplerConfig(Dims(d, N, 0), seed=4)
        for t in range(100):
            diagram = sample_gale_diagram(cfg, t)
            pts = realize(diagram)
            for k in range(d):
                oracle = hull_faces(pts, k).faces
                for I in combinations(range(N), k + 1):
                    checked += 1
                    if is_face(diagram, I) != (frozenset(I) in oracle):
                        mismatches += 1
    took = time.perf_counter() - start
    ok = mismatches == 0 and took < 600
    report(4, ok, f"300 round trips, {checked} subsets, {mismatches} mismatches", took, 600)


def test_criterion_5_cover_efron_identity():
    start = time.perf_counter()
    parts, ok = [], True
    for d, N, k in [(2, 4, 1), (3, 6, 1)]:
        rep = verify_duality_identity(Dims(d, N, k), 10**4, seed=5)
        ok &= rep.passed
        parts.append(
            f"({d},{N},{k}) exact {float(rep.exact):.4f} gale {rep.gale.mean:.4f} "
            f"cone {rep.cone.mean:.4f}"
        )
    took = time.perf_counter() - start
    report(5, ok and took < 300, "; ".join(parts), took, 300)


def test_criterion_6_thresholds():
    start = time.perf_counter()
    weak_ok = Fraction(2) - 1 / Fraction(3, 4) == Fraction(2, 3) and rho_weak(0.75) == 2 - 4 / 3
    grid = np.linspace(0.5, 1.0, 1002)[1:-1]
    roots = [rho_strong(float(delta)) for delta in grid]
    worst = max(abs(g_exponent(AsymptoticParams(float(dl), r))) for dl, r in zip(grid, roots))
    increasing = all(a < b for a, b in zip(roots, roots[1:]))
    anchors = all(abs(rho_strong(dl) - v) < 1e-12 for dl, v in RHO_S_ANCHORS.items())
    took = time.perf_counter() - start
    ok = weak_ok and worst < 1e-12 and increasing and anchors and took < 1
    report(6, ok, f"max |G| on 1000-point grid {worst:.1e}, increasing={increasing}, "
           f"anchors={anchors}", took, 1)


def test_criterion_7_weak_threshold_trend():
    start = time.perf_counter()
    ds = [20, 40, 80, 160]
    below = [expected_fk_ratio(phase_dims(0.75, 0.5, d)) for d in ds]
    above = [expected_fk_ratio(phase_dims(0.75, 0.9, d)) for d in ds]
    ok = (
        all(a < b for a, b in zip(below, below[1:])) and below[-1] > Fraction(99, 100)
        and all(a > b for a, b in zip(above, above[1:])) and above[-1] < Fraction(1, 100)
    )
    took = time.perf_counter() - start
    report(7, ok and took < 60,
           f"rho=0.5: {[round(float(x), 5) for x in below]}; "
           f"rho=0.9: {[float(f'{float(x):.3g}') for x in above]}", took, 60)


def test_criterion_8_strong_threshold_trend():
    start = time.perf_counter()
    rows = []
    for d in (10, 15, 20):
        dims = phase_dims(0.9, 0.05, d)
        est = estimate_neighborly_prob(SamplerConfig(dims, seed=8), dims.k, 500)
        rows.append((dims, est, neighborly_prob_lower_bound(dims)))
    nondecreasing = all(
        b.mean >= a.mean - max(a.stderr, b.stderr)
        for (_, a, _), (_, b, _) in zip(rows, rows[1:])
    )
    bounds = all(est.mean >= float(bnd) - 3 * est.stderr for _, est, bnd in rows)
    took = time.perf_counter() - start
    detail = "; ".join(
        f"d={dm.d} N={dm.N} k={dm.k} p={e.mean:.3f}+-{e.stderr:.3f} bound={float(b):.3f}"
        for dm, e, b in rows
    )
    report(8, nondecreasing and bounds and took < 900, detail, took, 900)


def _cli_payload(argv, workers, monkeypatch):
    monkeypatch.setenv("GALELAB_WORKERS", str(workers))
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(argv)
    assert code == 0
    return RunRecord.from_json(buf.getvalue()).payload()


def test_criterion_9_determinism(monkeypatch):
    start = time.perf_counter()
    commands = [
        ["simulate", "gale", "--d", "3", "--N", "6", "--k", "1", "--trials", "2000", "--seed", "9"],
        ["simulate", "cone", "--d", "3", "--N", "6", "--k", "1", "--trials", "2000", "--seed", "9"],
        ["simulate", "gale", "--d", "6", "--N", "10", "--k", "3", "--trials", "1000",
         "--seed", "9", "--neighborly"],
        ["wendel", "--r", "3", "--M", "8", "--mc", "20000", "--seed", "9"],
    ]
    same = all(
        _cli_payload(argv, 1, monkeypatch) == _cli_payload(argv, 8, monkeypatch)
        for argv in commands
    )
    took = time.perf_counter() - start
    report(9, same and took < 60, f"{len(commands)} commands byte-identical at 1 and 8 workers",
           took, 60)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
