import math
from fractions import Fraction

import numpy as np
import pytest

from galelab.exactcomb import Dims, expected_fk, neighborly_prob_lower_bound, wendel
from galelab.galecore import count_faces
from galelab.geomcore import VectorConfig
from galelab.simulate import (
    ConeSample,
    MCEstimate,
    RejectionBudgetExceeded,
    SamplerConfig,
    _cone_faces_from_chi,
    _gale_neighborly_trial,
    count_cone_faces,
    estimate_acceptance,
    estimate_cone_fk,
    estimate_containment,
    estimate_fk,
    estimate_neighborly_prob,
    phase_dims,
    phase_experiment,
    sample_cover_efron,
    sample_gale_diagram,
    trial_rng,
    verify_duality_identity,
)
from galelab.chirotope import chirotope


def test_trial_streams():
    a = trial_rng(5, 3).standard_normal(4)
    assert np.array_equal(a, trial_rng(5, 3).standard_normal(4))
    assert not np.array_equal(a, trial_rng(5, 4).standard_normal(4))
    assert not np.array_equal(a, trial_rng(6, 3).standard_normal(4))


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(Dims(2, 4, 1), distribution="cauchy")
    with pytest.raises(ValueError):
        SamplerConfig(Dims(2, 4, 1), seed=-1)


class TestEstimate:
    def test_statistics(self):
        est = MCEstimate.from_outcomes([1, 2, 3, 4], seed=0)
        assert est.mean == 2.5
        assert math.isclose(est.stderr, math.sqrt(Fraction(5, 3) / 4))
        assert est.within(2.5 + 3 * est.stderr)

    def test_single_trial(self):
        est = MCEstimate.from_outcomes([3], seed=0)
        assert est.stderr == 0 and not est.stderr_defined

    def test_empty(self):
        with pytest.raises(ValueError):
            MCEstimate.from_outcomes([], seed=0)


class TestSamplers:
    def test_acceptance_rates(self):
        cfg = SamplerConfig(Dims(2, 4, 1), seed=1)
        for model in ("gale", "cone"):
            est = estimate_acceptance(cfg, 10**5, model)
            assert est.within(wendel(3, 4)), (model, est)

    def test_samples_satisfy_conditioning(self):
        cfg = SamplerConfig(Dims(3, 7, 1), seed=2)
        for t in range(20):
            diagram = sample_gale_diagram(cfg, t)
            assert diagram.dims.m == 3
            cone = sample_cover_efron(cfg, t)
            assert cone.vectors.dim == 4

    def test_rejection_budget(self):
        cfg = SamplerConfig(Dims(1, 12, 0), seed=0, max_rejections=1)
        with pytest.raises(RejectionBudgetExceeded, match="acceptance probability"):
            for t in range(50):
                sample_gale_diagram(cfg, t)

    def test_uniform_sphere(self):
        cfg = SamplerConfig(Dims(3, 6, 1), "uniform-sphere", seed=3)
        diagram = sample_gale_diagram(cfg)
        norms = np.linalg.norm(diagram.array(), axis=1)
        assert np.allclose(norms, 1.0)


class TestConeFaces:
    def test_examples(self):
        assert count_cone_faces(VectorConfig.from_rows([[1, 0], [1, 1]]), 1) == 2
        assert count_cone_faces(VectorConfig.from_rows([[1, 0], [1, 1], [1, 2]]), 1) == 2

    def test_chirotope_route_matches_lp(self):
        cfg = SamplerConfig(Dims(3, 7, 1), seed=4)
        for t in range(10):
            cone = sample_cover_efron(cfg, t)
            chi = chirotope(cone.vectors.to_array())
            for j in range(1, 5):
                fast = _cone_faces_from_chi(chi, 7, 4, j)
                # thirds are not binary floats, which forces the exact LP route
                thirds = ConeSample(cone.dims, VectorConfig(4, tuple(
                    tuple(x / 3 for x in v) for v in cone.vectors.vectors)))
                assert fast == count_cone_faces(thirds, j)

    def test_errors(self):
        with pytest.raises(ValueError):
            count_cone_faces(VectorConfig.from_rows([[1, 0], [1, 1]]), 3)


class TestMonteCarlo:
    def test_fk_quadrilateral(self):
        est = estimate_fk(SamplerConfig(Dims(2, 4, 1), seed=7), 1, 10**5)
        assert est.within(Fraction(24, 7))

    def test_fk_4_8_1(self):
        dims = Dims(4, 8, 1)
        est = estimate_fk(SamplerConfig(dims, seed=8), 1, 10**4)
        assert est.within(expected_fk(dims))

    def test_vertex_count_of_planar_diagrams(self):
        # f_0 = 4 needs a 2+2 sign split: probability (6/16) / (14/16) = 3/7
        cfg = SamplerConfig(Dims(2, 4, 0), seed=9)
        for t in range(30):
            diagram = sample_gale_diagram(cfg, t)
            positives = sum(v[0] > 0 for v in diagram.vectors.vectors)
            assert (count_faces(diagram, 0).count == 4) == (positives == 2)
        est = estimate_neighborly_prob(cfg, 0, 10**4)
        assert est.within(Fraction(3, 7))

    def test_neighborliness_monotone_in_k(self):
        cfg = SamplerConfig(Dims(6, 10, 0), seed=10)
        for t in range(200):
            flags = [_gale_neighborly_trial(cfg, k, t)[0] for k in range(6)]
            assert flags == sorted(flags, reverse=True)

    def test_distribution_invariance(self):
        dims = Dims(3, 6, 1)
        a = estimate_fk(SamplerConfig(dims, "gaussian-iid", 11), 1, 3000)
        b = estimate_fk(SamplerConfig(dims, "uniform-sphere", 11), 1, 3000)
        assert a.ci95[0] <= b.ci95[1] and b.ci95[0] <= a.ci95[1]

    def test_containment(self):
        est = estimate_containment(2, 5, 20000, seed=12)
        assert est.within(1 - wendel(2, 5))

    def test_duality_report(self):
        report = verify_duality_identity(Dims(2, 4, 1), 3000, seed=13)
        assert report.exact == Fraction(24, 7)
        assert report.passed
        assert report.gale.trials == report.cone.trials == 3000

    @pytest.mark.slow
    def test_boole_bound_large(self):
        dims = Dims(22, 30, 2)
        est = estimate_neighborly_prob(SamplerConfig(dims, seed=14), 2, 1000)
        bound = neighborly_prob_lower_bound(dims)
        assert 0 <= bound <= 1
        assert est.mean >= float(bound) - 3 * est.stderr


class TestDeterminism:
    def test_workers_do_not_change_results(self, monkeypatch):
        cfg = SamplerConfig(Dims(3, 6, 1), seed=15)
        one = estimate_fk(cfg, 1, 600, workers=1)
        many = estimate_fk(cfg, 1, 600, workers=8)
        assert one == many
        monkeypatch.setenv("GALELAB_WORKERS", "3")
        assert estimate_fk(cfg, 1, 600) == one
        assert estimate_cone_fk(cfg, 1, 600, workers=1) == estimate_cone_fk(cfg, 1, 600, workers=4)
        assert estimate_containment(3, 8, 3000, 5, workers=1) == estimate_containment(
            3, 8, 3000, 5, workers=8
        )


class TestPhase:
    def test_dims_rounding(self):
        assert phase_dims(0.9, 0.05, 10) == Dims(10, 12, 1)
        assert phase_dims(0.9, 0.05, 15) == Dims(15, 17, 1)
        assert phase_dims(0.9, 0.05, 20) == Dims(20, 22, 1)
        assert phase_dims(0.75, 0.5, 20) == Dims(20, 27, 10)
        assert phase_dims(0.75, 1.0, 20).k == 19

    def test_rows(self):
        rows = phase_experiment(0.75, 0.5, [20, 160], trials=0, seed=0)
        assert [r.N for r in rows] == [27, 213]
        assert rows[0].ratio < rows[1].ratio
        assert all(r.mc is None for r in rows)
        noted = phase_experiment(0.75, 0.5, [160], trials=10, seed=0)[0]
        assert noted.mc is None and "exceeds" in noted.note
