from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from galelab.geomcore import (
    DegenerateConfigError,
    VectorConfig,
    contains_origin,
    contains_origin_interior,
    is_general_position,
    origin_certificate,
    origin_in_hull,
    verify_separator,
    verify_weights,
)


def cfg(rows):
    return VectorConfig.from_rows(rows)


class TestVectorConfig:
    def test_exact_floats(self):
        c = cfg([[0.1, 0.2]])
        assert c.vectors[0][0] == Fraction(0.1)
        assert c.is_float_exact()

    def test_rejects_zero_and_ragged(self):
        with pytest.raises(ValueError):
            cfg([[0, 0]])
        with pytest.raises(ValueError):
            VectorConfig(2, ((Fraction(1),),))


class TestGeneralPosition:
    def test_examples(self):
        assert is_general_position(cfg([[1, 0], [0, 1], [1, 1]]))
        assert not is_general_position(cfg([[1, 0], [2, 0], [0, 1]]))

    def test_gaussian_audit(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            assert is_general_position(cfg(rng.standard_normal((10, 4))))

    def test_large_audit_catches_duplicates(self):
        rng = np.random.default_rng(12)
        arr = rng.standard_normal((20, 2))
        assert is_general_position(cfg(arr))
        arr[1:] = arr[0] * np.arange(2, 21)[:, None]
        assert not is_general_position(cfg(arr))


class TestContainsOrigin:
    def test_symmetric_pair(self):
        res = contains_origin(cfg([[1], [-1]]))
        assert res.feasible and res.certificate == (Fraction(1, 2), Fraction(1, 2))

    def test_halfplane(self):
        c = cfg([[1, 0], [0, 1], [1, 1]])
        res = contains_origin(c)
        assert not res.feasible
        assert res.verify(c)
        assert verify_separator(c, (1, 1))

    def test_centered_triangle(self):
        c = cfg([[1, 0], [0, 1], [-1, -1]])
        res = contains_origin(c)
        assert res.feasible and res.certificate == (Fraction(1, 3),) * 3

    def test_complementarity(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            c = cfg(rng.standard_normal((rng.integers(2, 7), 3)))
            res = contains_origin(c)
            assert res.verify(c)
            # the opposite kind of certificate must not exist; try the obvious ones
            if res.feasible:
                for u in np.eye(3).tolist() + (-np.eye(3)).tolist():
                    assert not verify_separator(c, [Fraction(x) for x in u])
            else:
                n = len(c)
                assert not verify_weights(c, [Fraction(1, n)] * n) or n == 0

    def test_interior(self):
        assert contains_origin_interior(cfg([[1, 0], [0, 1], [-1, -1]]))
        assert contains_origin_interior(cfg([[1], [-1]]))
        assert not contains_origin_interior(cfg([[1, 5], [2, -1], [3, 7]]))
        with pytest.raises(DegenerateConfigError):
            contains_origin_interior(cfg([[1, 0], [2, 0], [-1, 0]]))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 9))
def test_fast_path_agrees_with_exact_lp(seed, m, n):
    rng = np.random.default_rng(seed)
    arr = rng.standard_normal((n, m))
    c = cfg(arr)
    inside, cert = origin_certificate(c, range(n))
    assert inside == contains_origin(c).feasible
    if inside:
        assert contains_origin(c.subconfig(cert)).feasible
    else:
        assert verify_separator(c, cert)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.5, 2.0, 1024.0]))
def test_positive_scaling_invariance(seed, scale):
    rng = np.random.default_rng(seed)
    arr = rng.standard_normal((6, 3))
    w = rng.uniform(0.1, 10, 6)[:, None]
    assert origin_in_hull(arr) == origin_in_hull(arr * scale) == origin_in_hull(arr * w)
