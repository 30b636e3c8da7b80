import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rqichan.numerics import (
    ConvergenceConfig,
    ConvergenceError,
    acceleration_from_schwarzschild,
    hypergeometric_pfq,
    lerch_phi,
    polylog,
    squeezing_from_acceleration,
    sum_series,
)


class TestSumSeries:
    def test_geometric_series(self):
        res = sum_series(lambda k: 0.5**k)
        assert res.converged
        assert res.value == pytest.approx(2.0, abs=1e-9)
        assert res.tail_estimate / res.value < 1e-10

    def test_growing_ratio_never_declares_success(self):
        # terms grow up to index 6, then decay geometrically; the loop must
        # ride out the growing stretch and only converge afterwards
        def term(k):
            return float(2**k) if k < 6 else float(2**6) * 0.3 ** (k - 6)

        res = sum_series(term)
        assert res.converged
        assert res.terms_used > 6
        brute = sum(term(k) for k in range(200))
        assert res.value == pytest.approx(brute, rel=1e-10)

    def test_budget_exhaustion_flags_result(self):
        res = sum_series(lambda k: 1.0, ConvergenceConfig(max_terms=50))
        assert not res.converged
        assert res.terms_used == 50

    def test_thermal_weight_series(self):
        # oracle: direct summation of 1e4 terms
        t2, c2 = math.tanh(1.0) ** 2, math.cosh(1.0) ** 2
        oracle = sum(t2**k / c2 for k in range(10_000))
        res = sum_series(lambda k: t2**k / c2)
        assert res.converged
        assert res.value == pytest.approx(oracle, abs=1e-10)
        assert res.value == pytest.approx(1.0, abs=1e-10)

    def test_all_zero_series(self):
        res = sum_series(lambda k: 0.0)
        assert res.converged
        assert res.value == 0.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ConvergenceConfig(eps_tail=0.0)
        with pytest.raises(ValueError):
            ConvergenceConfig(max_terms=1)

    @settings(max_examples=25, deadline=None)
    @given(ratio=st.floats(0.05, 0.9), scale=st.floats(0.1, 10.0))
    def test_geometric_family_matches_brute_force(self, ratio, scale):
        res = sum_series(lambda k: scale * ratio**k)
        brute = scale * sum(ratio**k for k in range(100_000))
        assert res.converged
        assert res.value == pytest.approx(brute, rel=1e-9)


class TestPolylog:
    def test_order_one_is_log(self):
        assert polylog(1.0, 0.5) == pytest.approx(math.log(2.0), abs=1e-10)

    def test_zero_argument(self):
        for s in (-0.5, 1.0, 2.0):
            assert polylog(s, 0.0) == 0.0

    def test_negative_half_order(self):
        # oracle: independent arbitrary-cutoff summation (frozen)
        assert polylog(-0.5, math.tanh(1.0) ** 2) == pytest.approx(2.01172610291636, abs=1e-9)

    def test_domain(self):
        with pytest.raises(ValueError):
            polylog(1.0, 1.0)
        with pytest.raises(ValueError):
            polylog(1.0, -0.2)


class TestLerchPhi:
    def test_index_shift_identity(self):
        z, s = 0.4, 1.5
        assert lerch_phi(z, s, 1.0) == pytest.approx(polylog(s, z) / z, abs=1e-10)

    def test_zero_argument_single_term(self):
        assert lerch_phi(0.0, 2.0, 3.0) == pytest.approx(3.0**-2.0, abs=1e-14)

    def test_against_direct_summation(self):
        # oracle: direct 1e4-term summation (frozen)
        assert lerch_phi(0.5, 1.0, 2.0) == pytest.approx(0.772588722239781, abs=1e-10)

    def test_domain(self):
        with pytest.raises(ValueError):
            lerch_phi(0.5, 1.0, 0.0)
        with pytest.raises(ValueError):
            lerch_phi(0.5, 1.0, -2.0)


class TestHypergeometric:
    def test_zero_argument(self):
        assert hypergeometric_pfq([2.0, 3.5], [1.2], 0.0) == 1.0

    def test_gauss_log_identity(self):
        assert hypergeometric_pfq([1.0, 1.0], [2.0], 0.5) == pytest.approx(
            2.0 * math.log(2.0), abs=1e-10
        )

    def test_3f2_against_direct_summation(self):
        # oracle: direct high-cutoff summation (frozen)
        val = hypergeometric_pfq([2.0, 2.0, 1.7], [1.0, 2.7], 0.4)
        assert val == pytest.approx(3.4053637302503543, rel=1e-10)

    def test_terminating_series(self):
        # a negative-integer upper parameter truncates the sum to a polynomial
        val = hypergeometric_pfq([-2.0, 1.0], [1.0], 0.3)
        assert val == pytest.approx(1.0 - 2 * 0.3 + 0.3**2, abs=1e-12)

    def test_bad_lower_parameter(self):
        with pytest.raises(ValueError):
            hypergeometric_pfq([1.0], [-1.0], 0.3)

    def test_bad_argument(self):
        with pytest.raises(ValueError):
            hypergeometric_pfq([1.0], [2.0], 1.0)


class TestSqueezingFromAcceleration:
    def test_vanishes_at_zero_acceleration(self):
        assert squeezing_from_acceleration(1.0, 1e-6) < 1e-9

    def test_reference_value(self):
        assert squeezing_from_acceleration(1.0, math.pi) == pytest.approx(
            0.3859684164526524, abs=1e-12
        )

    @settings(max_examples=30, deadline=None)
    @given(
        omega=st.floats(0.1, 5.0),
        a1=st.floats(0.1, 20.0),
        factor=st.floats(1.01, 5.0),
    )
    def test_monotone_and_invertible(self, omega, a1, factor):
        a2 = a1 * factor
        r1 = squeezing_from_acceleration(omega, a1)
        r2 = squeezing_from_acceleration(omega, a2)
        assert r2 > r1
        recovered = -omega * math.pi / math.log(math.tanh(r1))
        assert recovered == pytest.approx(a1, rel=1e-10)

    def test_domain(self):
        with pytest.raises(ValueError):
            squeezing_from_acceleration(0.0, 1.0)
        with pytest.raises(ValueError):
            squeezing_from_acceleration(1.0, -1.0)


class TestAccelerationFromSchwarzschild:
    def test_horizon_limit(self):
        a, valid = acceleration_from_schwarzschild(1.0, 1.0)
        assert a == 0.0
        assert valid

    def test_validity_threshold(self):
        assert acceleration_from_schwarzschild(1.0, 1.01)[1] is True
        assert acceleration_from_schwarzschild(1.0, 3.0)[1] is False

    def test_reference_value(self):
        a, _ = acceleration_from_schwarzschild(1.0, 1.05)
        assert a == pytest.approx(2.0 * math.sqrt(1.0 - 1.0 / 1.05), abs=1e-14)

    def test_inside_horizon_rejected(self):
        with pytest.raises(ValueError):
            acceleration_from_schwarzschild(1.0, 0.5)


def test_wrappers_propagate_convergence_failure():
    tight = ConvergenceConfig(max_terms=5)
    with pytest.raises(ConvergenceError) as info:
        polylog(1.0, 0.9, tight)
    assert info.value.result.terms_used == 5
    assert not info.value.result.converged
