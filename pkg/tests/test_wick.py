import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nanoforce.errors import DomainError
from nanoforce.numerics import NumericsPolicy, integrate_semi_infinite
from nanoforce.wick import (
    LorentzTerm,
    RationalResponse,
    full_line_side,
    matsubara_side,
    random_response,
    random_temperatures,
    real_axis_side,
    verify_wick,
)

SINGLE = RationalResponse.of((1.0, 1.0, 0.5))


def test_zero_response():
    zero = RationalResponse()
    assert real_axis_side(zero, 1.0).value == 0.0
    assert matsubara_side(zero, 1.0).value == 0.0
    rep = verify_wick(zero, 1.0)
    assert rep.passed and rep.rel_diff == 0.0


def test_single_line_example():
    lhs = real_axis_side(SINGLE, 0.3)
    rhs = matsubara_side(SINGLE, 0.3)
    assert lhs.converged and rhs.converged
    assert lhs.value == pytest.approx(rhs.value, rel=1e-6)


def test_high_temperature_limit():
    T = 100.0
    assert real_axis_side(SINGLE, T).value == pytest.approx(T * float(SINGLE.imag_axis(0.0)), rel=1e-2)


def test_low_temperature_continuum_limit():
    T = 1e-3
    continuum = integrate_semi_infinite(lambda z: SINGLE.imag_axis(z), 0.0).value / math.pi
    r = matsubara_side(SINGLE, T)
    assert r.converged
    assert r.value == pytest.approx(continuum, rel=1e-3)


def test_response_evaluation():
    f = RationalResponse.of((2.0, 1.5, 0.3), (0.5, 0.7, 0.1))
    w = np.array([0.2, 1.0, 4.0])
    assert np.array_equal(f.imag_real_axis(w), f.real_axis(w).imag) or np.allclose(
        f.imag_real_axis(w), f.real_axis(w).imag, rtol=1e-14, atol=0)
    assert np.array_equal(f.real_axis(-w), np.conj(f.real_axis(w)))
    assert float(f.imag_axis(0.0)) == pytest.approx(2.5, rel=1e-15)
    assert f.slope_at_zero() == pytest.approx(2.0 * 0.3 / 1.5**2 + 0.5 * 0.1 / 0.7**2, rel=1e-15)


def test_term_domain():
    with pytest.raises(DomainError):
        LorentzTerm(1.0, 0.0, 0.1)
    with pytest.raises(DomainError):
        LorentzTerm(1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        LorentzTerm(1.0, 1.0, 2.5)
    with pytest.raises(DomainError):
        real_axis_side(SINGLE, 0.0)


def test_random_suite_passes():
    rng = np.random.default_rng(7)
    for T in random_temperatures(rng, 20):
        f = random_response(rng, 3)
        rep = verify_wick(f, T, 1e-6)
        assert rep.verdict == "pass", (f, T, rep)


def test_negative_control_fails():
    broken = RationalResponse.of((1.0, 1.0, 0.5), (0.5, 2.0, -0.8))
    assert not broken.analytic_upper
    rep = verify_wick(broken, 0.3)
    assert rep.verdict == "fail" and rep.rel_diff > 1e-2


def test_indeterminate_is_distinct_from_fail():
    rep = verify_wick(SINGLE, 0.01, policy=NumericsPolicy(matsubara_max_terms=5))
    assert rep.verdict == "indeterminate" and not rep.passed


def test_full_line_weight_is_minus_folded_form():
    for T in (0.05, 0.3, 3.0):
        folded = real_axis_side(SINGLE, T).value
        assert full_line_side(SINGLE, T).value == pytest.approx(-folded, rel=1e-8)


@settings(max_examples=15)
@given(seed=st.integers(0, 2**32 - 1), T=st.floats(0.01, 10.0))
def test_both_sides_are_additive(seed, T):
    rng = np.random.default_rng(seed)
    f, g = random_response(rng, 2), random_response(rng, 1)
    # truncation at 1e-8 differs between the sums; tighten so linearity shows at 1e-10
    tight = NumericsPolicy(rel_tol=1e-13)
    for side in (real_axis_side, matsubara_side):
        whole = side(f + g, T, tight)
        parts = side(f, T, tight).value + side(g, T, tight).value
        assert whole.converged
        assert whole.value == pytest.approx(parts, rel=1e-10)
