import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nanoforce.errors import DomainError, PoleError
from nanoforce.numerics import NumericsPolicy, integrate_semi_infinite
from nanoforce.response_models import (
    Constant,
    Drude,
    Lorentz,
    LorentzOscillator,
    PolarizabilityModel,
    Vacuum,
    alpha_imag_axis,
    alpha_keldysh,
    alpha_real_axis,
    eps_imag_axis,
    eps_real_axis,
)

pos = st.floats(0.05, 20.0)


def test_eps_imag_axis_examples():
    assert eps_imag_axis(Vacuum(), 1.0) == 1.0
    assert eps_imag_axis(Constant(3.0), 7.0) == 3.0
    assert eps_imag_axis(Drude(1.0, 1.0), 1.0) == 1.5


def test_eps_imag_axis_rejects_nonpositive_zeta():
    for z in (0.0, -1.0):
        with pytest.raises(DomainError):
            eps_imag_axis(Drude(1.0, 1.0), z)


def test_eps_real_axis_examples():
    assert eps_real_axis(Vacuum(), 2.0) == 1 + 0j
    assert eps_real_axis(Drude(1.0, 1.0), 1.0) == pytest.approx(0.5 + 0.5j, rel=1e-15)
    assert eps_real_axis(Constant(3.0), -5.0) == 3 + 0j
    with pytest.raises(PoleError):
        eps_real_axis(Drude(1.0, 1.0), 0.0)


def test_model_parameter_domains():
    with pytest.raises(DomainError):
        Constant(0.5)
    with pytest.raises(DomainError):
        Drude(1.0, 0.0)
    with pytest.raises(DomainError):
        LorentzOscillator(0.9, 1.0, 1.0, 0.1)
    with pytest.raises(DomainError):
        Lorentz(1.0, -1.0)
    with pytest.raises(DomainError):
        PolarizabilityModel.isotropic(-1.0, 1.0)


@given(wp=pos, g=pos, einf=st.floats(1.0, 10.0), f=st.floats(0.0, 10.0), w0=pos)
def test_permittivity_on_imag_axis_is_real_ge_one_and_nonincreasing(wp, g, einf, f, w0):
    zeta = np.logspace(-3, 3, 60)
    for model in (Vacuum(), Constant(einf), Drude(wp, g), LorentzOscillator(einf, f, w0, g)):
        e = eps_imag_axis(model, zeta)
        assert np.all(np.isreal(e)) and np.all(e >= 1.0)
        assert np.all(np.diff(e) <= 1e-15 * e[:-1])


def test_permittivity_high_frequency_limit():
    assert eps_imag_axis(Drude(5.0, 0.1), 1e9) == pytest.approx(1.0, abs=1e-12)
    assert eps_imag_axis(LorentzOscillator(2.0, 3.0, 1.0, 0.1), 1e9) == pytest.approx(2.0, abs=1e-12)


@given(wp=pos, g=pos, einf=st.floats(1.0, 10.0), f=st.floats(0.0, 10.0), w0=pos)
def test_permittivity_crossing_and_passivity(wp, g, einf, f, w0):
    omega = np.logspace(-3, 3, 40)
    for model in (Constant(einf), Drude(wp, g), LorentzOscillator(einf, f, w0, g)):
        plus, minus = eps_real_axis(model, omega), eps_real_axis(model, -omega)
        assert np.array_equal(minus, np.conj(plus))
        assert np.all(omega * plus.imag >= 0.0)


def test_alpha_imag_axis_examples():
    iso = PolarizabilityModel.isotropic(1.0, 1.0, 0.1)
    assert np.array_equal(alpha_imag_axis(iso, 0.0), np.eye(3))
    assert np.max(np.abs(alpha_imag_axis(iso, 1e6))) < 1e-10
    assert np.array_equal(alpha_imag_axis(PolarizabilityModel.isotropic(2.0, 1.0, 0.0), 1.0), np.eye(3))
    assert np.array_equal(alpha_imag_axis(PolarizabilityModel.static(0.7), 123.0), 0.7 * np.eye(3))


def test_alpha_real_axis_examples():
    iso = PolarizabilityModel.isotropic(1.0, 2.0, 1.0)
    assert np.allclose(alpha_real_axis(iso, 2.0), 2j * np.eye(3), rtol=1e-15, atol=0)
    static = alpha_real_axis(iso, 0.0)
    assert np.array_equal(static, np.eye(3) + 0j)
    assert np.array_equal(alpha_real_axis(iso, -3.0), np.conj(alpha_real_axis(iso, 3.0)))
    with pytest.raises(PoleError):
        alpha_real_axis(PolarizabilityModel.isotropic(1.0, 2.0, 0.0), 2.0)


def test_alpha_keldysh_examples():
    iso = PolarizabilityModel.isotropic(1.0, 2.0, 1.0)
    k = alpha_keldysh(iso, 2.0, 1.0)
    assert k[2, 2] == pytest.approx(2j * 2.0 / math.tanh(1.0), rel=1e-14)
    assert k[2, 2].imag == pytest.approx(5.252140, rel=1e-6)
    undamped = PolarizabilityModel.isotropic(1.0, 2.0, 0.0)
    assert np.array_equal(alpha_keldysh(undamped, 1.0, 1.0), np.zeros((3, 3), dtype=complex))
    cold = alpha_keldysh(iso, 1.5, 1e-3)
    assert np.allclose(cold, 2j * alpha_real_axis(iso, 1.5).imag, rtol=1e-15, atol=0)
    with pytest.raises(DomainError):
        alpha_keldysh(iso, 0.0, 1.0)


lines = st.builds(Lorentz, st.floats(0.0, 5.0), pos, st.floats(0.0, 5.0))


@given(xx=lines, yy=lines, zz=lines)
def test_polarizability_passivity_crossing_monotonicity(xx, yy, zz):
    model = PolarizabilityModel.diagonal(xx, yy, zz)
    omega = np.logspace(-3, 3, 50)
    im = model.imag_part_real_axis(omega)
    for i in range(3):
        assert np.all(omega * im[:, i, i] >= 0.0)
    assert np.array_equal(model.imag_part_real_axis(-omega), -im)
    zeta = np.logspace(-3, 3, 50)
    t = alpha_imag_axis(model, zeta)
    assert np.array_equal(t, np.swapaxes(t, -1, -2))
    for i in range(3):
        assert np.all(np.diff(t[:, i, i]) <= 0.0)


@given(xx=lines, xz=st.builds(Lorentz, st.floats(-2.0, 2.0), pos, st.floats(0.01, 5.0)))
def test_real_axis_tensor_symmetric_and_crossing(xx, xz):
    model = PolarizabilityModel(xx=xx, zz=xx, xz=xz)
    omega = np.array([0.3, 1.7, 11.0])
    try:
        a = alpha_real_axis(model, omega)
    except PoleError:
        return
    assert np.array_equal(a, np.swapaxes(a, -1, -2))
    assert np.array_equal(alpha_real_axis(model, -omega), np.conj(a))


@pytest.mark.parametrize("zeta", [0.1, 1.0, 7.0])
def test_kramers_kronig_spot_check(zeta):
    line = Lorentz(1.3, 1.0, 0.4)
    res = integrate_semi_infinite(
        lambda w: w * line.imag_part_real_axis(w) / (w * w + zeta * zeta), 0.0,
        NumericsPolicy(rel_tol=1e-10), points=[1.0])
    assert 2.0 / math.pi * res.value == pytest.approx(float(line.imag_axis(zeta)), rel=1e-6)
