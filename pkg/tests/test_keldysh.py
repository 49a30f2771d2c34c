import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nanoforce.errors import DomainError, InconsistentComponentsError, PoleError
from nanoforce.keldysh import (
    KeldyshTriple,
    contour_component,
    drift_distribution,
    drift_distribution_odd,
    equilibrium_keldysh,
    photon_keldysh_free,
    transverse_projector,
    triple_from_components,
)
from nanoforce.response_models import PolarizabilityModel, alpha_keldysh, alpha_real_axis

EPS = np.finfo(float).eps
finite = st.floats(-1e3, 1e3)
cplx = st.builds(complex, finite, finite)
rational = st.fractions(min_value=-100, max_value=100, max_denominator=1000)


def components(t):
    return [contour_component(t, l, s) for l, s in ((1, 1), (1, 2), (2, 1), (2, 2))]


def test_contour_component_examples():
    zero = KeldyshTriple(0, 0, 0)
    assert all(g == 0 for g in components(zero))
    t = KeldyshTriple(1, 2, 3)
    assert contour_component(t, 1, 1) == 3
    assert contour_component(t, 2, 1) == 1


def test_contour_index_domain():
    with pytest.raises(DomainError):
        contour_component(KeldyshTriple(1, 2, 3), 0, 1)


def test_triple_from_components_examples():
    assert triple_from_components(0, 0, 0, 0) == KeldyshTriple(0, 0, 0)
    assert triple_from_components(3, 2, 1, 0) == KeldyshTriple(1, 2, 3)
    with pytest.raises(InconsistentComponentsError):
        triple_from_components(1, 0, 0, 0)


@given(R=rational, A=rational, K=rational)
def test_round_trip_exact_in_rationals(R, A, K):
    g = components(KeldyshTriple(R, A, K))
    assert g[0] + g[3] == g[1] + g[2]
    assert triple_from_components(*g, tol=0.0) == KeldyshTriple(R, A, K)


@given(R=cplx, A=cplx, K=cplx)
def test_round_trip_floats_to_machine_precision(R, A, K):
    g = components(KeldyshTriple(R, A, K))
    back = triple_from_components(*g)
    scale = max(abs(R), abs(A), abs(K), 1e-300)
    for x, y in ((back.R, R), (back.A, A), (back.K, K)):
        assert abs(x - y) <= 4 * EPS * scale


def test_tensor_valued_triples():
    rng = np.random.default_rng(3)
    R, A, K = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(3))
    back = triple_from_components(*components(KeldyshTriple(R, A, K)))
    assert np.max(np.abs(back.R - R)) <= 4 * EPS * np.max(np.abs(R))


def test_drift_distribution_examples():
    assert drift_distribution(2.0, 0.0, 1.0) == pytest.approx(1.0 / math.tanh(1.0), rel=1e-15)
    assert abs(drift_distribution(2.0, 0.0, 1.0) - 1.313035) < 1e-6
    assert drift_distribution(60.0, 10.0, 1.0) == pytest.approx(1.0, abs=1e-10)
    assert drift_distribution(-40.0, 10.0, 1.0) == pytest.approx(-1.0, abs=1e-10)
    with pytest.raises(PoleError):
        drift_distribution(1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        drift_distribution(1.0, 0.0, 0.0)


@given(w=st.floats(-50, 50), kv=st.floats(-5, 5), T=st.floats(0.01, 10))
def test_drift_distribution_odd_symmetry(w, kv, T):
    if w == kv or abs(w - kv) < 1e-9:
        return
    assert drift_distribution(-w, -kv, T) == -drift_distribution(w, kv, T)


@given(x=st.floats(0.01, 100), frac=st.floats(1e-10, 1e-4), T=st.floats(0.05, 10))
def test_odd_part_matches_linear_response_limit(x, frac, T):
    w = x * T
    kv = frac * min(w, T)
    # [h(kv) - h(-kv)] / 2 = kv / (2T sinh^2(w/2T)) + O(kv^3)
    linear = kv / (2.0 * T * math.sinh(w / (2.0 * T)) ** 2)
    assert drift_distribution_odd(w, kv, T) == pytest.approx(linear, rel=1e-7)


def test_transverse_projector_examples():
    P = transverse_projector([0.0, 0.0, 2.0 * math.pi])
    assert np.allclose(P, np.diag([1.0, 1.0, 0.0]), rtol=0, atol=1e-15)
    with pytest.raises(DomainError):
        transverse_projector([0.0, 0.0, 0.0])


@given(st.lists(st.floats(-10, 10), min_size=3, max_size=3), st.floats(0.1, 10))
def test_transverse_projector_properties(k, c):
    k = np.array(k)
    kmag = np.linalg.norm(k)
    if kmag < 1e-3:
        return
    P = transverse_projector(k, c)
    assert np.array_equal(P, P.T)
    assert np.max(np.abs(P @ (k / kmag))) <= 1e-14 * np.max(np.abs(P))
    assert np.trace(P) * kmag / (2 * math.pi * c**2) == pytest.approx(2.0, rel=1e-14)


def test_photon_keldysh_free_example():
    t = photon_keldysh_free(1.0, [0.0, 0.0, 1.0], [0.0, 0.0, 0.0], 0.5)
    assert np.allclose(t.weight, -2 * math.pi * np.diag([1.0, 1.0, 0.0]), rtol=0, atol=1e-14)
    assert np.array_equal(t.weight_neg, -t.weight)
    assert t.h == pytest.approx(1.0 / math.tanh(1.0), rel=1e-15)


def test_photon_keldysh_free_transverse_and_guards():
    rng = np.random.default_rng(5)
    for _ in range(20):
        k = rng.normal(size=3)
        t = photon_keldysh_free(0.7, k, [0.0, 0.0, 0.1], 1.0)
        assert np.max(np.abs(t.weight @ k)) < 1e-13
    with pytest.raises(DomainError):
        photon_keldysh_free(1.0, [0, 0, 1], [0, 0, 1.0], 1.0)
    with pytest.raises(PoleError):
        photon_keldysh_free(0.5, [0, 0, 1], [0, 0, 0.5], 1.0)


@given(w=st.floats(-20, 20).filter(lambda x: abs(x) > 1e-6), T=st.floats(0.01, 20))
def test_equilibrium_keldysh_matches_particle_keldysh(w, T):
    model = PolarizabilityModel.isotropic(1.3, 1.1, 0.2)
    a = alpha_keldysh(model, w, T)
    b = equilibrium_keldysh(alpha_real_axis(model, w), w, T)
    assert np.array_equal(a, b)
