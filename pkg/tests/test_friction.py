import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nanoforce.errors import DomainError
from nanoforce.friction import (
    FrictionScene,
    f_vector,
    f_vector_imag,
    friction_force,
    friction_isotropic_display,
    friction_oracle,
    friction_sweep,
    inv_sinh2_half,
)
from nanoforce.response_models import Lorentz, PolarizabilityModel
from nanoforce.validation import close_componentwise

LORENTZ = PolarizabilityModel.isotropic(1.0, 1.0, 0.1)


def test_f_vector_examples():
    assert f_vector(1j * np.eye(3)).tolist() == [0.0, 0.0, 2.0 / 3.0]
    a = np.zeros((3, 3), dtype=complex)
    a[0, 2] = a[2, 0] = 1j
    assert np.array_equal(f_vector(a), [-2.0 / 15.0, 0.0, 0.0])
    assert np.array_equal(f_vector(np.arange(9.0).reshape(3, 3) + 0j), np.zeros(3))


def _angular_average_oracle(im):
    # f_i = < n_i n_z Tr[Im alpha (1 - n n)] > over the unit sphere, from
    # <n_a n_b> = delta/3 and <n_a n_b n_c n_d> = (dd + dd + dd)/15
    d = lambda a, b: Fraction(int(a == b))
    tr = sum(im[a][a] for a in range(3))
    out = []
    for i in range(3):
        two = d(i, 2) / 3 * tr
        four = sum(im[a][b] * (d(i, 2) * d(a, b) + d(i, a) * d(2, b) + d(i, b) * d(2, a)) / 15
                   for a in range(3) for b in range(3))
        out.append(two - four)
    return out


def test_coefficient_audit_exact_rationals():
    pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]
    for bits in itertools.product((0, 1), repeat=6):
        im = [[Fraction(0)] * 3 for _ in range(3)]
        for (i, j), b in zip(pairs, bits):
            im[i][j] = im[j][i] = Fraction(b)
        got = list(f_vector_imag(np.array(im, dtype=object)))
        assert got == _angular_average_oracle(im), bits
    iso = np.array([[Fraction(int(i == j)) for j in range(3)] for i in range(3)], dtype=object)
    assert list(f_vector_imag(iso)) == [0, 0, Fraction(2, 3)]


def test_inv_sinh2_is_overflow_free():
    x = np.array([1e-3, 1.0, 50.0, 2000.0])
    ref = 1.0 / np.sinh(x[:3] / 2) ** 2
    assert np.allclose(inv_sinh2_half(x[:3], 1.0), ref, rtol=1e-13)
    assert inv_sinh2_half(x[3], 1.0) == 0.0


def test_scene_validation():
    with pytest.raises(DomainError):
        FrictionScene(1.0, 1.0, LORENTZ)
    with pytest.raises(DomainError):
        FrictionScene(-0.1, 1.0, LORENTZ)
    with pytest.raises(DomainError):
        FrictionScene(0.1, 0.0, LORENTZ)
    with pytest.raises(DomainError):
        FrictionScene(0.1, 1.0, LORENTZ, direction=(0, 0, 0))


def test_zero_velocity():
    r = friction_force(FrictionScene(0.0, 1.0, LORENTZ))
    assert np.array_equal(r.F, np.zeros(3)) and r.drag == 0.0
    assert np.array_equal(friction_oracle(FrictionScene(0.0, 1.0, LORENTZ)), np.zeros(3))


@pytest.mark.parametrize("T", [0.1, 0.5, 3.0])
def test_isotropic_display_equivalence(T):
    sc = FrictionScene(1e-4, T, LORENTZ)
    assert friction_force(sc).F[2] == pytest.approx(friction_isotropic_display(sc).value, rel=1e-12)
    with pytest.raises(DomainError):
        friction_isotropic_display(FrictionScene(1e-4, T, PolarizabilityModel.diagonal(
            Lorentz(1, 1, 0.1), Lorentz(1, 2, 0.1), Lorentz(1, 1, 0.1))))


def test_low_temperature_power_law():
    # Im alpha ~ a0 gamma w / w0^2 at small w, so F_z -> v a0 gamma 2880 zeta(6) T^6 / (3 pi w0^2)
    a0, w0, g, v, T = 1.0, 1.0, 0.1, 1e-4, 1e-3
    p = PolarizabilityModel.isotropic(a0, w0, g)
    zeta6 = math.pi**6 / 945
    law = v * a0 * g * 2880 * zeta6 * T**6 / (3 * math.pi * w0**2)
    assert friction_force(FrictionScene(v, T, p)).F[2] == pytest.approx(law, rel=1e-3)


def test_undamped_particle_has_no_friction():
    r = friction_force(FrictionScene(1e-4, 0.5, PolarizabilityModel.isotropic(1.0, 1.0, 0.0)))
    assert np.array_equal(r.F, np.zeros(3)) and r.converged


@pytest.mark.parametrize("T", [0.2, 0.5, 1.0])
def test_narrow_line_limit(T):
    a0, w0, v = 1.5, 1.0, 1e-4
    p = PolarizabilityModel.isotropic(a0, w0, 1e-3 * w0)
    oracle = v * a0 * w0**6 / (6 * T * math.sinh(w0 / (2 * T)) ** 2)
    assert friction_force(FrictionScene(v, T, p)).F[2] == pytest.approx(oracle, rel=0.02)


def test_oracle_isotropic_example():
    sc = FrictionScene(1e-4, 0.5, LORENTZ)
    assert close_componentwise(friction_oracle(sc), friction_force(sc).F, 1e-6)


def test_oracle_confirms_off_diagonal_coefficient():
    p = PolarizabilityModel(xz=Lorentz(1.0, 1.0, 0.2))
    sc = FrictionScene(1e-4, 0.7, p)
    closed = friction_force(sc).F
    brute = friction_oracle(sc)
    assert brute[0] / closed[0] == pytest.approx(1.0, abs=1e-6)
    assert closed[0] < 0 and closed[1] == 0 and closed[2] == 0


def test_oracle_general_direction_and_tensor():
    line = Lorentz(1.0, 1.2, 0.3)
    p = PolarizabilityModel(xx=line, yy=Lorentz(0.6, 0.8, 0.1), zz=line,
                            xy=Lorentz(0.2, 1.2, 0.3), xz=Lorentz(0.3, 1.2, 0.3))
    sc = FrictionScene(1e-4, 0.6, p, direction=(1.0, 2.0, 3.0))
    assert close_componentwise(friction_oracle(sc), friction_force(sc).F, 1e-6)


def test_oracle_printed_projector_is_off_by_pi():
    sc = FrictionScene(1e-4, 0.5, LORENTZ)
    ratio = friction_oracle(sc, normalization="printed")[2] / friction_oracle(sc)[2]
    assert ratio == pytest.approx(1.0 / math.pi, rel=1e-12)


def test_oracle_is_linear_response_only():
    with pytest.raises(DomainError):
        friction_oracle(FrictionScene(0.01, 0.5, LORENTZ))


def test_direction_rotation_matches_relabelled_axes():
    L1, L2, L3 = Lorentz(1.0, 1.0, 0.1), Lorentz(0.5, 2.0, 0.3), Lorentz(2.0, 0.7, 0.05)
    along_x = friction_force(FrictionScene(1e-4, 0.5, PolarizabilityModel.diagonal(L1, L2, L3),
                                           direction=(1.0, 0.0, 0.0)))
    along_z = friction_force(FrictionScene(1e-4, 0.5, PolarizabilityModel.diagonal(L3, L2, L1)))
    assert along_x.F[0] == pytest.approx(along_z.F[2], rel=1e-12)
    assert along_x.drag == pytest.approx(along_z.drag, rel=1e-12)


@given(d=st.lists(st.floats(-1, 1), min_size=3, max_size=3))
@settings(max_examples=20)
def test_isotropic_force_follows_velocity(d):
    d = np.array(d)
    if np.linalg.norm(d) < 1e-3:
        return
    ref = friction_force(FrictionScene(1e-4, 0.5, LORENTZ))
    r = friction_force(FrictionScene(1e-4, 0.5, LORENTZ, direction=tuple(d)))
    assert np.allclose(r.F, ref.F[2] * d / np.linalg.norm(d), rtol=1e-10, atol=1e-12 * ref.F[2])
    assert r.drag == pytest.approx(ref.drag, rel=1e-10)


lines = st.builds(Lorentz, st.floats(0.01, 5.0), st.floats(0.2, 5.0), st.floats(0.01, 2.0))


@settings(max_examples=25)
@given(xx=lines, yy=lines, zz=lines, T=st.floats(0.05, 5.0))
def test_drag_nonnegative_for_passive_particles(xx, yy, zz, T):
    r = friction_force(FrictionScene(1e-4, T, PolarizabilityModel.diagonal(xx, yy, zz)))
    assert r.converged and r.drag >= 0.0


def test_velocity_sweep_is_linear():
    sc = FrictionScene(1e-4, 0.5, LORENTZ)
    rows = friction_sweep(sc, "v", [1e-5, 1e-4, 1e-2, 0.3])
    ratios = [r.F[2] / v for v, r in rows]
    assert max(ratios) / min(ratios) - 1.0 < 1e-12


def test_temperature_sweep_drag_increases():
    sc = FrictionScene(1e-4, 0.5, LORENTZ)
    rows = friction_sweep(sc, "T", np.geomspace(0.02, 20.0, 25))
    drag = [r.drag for _, r in rows]
    assert all(b > a for a, b in zip(drag, drag[1:]))


def test_sweep_edge_cases_and_threads():
    sc = FrictionScene(1e-4, 0.5, PolarizabilityModel(xx=Lorentz(1, 1, 0.1), zz=Lorentz(1, 1, 0.1),
                                                       xz=Lorentz(0.5, 1, 0.1)))
    assert friction_sweep(sc, "T", []) == []
    temps = np.geomspace(0.1, 10.0, 9)
    a = [r.F.tolist() for _, r in friction_sweep(sc, "T", temps, threads=1)]
    b = [r.F.tolist() for _, r in friction_sweep(sc, "T", temps, threads=5)]
    assert a == b
    with pytest.raises(ValueError):
        friction_sweep(sc, "z", [1.0])


def test_spectral_table():
    r = friction_force(FrictionScene(1e-4, 0.5, LORENTZ), spectral_points=16)
    assert len(r.spectral_table) == 16
    assert all(val >= 0.0 for _, val in r.spectral_table)
