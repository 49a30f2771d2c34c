"""Acceptance checks shared by the ``validate`` command and the test suite.

Each check returns a :class:`Check`; :func:`run_suite` groups them.  The
scenes are fixed (seeded where random) so reports are reproducible.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .casimir_polder import HalfSpaceScene, cp_force, cp_force_isotropic, cp_sweep
from .friction import (
    FrictionScene,
    f_vector,
    f_vector_imag,
    friction_force,
    friction_isotropic_display,
    friction_oracle,
    friction_sweep,
)
from .keldysh import KeldyshTriple, contour_component, equilibrium_keldysh, triple_from_components
from .numerics import NumericsPolicy
from .response_models import (
    Constant,
    Drude,
    Lorentz,
    PolarizabilityModel,
    Vacuum,
    alpha_keldysh,
    alpha_real_axis,
)
from .wick import RationalResponse, random_response, random_temperatures, verify_wick

__all__ = ["Check", "SUITES", "run_suite", "summary_line"]

SEED = 20240611


@dataclass(frozen=True)
class Check:
    id: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    values: dict = field(default_factory=dict, repr=False, compare=False)


def summary_line(check: Check) -> str:
    status = "PASS" if check.passed else "FAIL"
    return f"CHECK id={check.id} name={check.name} status={status} seconds={check.seconds:.2f} detail={check.detail}"


# -- fixed scenes ---------------------------------------------------------------

CP_T = 1.0
CP_Z_GRID = tuple(np.logspace(-1.0, 1.0, 10).tolist())
CP_WALLS = {"constant3": Constant(3.0), "drude5": Drude(5.0, 0.1)}
CP_PARTICLES = {
    "static": PolarizabilityModel.static(1.0),
    "lorentz": PolarizabilityModel.isotropic(1.0, 1.0, 0.1),
}

FRICTION_V = 1e-4
FRICTION_TEMPERATURES = (0.2, 0.5, 2.0)


def friction_particles() -> dict[str, PolarizabilityModel]:
    """Five passive particles; the off-diagonal ones share their diagonal line
    shape so ``Im alpha`` stays positive semidefinite."""
    rng = random.Random(SEED)

    def line(a0=None, w0=None):
        w0 = w0 or rng.uniform(0.5, 2.0)
        return Lorentz(a0 if a0 is not None else rng.uniform(0.5, 2.0), w0,
                       w0 * rng.uniform(0.05, 0.5))

    iso = line()
    d = [line() for _ in range(3)]
    shared = line()
    xz_line = Lorentz(0.4 * shared.alpha0, shared.omega0, shared.gamma)
    shared2 = line()
    return {
        "isotropic": PolarizabilityModel(xx=iso, yy=iso, zz=iso),
        "diagonal": PolarizabilityModel.diagonal(*d),
        "uniaxial": PolarizabilityModel.diagonal(line(), d[0], d[0]),
        "xz": PolarizabilityModel(xx=shared, yy=line(), zz=shared, xz=xz_line),
        "full": PolarizabilityModel(
            xx=shared2, yy=shared2, zz=shared2,
            xy=Lorentz(0.3 * shared2.alpha0, shared2.omega0, shared2.gamma),
            xz=Lorentz(-0.2 * shared2.alpha0, shared2.omega0, shared2.gamma),
            yz=Lorentz(0.25 * shared2.alpha0, shared2.omega0, shared2.gamma),
        ),
    }


def close_componentwise(a, b, rel: float, floor: float = 1e-10) -> bool:
    """``|a_i - b_i| <= rel |b_i| + floor ||b||``; the floor only matters for
    components that vanish by symmetry."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return bool(np.all(np.abs(a - b) <= rel * np.abs(b) + floor * np.max(np.abs(b))))


def _cp_grid(policy):
    rows = {}
    for wn, wall in CP_WALLS.items():
        for pn, part in CP_PARTICLES.items():
            for z in CP_Z_GRID:
                sc = HalfSpaceScene(z, CP_T, wall, part)
                rows[(wn, pn, z)] = (cp_force(sc, "w0_squared", policy),
                                     cp_force_isotropic(sc, policy),
                                     cp_force(sc, "as_printed", policy))
    return rows


# -- criteria -------------------------------------------------------------------

def check_representation_equivalence(policy=None) -> Check:
    rows = _cp_grid(policy)
    worst = max(abs(a.F_z - b.F_z) / abs(b.F_z) for a, b, _ in rows.values())
    ok = all(a.converged and b.converged for a, b, _ in rows.values())
    return Check(1, "cp_representation_equivalence", ok and worst <= 1e-6,
                 f"max_rel={worst:.3e} points={len(rows)} converged={ok}")


def check_static_oracle(policy=None) -> Check:
    eps0, a0, T = 3.0, 2.0, 1.0
    wall, part = Constant(eps0), PolarizabilityModel.static(a0)
    worst_s0 = 0.0
    for z in CP_Z_GRID:
        r = cp_force(HalfSpaceScene(z, T, wall, part), policy=policy)
        oracle = -(3.0 * T * a0 / (4.0 * z**4)) * (eps0 - 1.0) / (eps0 + 1.0)
        worst_s0 = max(worst_s0, abs(r.term(0) / oracle - 1.0))
    worst_full = 0.0
    for x in (10.0, 12.0, 20.0):
        z = x / (2.0 * math.pi * T)
        r = cp_force(HalfSpaceScene(z, T, wall, part), policy=policy)
        oracle = -(3.0 * T * a0 / (4.0 * z**4)) * (eps0 - 1.0) / (eps0 + 1.0)
        worst_full = max(worst_full, abs(r.F_z / oracle - 1.0))
    return Check(2, "cp_static_term_oracle", worst_s0 <= 1e-8 and worst_full <= 1e-2,
                 f"s0_max_rel={worst_s0:.3e} full_vs_s0_max_rel={worst_full:.3e}")


def check_vacuum_null(policy=None) -> Check:
    cp_vals = [cp_force(HalfSpaceScene(z, CP_T, Vacuum(), p), policy=policy).F_z
               for z in (0.1, 1.0, 10.0) for p in CP_PARTICLES.values()]
    cp_vals += [cp_force_isotropic(HalfSpaceScene(1.0, CP_T, Vacuum(), p), policy).F_z
                for p in CP_PARTICLES.values()]
    fr = [friction_force(FrictionScene(0.0, T, p), policy).F
          for p in friction_particles().values() for T in FRICTION_TEMPERATURES]
    orc = friction_oracle(FrictionScene(0.0, 0.5, CP_PARTICLES["lorentz"]), policy)
    ok = all(v == 0.0 for v in cp_vals) and all(np.all(F == 0.0) for F in fr) and np.all(orc == 0.0)
    return Check(3, "vacuum_and_rest_null", bool(ok),
                 f"cp_max_abs={max(abs(v) for v in cp_vals):.1e} friction_max_abs={max(np.max(np.abs(F)) for F in fr):.1e}")


def check_variant_discrimination(policy=None) -> Check:
    policy = policy or NumericsPolicy()
    rows = _cp_grid(policy)
    rel = max(abs(c.F_z - b.F_z) / abs(b.F_z) for _, b, c in rows.values())
    return Check(4, "cp_as_printed_discrepancy", rel > 10.0 * policy.rel_tol,
                 f"max_rel_as_printed={rel:.3e} threshold={10.0 * policy.rel_tol:.1e}")


def check_isotropic_coefficient(policy=None) -> Check:
    exact = f_vector(1j * np.eye(3))
    exact_ok = exact.tolist() == [0.0, 0.0, 2.0 / 3.0]
    one, zero = Fraction(1), Fraction(0)
    ident = np.array([[one if i == j else zero for j in range(3)] for i in range(3)], dtype=object)
    xz = np.array([[zero] * 3 for _ in range(3)], dtype=object)
    xz[0, 2] = xz[2, 0] = one
    frac_ok = (list(f_vector_imag(ident)) == [0, 0, Fraction(2, 3)]
               and list(f_vector_imag(xz)) == [Fraction(-2, 15), 0, 0])
    worst = 0.0
    for T in FRICTION_TEMPERATURES:
        for p in (friction_particles()["isotropic"], PolarizabilityModel.isotropic(1.0, 1.0, 0.1),
                  PolarizabilityModel.isotropic(0.7, 3.0, 0.01)):
            sc = FrictionScene(FRICTION_V, T, p)
            a = friction_force(sc, policy).F[2]
            b = friction_isotropic_display(sc, policy).value
            worst = max(worst, abs(a - b) / abs(b))
    return Check(5, "friction_isotropic_coefficient", exact_ok and frac_ok and worst <= 1e-12,
                 f"f(i*I)={exact.tolist()} rational_ok={frac_ok} display_max_rel={worst:.3e}")


def check_friction_oracle(policy=None) -> Check:
    worst, ok = 0.0, True
    t0 = time.perf_counter()
    for name, p in friction_particles().items():
        for T in FRICTION_TEMPERATURES:
            sc = FrictionScene(FRICTION_V, T, p)
            closed = friction_force(sc, policy).F
            brute = friction_oracle(sc, policy)
            ok = ok and close_componentwise(brute, closed, 1e-6)
            dev = np.max(np.abs(brute - closed) / (np.abs(closed) + 1e-10 * np.max(np.abs(closed))))
            worst = max(worst, float(dev))
    elapsed = time.perf_counter() - t0
    return Check(6, "friction_momentum_oracle", ok and elapsed <= 300.0,
                 f"max_rel={worst:.3e} runs=15 seconds={elapsed:.1f}")


def narrow_line_rows(policy=None):
    a0, w0, v = 1.0, 1.0, FRICTION_V
    p = PolarizabilityModel.isotropic(a0, w0, 1e-3 * w0)
    rows = []
    for T in (0.25, 0.5, 1.0):
        F = friction_force(FrictionScene(v, T, p), policy)
        oracle = v * a0 * w0**6 / (6.0 * T * math.sinh(w0 / (2.0 * T)) ** 2)
        rows.append((T, F, oracle))
    return rows


def check_narrow_line(policy=None) -> Check:
    rows = narrow_line_rows(policy)
    worst = max(abs(F.F[2] / o - 1.0) for _, F, o in rows)
    return Check(7, "friction_narrow_line", worst <= 0.02 and all(F.converged for _, F, _ in rows),
                 f"max_rel={worst:.3e} T={[t for t, _, _ in rows]}")


def wick_cases():
    rng = np.random.default_rng(SEED)
    return [(random_response(rng, 3), T) for T in random_temperatures(rng, 20)]


NEGATIVE_CONTROL = (RationalResponse.of((1.0, 1.0, 0.5), (0.5, 2.0, -0.8)), 0.3)


def check_wick(policy=None) -> Check:
    reports = [verify_wick(f, T, 1e-6, policy) for f, T in wick_cases()]
    worst = max(r.rel_diff for r in reports)
    neg = verify_wick(*NEGATIVE_CONTROL, tol=1e-6, policy=policy)
    ok = all(r.passed for r in reports) and neg.verdict == "fail"
    return Check(8, "wick_identity", ok,
                 f"max_rel={worst:.3e} cases={len(reports)} negative_control={neg.verdict} (rel={neg.rel_diff:.2e})")


def check_keldysh(policy=None) -> Check:
    rng = np.random.default_rng(SEED)
    eps = np.finfo(float).eps
    worst_rt = 0.0
    worst_sum = 0.0
    for _ in range(1000):
        R, A, K = rng.normal(size=3) + 1j * rng.normal(size=3)
        t = KeldyshTriple(R, A, K)
        g = {(l, s): contour_component(t, l, s) for l in (1, 2) for s in (1, 2)}
        back = triple_from_components(g[1, 1], g[1, 2], g[2, 1], g[2, 2])
        scale = max(abs(R), abs(A), abs(K))
        worst_rt = max(worst_rt, max(abs(back.R - R), abs(back.A - A), abs(back.K - K)) / scale)
        worst_sum = max(worst_sum, abs(g[1, 1] + g[2, 2] - g[1, 2] - g[2, 1]) / scale)
    # exact arithmetic: the identity and round trip hold with no rounding at all
    frac_ok = True
    prng = random.Random(SEED)
    for _ in range(200):
        R, A, K = (Fraction(prng.randint(-99, 99), prng.randint(1, 99)) for _ in range(3))
        t = KeldyshTriple(R, A, K)
        g = [contour_component(t, l, s) for l, s in ((1, 1), (1, 2), (2, 1), (2, 2))]
        back = triple_from_components(*g, tol=0.0)
        frac_ok = frac_ok and g[0] + g[3] == g[1] + g[2] and (back.R, back.A, back.K) == (R, A, K)
    worst_fdt = 0.0
    omega = np.linspace(-5.0, 5.0, 200) + 0.0125
    for p in friction_particles().values():
        for T in FRICTION_TEMPERATURES:
            a = alpha_keldysh(p, omega, T)
            b = equilibrium_keldysh(alpha_real_axis(p, omega), omega, T)
            scale = np.max(np.abs(b))
            worst_fdt = max(worst_fdt, float(np.max(np.abs(a - b))) / scale)
    ok = worst_rt <= 4 * eps and worst_sum <= 4 * eps and frac_ok and worst_fdt <= 4 * eps
    return Check(9, "keldysh_algebra", ok,
                 f"roundtrip_max={worst_rt:.2e} sum_rule_max={worst_sum:.2e} rational_exact={frac_ok} fdt_max={worst_fdt:.2e}")


def acceptance_values(policy: NumericsPolicy) -> dict:
    """Every converged scalar the acceptance suite reports, with its error estimate."""
    out = {}
    for (wn, pn, z), (a, b, c) in _cp_grid(policy).items():
        out[f"cp/{wn}/{pn}/{z:.4g}/kperp"] = (a.F_z, a.error_estimate, a.converged)
        out[f"cp/{wn}/{pn}/{z:.4g}/iso"] = (b.F_z, b.error_estimate, b.converged)
        out[f"cp/{wn}/{pn}/{z:.4g}/as_printed"] = (c.F_z, c.error_estimate, c.converged)
    for name, p in friction_particles().items():
        for T in FRICTION_TEMPERATURES:
            r = friction_force(FrictionScene(FRICTION_V, T, p), policy)
            for i, axis in enumerate("xyz"):
                out[f"friction/{name}/{T}/F{axis}"] = (r.F[i], r.error_estimate[i], r.converged)
    for T, F, _ in narrow_line_rows(policy):
        out[f"narrow/{T}"] = (F.F[2], F.error_estimate[2], F.converged)
    from .wick import matsubara_side, real_axis_side
    for n, (f, T) in enumerate(wick_cases()):
        for side, fn in (("real", real_axis_side), ("matsubara", matsubara_side)):
            r = fn(f, T, policy)
            out[f"wick/{n}/{side}"] = (r.value, r.error_estimate, r.converged)
    return out


def check_self_consistency(policy=None) -> Check:
    policy = policy or NumericsPolicy()
    base = acceptance_values(policy)
    fine = acceptance_values(policy.with_rel_tol(policy.rel_tol / 2.0))
    bad = []
    for key, (v, err, conv) in base.items():
        if conv and abs(fine[key][0] - v) > err:
            bad.append(key)
    # thread-count independence
    scene = HalfSpaceScene(1.0, CP_T, CP_WALLS["drude5"], CP_PARTICLES["lorentz"])
    s1 = [r.F_z for _, r in cp_sweep(scene, CP_Z_GRID, policy=policy, threads=1)]
    s4 = [r.F_z for _, r in cp_sweep(scene, CP_Z_GRID, policy=policy, threads=4)]
    fs = FrictionScene(FRICTION_V, 0.5, friction_particles()["xz"])
    f1 = [r.F.tolist() for _, r in friction_sweep(fs, "T", FRICTION_TEMPERATURES, policy, threads=1)]
    f4 = [r.F.tolist() for _, r in friction_sweep(fs, "T", FRICTION_TEMPERATURES, policy, threads=4)]
    identical = s1 == s4 and f1 == f4
    n_conv = sum(1 for _, _, c in base.values() if c)
    return Check(10, "numerics_self_consistency", not bad and identical,
                 f"values={len(base)} converged={n_conv} exceeding_error={len(bad)} thread_bit_identical={identical}"
                 + (f" first={bad[0]}" if bad else ""))


def check_physical_signs(policy=None) -> Check:
    rows = _cp_grid(policy)
    attract = all(a.F_z < 0.0 for a, _, _ in rows.values())
    mono = True
    for wn in CP_WALLS:
        for pn in CP_PARTICLES:
            mags = [abs(rows[(wn, pn, z)][0].F_z) for z in CP_Z_GRID]
            mono = mono and all(b < a for a, b in zip(mags, mags[1:]))
    drags = [friction_force(FrictionScene(FRICTION_V, T, p), policy).drag
             for p in friction_particles().values() for T in FRICTION_TEMPERATURES]
    ok = attract and mono and min(drags) >= 0.0
    return Check(11, "physical_signs", ok,
                 f"attraction={attract} monotone={mono} min_drag={min(drags):.3e}")


CHECKS: dict[int, Callable[..., Check]] = {
    1: check_representation_equivalence,
    2: check_static_oracle,
    3: check_vacuum_null,
    4: check_variant_discrimination,
    5: check_isotropic_coefficient,
    6: check_friction_oracle,
    7: check_narrow_line,
    8: check_wick,
    9: check_keldysh,
    10: check_self_consistency,
    11: check_physical_signs,
}

SUITES: dict[str, tuple[int, ...]] = {
    "keldysh": (9,),
    "wick": (8,),
    "cp": (1, 2, 3, 4),
    "friction": (5, 6, 7),
    "all": tuple(range(1, 12)),
}


def run_check(cid: int, policy: NumericsPolicy | None = None) -> Check:
    t0 = time.perf_counter()
    check = CHECKS[cid](policy)
    return Check(check.id, check.name, check.passed, check.detail, time.perf_counter() - t0)


def run_suite(name: str = "all", policy: NumericsPolicy | None = None):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    for cid in SUITES[name]:
        yield run_check(cid, policy)
