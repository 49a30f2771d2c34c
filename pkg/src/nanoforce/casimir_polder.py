"""Equilibrium Casimir-Polder force on a particle above a dielectric half-space.

The wall fills ``z < 0`` and the particle sits at height ``z_A``.  The force
has only a ``z`` component,

    F_z = (T / pi) sum_s (1 - delta_s0 / 2) int d^2k [R - Rbar] exp(-2 w0 z_A),

with ``w0 = sqrt(k_s^2 + k^2)``, ``w = sqrt(eps k_s^2 + k^2)`` and the
Fresnel amplitudes ``r_s = (w0 - w) / (w0 + w)``,
``r_p = (eps w0 - w) / (eps w0 + w)`` at imaginary frequency.  Two
representations are provided: the in-plane wavevector form for any diagonal
polarizability (:func:`cp_force`) and the normalised ``p = w0 / k_s`` form
for isotropic particles (:func:`cp_force_isotropic`).  They are algebraically
equal and serve as oracles for each other.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DomainError
from .numerics import (
    IntegralResult,
    MatsubaraGrid,
    NumericsPolicy,
    integrate_semi_infinite,
    matsubara_sum,
)
from .response_models import PermittivityModel, PolarizabilityModel

__all__ = [
    "HalfSpaceScene",
    "CpForceResult",
    "w0",
    "w",
    "reflection_s",
    "reflection_p",
    "phi_averaged_integrand",
    "phi_trapezoid_integrand",
    "cp_force",
    "cp_force_isotropic",
    "cp_sweep",
]

CpVariant = Literal["w0_squared", "as_printed"]
S0Prescription = Literal["limit", "quasistatic"]
VARIANTS = ("w0_squared", "as_printed")
S0_PRESCRIPTIONS = ("limit", "quasistatic")


@dataclass(frozen=True)
class HalfSpaceScene:
    z_A: float
    T: float
    wall: PermittivityModel
    particle: PolarizabilityModel
    c: float = 1.0

    def __post_init__(self):
        if not self.z_A > 0.0:
            raise DomainError(f"z_A must be positive, got {self.z_A}")
        if not self.T > 0.0:
            raise DomainError(f"T must be positive, got {self.T}")

    def at(self, z_A: float) -> "HalfSpaceScene":
        return HalfSpaceScene(z_A, self.T, self.wall, self.particle, self.c)


@dataclass(frozen=True)
class CpForceResult:
    F_z: float
    per_s: tuple
    s_terms_used: int
    converged: bool
    error_estimate: float
    tail: float = 0.0
    evaluations: int = 0

    def term(self, s: int) -> float:
        return self.per_s[s][1]


def w0(k_s, k_perp):
    return np.sqrt(np.asarray(k_s, dtype=float) ** 2 + np.asarray(k_perp, dtype=float) ** 2)


def w(k_s, k_perp, eps):
    return np.sqrt(np.asarray(eps) * np.asarray(k_s, dtype=float) ** 2
                   + np.asarray(k_perp, dtype=float) ** 2)


def _reflections(k_s, k_perp, eps, eps_ks2):
    """``(r_s, r_p, w0^2, w^2)``; ``eps_ks2`` stands in for ``eps k_s^2``."""
    a = w0(k_s, k_perp)
    w2 = eps_ks2 + k_perp**2
    b = np.sqrt(w2)
    # w0 - w = (w0^2 - w^2) / (w0 + w) keeps r_s accurate near eps = 1
    r_s = (k_s**2 - eps_ks2) / (a + b) ** 2
    if math.isinf(eps):
        r_p = np.ones_like(a)
    else:
        r_p = (eps * a - b) / (eps * a + b)
    return r_s, r_p, a * a, w2


def reflection_s(k_s, k_perp, eps):
    return _reflections(k_s, k_perp, eps, eps * np.asarray(k_s, dtype=float) ** 2)[0]


def reflection_p(k_s, k_perp, eps):
    return _reflections(k_s, k_perp, eps, eps * np.asarray(k_s, dtype=float) ** 2)[1]


def phi_averaged_integrand(k_s, k_perp, eps, alpha_diag, variant: CpVariant = "w0_squared",
                           eps_ks2=None):
    """Azimuthal integral of ``R - Rbar`` for a diagonal polarizability.

    Returns ``pi r_s k_s^2 (axx + ayy) - r_p (2 pi k^2 azz + pi W^2 (axx + ayy))``
    where ``W^2`` is ``w0^2`` (``"w0_squared"``) or ``w^2`` (``"as_printed"``).
    """
    k_s = np.asarray(k_s, dtype=float)
    k_perp = np.asarray(k_perp, dtype=float)
    if eps_ks2 is None:
        eps_ks2 = eps * k_s**2
    r_s, r_p, w0sq, wsq = _reflections(k_s, k_perp, eps, eps_ks2)
    axx, ayy, azz = alpha_diag
    W2 = _coefficient(variant, w0sq, wsq)
    return (math.pi * r_s * k_s**2 * (axx + ayy)
            - r_p * (2.0 * math.pi * k_perp**2 * azz + math.pi * W2 * (axx + ayy)))


def _coefficient(variant, w0sq, wsq):
    if variant == "w0_squared":
        return w0sq
    if variant == "as_printed":
        return wsq
    raise ValueError(f"unknown force variant {variant!r}; expected one of {VARIANTS}")


def phi_trapezoid_integrand(k_s, k_perp, eps, alpha, variant: CpVariant = "w0_squared",
                            eps_ks2=None, n_phi: int = 8):
    """Same quantity as :func:`phi_averaged_integrand`, by an ``n_phi``-point
    trapezoid over the direction ``n = (cos phi, sin phi)`` of ``k_perp``.

    Works for any tensor; only the diagonal entries enter ``R`` and ``Rbar``.
    The integrand is quadratic in ``n``, so ``n_phi >= 3`` is exact.
    """
    k_s = np.asarray(k_s, dtype=float)
    k_perp = np.asarray(k_perp, dtype=float)
    if eps_ks2 is None:
        eps_ks2 = eps * k_s**2
    r_s, r_p, w0sq, wsq = _reflections(k_s, k_perp, eps, eps_ks2)
    W2 = _coefficient(variant, w0sq, wsq)
    axx, ayy, azz = alpha[..., 0, 0], alpha[..., 1, 1], alpha[..., 2, 2]
    total = 0.0
    for phi in 2.0 * math.pi * np.arange(n_phi) / n_phi:
        nx2, ny2 = math.cos(phi) ** 2, math.sin(phi) ** 2
        R = r_s * k_s**2 * (ny2 * axx + nx2 * ayy)
        Rbar = r_p * (k_perp**2 * azz + W2 * (nx2 * axx + ny2 * ayy))
        total = total + (R - Rbar)
    return total * (2.0 * math.pi / n_phi)


def _s0_inputs(wall: PermittivityModel, s0: S0Prescription):
    if s0 == "limit":
        return wall.static, wall.zeta2_limit
    if s0 == "quasistatic":
        return wall.static, wall.plasma_limit
    raise ValueError(f"unknown s=0 prescription {s0!r}; expected one of {S0_PRESCRIPTIONS}")


def _k_scale(k_s: float, z: float) -> float:
    return max(1.0 / (2.0 * z), math.sqrt(k_s / (2.0 * z)))


def _kperp_term(scene: HalfSpaceScene, zeta: float, variant, s0, policy) -> IntegralResult:
    """``(1 / 2 pi) int_0^inf k dk Phi(k) exp(-2 w0 z_A)`` at one Matsubara frequency."""
    z = scene.z_A
    k_s = zeta / scene.c
    if zeta == 0.0:
        eps, eps_ks2 = _s0_inputs(scene.wall, s0)
    else:
        eps = float(scene.wall.imag_axis(zeta))
        eps_ks2 = eps * k_s**2
    alpha = scene.particle.imag_axis(zeta)
    diagonal = scene.particle.is_diagonal

    def integrand(k):
        if diagonal:
            phi = phi_averaged_integrand(k_s, k, eps, (alpha[0, 0], alpha[1, 1], alpha[2, 2]),
                                         variant, eps_ks2)
        else:
            phi = phi_trapezoid_integrand(k_s, k, eps, alpha, variant, eps_ks2)
        return k * phi * np.exp(-2.0 * w0(k_s, k) * z) / (2.0 * math.pi)

    return integrate_semi_infinite(integrand, 0.0, policy, scale=_k_scale(k_s, z))


def _result(series, evaluations=None) -> CpForceResult:
    per_s = tuple(enumerate(series.terms))
    return CpForceResult(
        F_z=series.value,
        per_s=per_s,
        s_terms_used=len(per_s),
        converged=series.converged,
        error_estimate=series.error_estimate,
        tail=series.tail,
        evaluations=series.evaluations if evaluations is None else evaluations,
    )


def cp_force(scene: HalfSpaceScene, variant: CpVariant = "w0_squared",
             policy: NumericsPolicy | None = None, s0: S0Prescription = "limit") -> CpForceResult:
    """Casimir-Polder force ``F_z`` from the in-plane wavevector representation.

    Negative values mean attraction towards the wall.
    """
    policy = policy or NumericsPolicy()
    _coefficient(variant, 0.0, 0.0)
    _s0_inputs(scene.wall, s0)
    grid = MatsubaraGrid(scene.T, scene.c)
    series = matsubara_sum(lambda zeta: _kperp_term(scene, zeta, variant, s0, policy), grid, policy)
    return _result(series)


def cp_force_isotropic(scene: HalfSpaceScene, policy: NumericsPolicy | None = None,
                       s0: S0Prescription = "limit") -> CpForceResult:
    """Isotropic-particle force in the normalised form

        F_z = T sum_s (2 - delta_s0) k_s^4 alpha(i zeta_s)
              int_1^inf p dp exp(-2 k_s p z_A) [r + (1 - 2 p^2) rbar],

    ``r = (p - s) / (p + s)``, ``rbar = (eps p - s) / (eps p + s)``,
    ``s = sqrt(eps - 1 + p^2)``.  The ``s = 0`` term, where this form
    degenerates, is taken from the static wavevector integral.
    """
    if not scene.particle.is_isotropic:
        raise DomainError("cp_force_isotropic needs an isotropic particle")
    policy = policy or NumericsPolicy()
    z = scene.z_A
    line = scene.particle.xx

    def static_term():
        eps, _ = _s0_inputs(scene.wall, s0)
        rbar0 = 1.0 if math.isinf(eps) else (eps - 1.0) / (eps + 1.0)
        a0 = float(line.imag_axis(0.0))
        return integrate_semi_infinite(
            lambda k: -2.0 * a0 * rbar0 * k**3 * np.exp(-2.0 * k * z), 0.0, policy,
            scale=1.0 / (2.0 * z))

    def term(zeta):
        if zeta == 0.0:
            return static_term()
        k_s = zeta / scene.c
        eps = float(scene.wall.imag_axis(zeta))
        a = float(line.imag_axis(zeta))

        def integrand(x):
            p = 1.0 + x
            s = np.sqrt(eps - 1.0 + p * p)
            r = (1.0 - eps) / (p + s) ** 2  # (p - s) / (p + s)
            rbar = (eps * p - s) / (eps * p + s)
            return p * np.exp(-2.0 * k_s * p * z) * (r + (1.0 - 2.0 * p * p) * rbar)

        res = integrate_semi_infinite(integrand, 0.0, policy, scale=1.0 / (2.0 * k_s * z))
        factor = k_s**4 * a
        return IntegralResult(factor * res.value, abs(factor) * res.error_estimate,
                              res.evaluations, res.converged)

    series = matsubara_sum(term, MatsubaraGrid(scene.T, scene.c), policy)
    return _result(series)


def cp_sweep(scene: HalfSpaceScene, z_grid: Sequence[float], variant: CpVariant = "w0_squared",
             policy: NumericsPolicy | None = None, s0: S0Prescription = "limit",
             threads: int = 1) -> list[tuple[float, CpForceResult]]:
    """``cp_force`` over a strictly increasing grid of heights.

    Rows are computed independently, so the table does not depend on
    ``threads``.
    """
    z_grid = [float(z) for z in z_grid]
    if any(z <= 0.0 for z in z_grid):
        raise DomainError("z grid must be positive")
    if any(b <= a for a, b in zip(z_grid[:-1], z_grid[1:])):
        raise DomainError("z grid must be strictly increasing")

    def row(z):
        return z, cp_force(scene.at(z), variant, policy, s0)

    if threads <= 1:
        return [row(z) for z in z_grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(row, z_grid))
