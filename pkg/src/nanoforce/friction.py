"""Blackbody friction on a particle moving uniformly through thermal radiation.

To first order in the velocity ``v`` (taken along ``+z`` in the particle
frame)

    F_i = v / (2 pi c^5 T) int_0^inf omega^5 / sinh^2(omega / 2T) f_i(omega) d omega,
    f_i = (2/15) Im{2 delta_iz Tr alpha - alpha_iz},

which for an isotropic particle reduces to
``F = v / (3 pi c^5 T) int omega^5 Im alpha / sinh^2(omega / 2T)``.

:func:`friction_oracle` recomputes the same force by brute force in momentum
space from the general force formula, the on-shell photon spectral weight
and the Doppler-shifted photon distribution, without using ``f_i``.

Sign convention: the closed form is evaluated exactly as written, with no
minus sign inserted; a force that opposes the motion would carry the
opposite sign.  ``FrictionResult.convention`` records this.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .keldysh import Normalization, drift_distribution_odd, projector_prefactor
from .numerics import (
    IntegralResult,
    NumericsPolicy,
    integrate_interval,
    integrate_semi_infinite,
)
from .response_models import PolarizabilityModel

__all__ = [
    "CONVENTION",
    "FrictionScene",
    "FrictionResult",
    "f_vector",
    "f_vector_imag",
    "friction_force",
    "friction_isotropic_display",
    "friction_oracle",
    "friction_sweep",
    "inv_sinh2_half",
]

CONVENTION = ("F evaluated from the closed form as printed (no sign inserted); "
              "drag = F.v_hat / v, positive means F points along +v")


@dataclass(frozen=True)
class FrictionScene:
    v: float
    T: float
    particle: PolarizabilityModel
    c: float = 1.0
    direction: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if not 0.0 <= self.v < self.c:
            raise DomainError(f"speed must satisfy 0 <= v < c, got v={self.v}")
        if not self.T > 0.0:
            raise DomainError(f"T must be positive, got {self.T}")
        if not np.linalg.norm(self.direction) > 0.0:
            raise DomainError("direction must be a nonzero vector")

    def with_(self, **changes) -> "FrictionScene":
        fields = dict(v=self.v, T=self.T, particle=self.particle, c=self.c,
                      direction=self.direction)
        fields.update(changes)
        return FrictionScene(**fields)


@dataclass(frozen=True)
class FrictionResult:
    F: np.ndarray
    drag: float
    error_estimate: np.ndarray
    converged: bool
    spectral_table: tuple | None = None
    convention: str = CONVENTION


def inv_sinh2_half(omega, T):
    """``1 / sinh^2(omega / 2T)`` for ``omega > 0`` without overflow."""
    x = np.asarray(omega, dtype=float) / T
    return 4.0 * np.exp(-x) / np.expm1(-x) ** 2


def f_vector_imag(im):
    """Angular factor from the imaginary part of the tensor.

    Plain arithmetic only, so object arrays of :class:`fractions.Fraction`
    give exact results.
    """
    im = np.asarray(im)
    trace = im[..., 0, 0] + im[..., 1, 1] + im[..., 2, 2]
    fx = -2 * im[..., 0, 2] / 15
    fy = -2 * im[..., 1, 2] / 15
    fz = 2 * (2 * trace - im[..., 2, 2]) / 15
    return np.stack([fx, fy, fz], axis=-1)


def f_vector(alpha):
    """``f_i = (2/15) Im{2 delta_iz Tr alpha - alpha_iz}`` for tensors of shape ``(..., 3, 3)``."""
    return f_vector_imag(np.imag(np.asarray(alpha, dtype=complex)))


def _rotation_to_z(direction) -> np.ndarray:
    """Orthogonal matrix ``Q`` with ``Q @ d_hat = z_hat``."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    z = np.array([0.0, 0.0, 1.0])
    if np.allclose(d, z, rtol=0.0, atol=1e-15):
        return np.eye(3)
    if np.allclose(d, -z, rtol=0.0, atol=1e-15):
        return np.diag([1.0, -1.0, -1.0])
    axis = np.cross(d, z)
    s = np.linalg.norm(axis)
    cth = float(np.dot(d, z))
    kx = np.array([[0.0, -axis[2], axis[1]], [axis[2], 0.0, -axis[0]], [-axis[1], axis[0], 0.0]]) / s
    return np.eye(3) + s * kx + (1.0 - cth) * kx @ kx


def _imag_tensor_in_frame(particle: PolarizabilityModel, omega, Q):
    im = particle.imag_part_real_axis(omega)
    return Q @ im @ Q.T


def friction_force(scene: FrictionScene, policy: NumericsPolicy | None = None,
                   spectral_points: int = 0) -> FrictionResult:
    """Friction force vector from the closed-form frequency integral."""
    policy = policy or NumericsPolicy()
    Q = _rotation_to_z(scene.direction)
    d_hat = np.asarray(scene.direction, dtype=float) / np.linalg.norm(scene.direction)
    if scene.v == 0.0:
        return FrictionResult(np.zeros(3), 0.0, np.zeros(3), True)
    T = scene.T
    breaks = [w for w in scene.particle.resonances]

    def integrand(omega):
        fv = f_vector_imag(_imag_tensor_in_frame(scene.particle, omega, Q))
        return (omega**5 * inv_sinh2_half(omega, T))[:, None] * fv

    res = integrate_semi_infinite(integrand, 0.0, policy, scale=T, points=breaks)
    prefactor = scene.v / (2.0 * math.pi * scene.c**5 * T)
    F = Q.T @ (prefactor * np.asarray(res.value))
    err = np.full(3, abs(prefactor) * res.error_estimate)
    table = None
    if spectral_points:
        omegas = T * np.logspace(-2, 2, spectral_points)
        table = tuple(zip(omegas.tolist(), (prefactor * integrand(omegas)[:, 2]).tolist()))
    ok = res.converged
    return FrictionResult(F, float(np.dot(F, d_hat)) / scene.v, err, ok, table)


def friction_isotropic_display(scene: FrictionScene, policy: NumericsPolicy | None = None) -> IntegralResult:
    """Magnitude ``v / (3 pi c^5 T) int omega^5 Im alpha / sinh^2(omega/2T)``
    of the force on an isotropic particle (directed along the velocity)."""
    if not scene.particle.is_isotropic:
        raise DomainError("isotropic display needs an isotropic particle")
    policy = policy or NumericsPolicy()
    line = scene.particle.xx
    T = scene.T
    res = integrate_semi_infinite(
        lambda w: w**5 * line.imag_part_real_axis(w) * inv_sinh2_half(w, T),
        0.0, policy, scale=T, points=scene.particle.resonances)
    pref = scene.v / (3.0 * math.pi * scene.c**5 * T)
    return IntegralResult(pref * res.value, abs(pref) * res.error_estimate,
                          res.evaluations, res.converged)


# -- momentum-space oracle ----------------------------------------------------

_N_PHI = 8  # the azimuthal integrand is a trigonometric polynomial of degree 3


def _unit_vectors(u):
    """``k_hat`` on the (u = cos theta) x phi product grid, shape (len(u), N_PHI, 3)."""
    phi = 2.0 * math.pi * np.arange(_N_PHI) / _N_PHI
    sin_t = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    return np.stack([
        sin_t[:, None] * np.cos(phi)[None, :],
        sin_t[:, None] * np.sin(phi)[None, :],
        np.broadcast_to(u[:, None], (u.size, _N_PHI)),
    ], axis=-1)


def friction_oracle(scene: FrictionScene, policy: NumericsPolicy | None = None,
                    normalization: Normalization = "gaussian") -> np.ndarray:
    """Friction force by direct momentum-space integration.

    Starting from

        F = i int omega^2 d omega / (4 pi c^2) Tr[alpha^A grad D^K + alpha^K grad D^R],

    the gradient becomes ``i k`` and the ``alpha^K grad D^R`` term drops out
    because ``D^R`` is even in ``k``.  ``D^K = 2i h Im D^R`` with the
    Doppler-shifted distribution ``h = coth((omega - k.v) / 2T)`` and
    ``Im D^R = N(k) P(k) [delta(omega + ck) - delta(omega - ck)]``.  The
    frequency integral is done on the photon shell, the azimuth with an
    exact trapezoid rule, and ``|k|`` and ``cos theta`` by adaptive
    quadrature.  The linear response is isolated by antisymmetrising the
    integrand in ``v``; valid for ``v / c <= 1e-3``.

    Returns the force vector at speed ``scene.v``.  Raises if any
    quadrature fails to converge.
    """
    policy = policy or NumericsPolicy()
    if scene.v == 0.0:
        return np.zeros(3)
    if scene.v > 1e-3 * scene.c:
        raise DomainError("friction_oracle is a linear-response check; use v/c <= 1e-3")
    c, T, v = scene.c, scene.T, scene.v
    Q = _rotation_to_z(scene.direction)
    particle = scene.particle

    def shell_sum(k, u):
        """Integrand over (u, phi) at fixed |k|: shape (len(u), 3), phi summed."""
        omega = c * k
        khat = _unit_vectors(u)
        kv = k * v * u
        total = np.zeros(khat.shape[:2] + (3,))
        for sign in (1.0, -1.0):
            w_sh = sign * omega
            alpha_r = Q @ particle.real_axis(w_sh) @ Q.T
            alpha_a = np.conj(alpha_r).T
            # Tr[alpha^A P], P = 1 - k_hat k_hat
            tr = np.trace(alpha_a) - np.einsum("...i,ij,...j->...", khat, alpha_a, khat)
            weight = -1.0 if sign > 0 else 1.0  # coefficient of delta(omega -+ ck)
            h_odd = drift_distribution_odd(w_sh, kv, T)[:, None]
            contrib = omega**2 * h_odd * weight * tr
            # prefactor i * i * 2i = -2i; only the real part survives
            total += np.real(-2j * contrib)[..., None] * khat
        return total.sum(axis=1) * (2.0 * math.pi / _N_PHI)

    def radial(ks):
        out = np.empty((ks.size, 3))
        for n, k in enumerate(ks):
            inner = integrate_interval(lambda u: shell_sum(k, u), -1.0, 1.0, policy)
            if not inner.converged:
                raise ArithmeticError(f"angular quadrature failed at |k|={k}")
            out[n] = inner.value * k**3 * projector_prefactor(k, c, normalization)
        return out

    # d^3k/(2 pi)^3 with |k|^2 dk, times k_vec = |k| k_hat, over 4 pi c^2
    pref = 1.0 / ((2.0 * math.pi) ** 3 * 4.0 * math.pi * c**2)
    breaks = [w / c for w in particle.resonances]
    res = integrate_semi_infinite(radial, 0.0, policy, scale=T / c, points=breaks)
    if not res.converged:
        raise ArithmeticError("radial quadrature failed to converge")
    F_frame = pref * np.asarray(res.value)
    return Q.T @ F_frame


def friction_sweep(scene: FrictionScene, axis: str, values: Sequence[float],
                   policy: NumericsPolicy | None = None, threads: int = 1):
    """Rows ``(value, FrictionResult)`` with ``axis`` in ``{"T", "v"}``."""
    if axis not in ("T", "v"):
        raise ValueError(f"friction sweep axis must be 'T' or 'v', got {axis!r}")

    def row(x):
        return x, friction_force(scene.with_(**{axis: float(x)}), policy)

    values = [float(x) for x in values]
    if threads <= 1:
        return [row(x) for x in values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(row, values))
