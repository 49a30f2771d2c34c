"""Keldysh contour algebra, photon distribution functions and free-space
photon structure.

A two-time function on the Keldysh contour has four components ``G^{ls}``
(``l, s`` in ``{1, 2}``: forward and backward branch).  They are redundant;
the triple of retarded, advanced and Keldysh functions carries the same
information::

    G^{ls} = (G^K + (-1)^(l+1) G^A + (-1)^(s+1) G^R) / 2

Values may be complex scalars, ``numpy`` arrays (tensors) or any type with
exact linear arithmetic such as :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from .errors import DomainError, InconsistentComponentsError, PoleError

__all__ = [
    "KeldyshTriple",
    "contour_component",
    "triple_from_components",
    "equilibrium_keldysh",
    "drift_distribution",
    "drift_distribution_odd",
    "projector_prefactor",
    "transverse_projector",
    "OnShellTensor",
    "photon_keldysh_free",
]

Normalization = Literal["printed", "gaussian"]


@dataclass(frozen=True)
class KeldyshTriple:
    R: Any
    A: Any
    K: Any


def _check_index(i: int) -> None:
    if i not in (1, 2):
        raise DomainError(f"contour index must be 1 or 2, got {i!r}")


def contour_component(t: KeldyshTriple, lam: int, sig: int):
    _check_index(lam)
    _check_index(sig)
    a_sign = 1 if lam == 1 else -1
    r_sign = 1 if sig == 1 else -1
    return (t.K + a_sign * t.A + r_sign * t.R) / 2


def _magnitude(x) -> float:
    return float(np.max(np.abs(np.asarray(x, dtype=complex)))) if np.ndim(x) else abs(complex(x))


def triple_from_components(g11, g12, g21, g22, tol: float = 1e-12) -> KeldyshTriple:
    """Invert :func:`contour_component`.

    The four components must satisfy ``g11 + g22 = g12 + g21`` up to
    ``tol`` times the largest entry magnitude.
    """
    defect = _magnitude(g11 + g22 - g12 - g21)
    scale = max(_magnitude(g) for g in (g11, g12, g21, g22))
    if defect > tol * scale:
        raise InconsistentComponentsError(
            f"g11 + g22 - g12 - g21 = {defect:.3e} exceeds {tol:g} x {scale:.3e}"
        )
    return KeldyshTriple(R=g11 - g12, A=g11 - g21, K=g12 + g21)


def equilibrium_keldysh(retarded, omega, T: float):
    """Fluctuation-dissipation value ``2i coth(omega/2T) Im retarded``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega == 0.0):
        raise PoleError("coth(omega / 2T) has a pole at omega = 0")
    coth = 1.0 / np.tanh(omega / (2.0 * T))
    im = np.imag(retarded)
    if np.ndim(im) > np.ndim(coth):
        coth = np.reshape(coth, np.shape(coth) + (1,) * (np.ndim(im) - np.ndim(coth)))
    return 2j * coth * im


def drift_distribution(omega, k_dot_v, T: float):
    """Photon distribution seen from a particle drifting through blackbody
    radiation, ``coth((omega - k.v) / 2T)``."""
    if not T > 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    x = np.asarray(omega, dtype=float) - np.asarray(k_dot_v, dtype=float)
    if np.any(x == 0.0):
        raise PoleError("drift distribution evaluated at omega = k.v")
    out = 1.0 / np.tanh(x / (2.0 * T))
    return float(out) if np.ndim(out) == 0 else out


def _inv_sinh(a):
    # 1 / sinh(a) without overflow for large |a|
    m = np.abs(a)
    return np.sign(a) * 2.0 * np.exp(-m) / -np.expm1(-2.0 * m)


def drift_distribution_odd(omega, k_dot_v, T: float):
    """Odd-in-velocity part ``[h(omega, kv) - h(omega, -kv)] / 2``.

    Evaluated as ``sinh(b - a) / (2 sinh a sinh b)`` with
    ``a = (omega - kv) / 2T`` and ``b = (omega + kv) / 2T``, which avoids the
    cancellation of two nearly equal cotangents.
    """
    if not T > 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    omega = np.asarray(omega, dtype=float)
    kv = np.asarray(k_dot_v, dtype=float)
    a = (omega - kv) / (2.0 * T)
    b = (omega + kv) / (2.0 * T)
    if np.any(a == 0.0) or np.any(b == 0.0):
        raise PoleError("drift distribution evaluated at omega = +-k.v")
    out = 0.5 * np.sinh(b - a) * _inv_sinh(a) * _inv_sinh(b)
    return float(out) if np.ndim(out) == 0 else out


def projector_prefactor(kmag: float, c: float, normalization: Normalization) -> float:
    if normalization == "printed":
        return 2.0 * math.pi * c**2 / kmag
    if normalization == "gaussian":
        return 2.0 * math.pi**2 * c / kmag
    raise ValueError(f"unknown normalization {normalization!r}")


def transverse_projector(k, c: float = 1.0, normalization: Normalization = "printed") -> np.ndarray:
    """Spectral weight of the free transverse photon, ``N(k) (delta_ij - k_i k_j / k^2)``.

    ``normalization="printed"`` uses ``N = 2 pi c^2 / k``.  ``"gaussian"``
    uses ``N = 2 pi^2 c / k``, the imaginary part of the Gaussian-unit free
    photon propagator ``4 pi c^2 / ((omega + i0)^2 - c^2 k^2)``; only the
    latter reproduces the closed-form blackbody friction coefficient.
    """
    k = np.asarray(k, dtype=float)
    kmag = float(np.linalg.norm(k))
    if kmag == 0.0:
        raise DomainError("transverse projector undefined at k = 0")
    khat = k / kmag
    return projector_prefactor(kmag, c, normalization) * (np.eye(3) - np.outer(khat, khat))


@dataclass(frozen=True)
class OnShellTensor:
    """``D^K(omega, k) = 2i h [weight delta(omega - ck) + weight_neg delta(omega + ck)]``."""

    weight: np.ndarray
    weight_neg: np.ndarray
    h: float


def photon_keldysh_free(omega: float, k, v, T: float, c: float = 1.0,
                        normalization: Normalization = "printed") -> OnShellTensor:
    """Keldysh function of blackbody photons seen from a moving particle.

    ``Im D^R(omega, k) = T(k) [delta(omega + ck) - delta(omega - ck)]``, so the
    weight of ``delta(omega - ck)`` is ``-T(k)`` and that of
    ``delta(omega + ck)`` is ``+T(k)``.  Callers integrate the delta functions
    analytically.
    """
    k = np.asarray(k, dtype=float)
    v = np.asarray(v, dtype=float)
    if not T > 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    if not float(np.linalg.norm(v)) < c:
        raise DomainError("particle speed must stay below c")
    proj = transverse_projector(k, c, normalization)
    h = drift_distribution(omega, float(np.dot(k, v)), T)
    return OnShellTensor(weight=-proj, weight_neg=proj, h=h)
