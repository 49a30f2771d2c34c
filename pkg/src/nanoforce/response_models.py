"""Dielectric permittivity of the wall and polarizability tensor of the particle.

All models are immutable and evaluate on the real frequency axis (complex
values, retarded response) and on the positive imaginary axis ``omega = i zeta``
(real values).  Units are natural: hbar = k_B = c = 1.

Tensors are plain ``numpy`` arrays of shape ``(..., 3, 3)`` indexed by
``(x, y, z)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "Vacuum",
    "Constant",
    "Drude",
    "LorentzOscillator",
    "PermittivityModel",
    "Lorentz",
    "PolarizabilityModel",
    "eps_imag_axis",
    "eps_real_axis",
    "alpha_imag_axis",
    "alpha_real_axis",
    "alpha_keldysh",
]

# -- permittivity -----------------------------------------------------------

@dataclass(frozen=True)
class Vacuum:
    def imag_axis(self, zeta):
        return np.ones_like(np.asarray(zeta, dtype=float))

    def real_axis(self, omega):
        return np.ones_like(np.asarray(omega, dtype=float)) + 0j

    @property
    def static(self) -> float:
        return 1.0

    @property
    def zeta2_limit(self) -> float:
        return 0.0

    plasma_limit = zeta2_limit


@dataclass(frozen=True)
class Constant:
    eps0: float

    def __post_init__(self):
        if not self.eps0 >= 1.0:
            raise DomainError(f"constant permittivity must be >= 1, got {self.eps0}")

    def imag_axis(self, zeta):
        return np.full_like(np.asarray(zeta, dtype=float), self.eps0)

    def real_axis(self, omega):
        return np.full_like(np.asarray(omega, dtype=float), self.eps0) + 0j

    @property
    def static(self) -> float:
        return self.eps0

    @property
    def zeta2_limit(self) -> float:
        return 0.0

    plasma_limit = zeta2_limit


@dataclass(frozen=True)
class Drude:
    """Free-electron metal, ``eps(w) = 1 - wp^2 / (w^2 + i gamma w)``."""

    omega_p: float
    gamma: float

    def __post_init__(self):
        if not (self.omega_p > 0.0 and self.gamma > 0.0):
            raise DomainError("Drude model needs omega_p > 0 and gamma > 0")

    def imag_axis(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        return 1.0 + self.omega_p**2 / (zeta * (zeta + self.gamma))

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        if np.any(omega == 0.0):
            raise PoleError("Drude permittivity has a pole at omega = 0")
        return 1.0 - self.omega_p**2 / (omega**2 + 1j * self.gamma * omega)

    @property
    def static(self) -> float:
        return math.inf

    @property
    def zeta2_limit(self) -> float:
        # eps(i zeta) zeta^2 = zeta^2 + wp^2 zeta / (zeta + gamma) -> 0 for gamma > 0
        return 0.0

    @property
    def plasma_limit(self) -> float:
        return self.omega_p**2


@dataclass(frozen=True)
class LorentzOscillator:
    """Single-resonance dielectric, ``eps_inf + f w0^2 / (w0^2 - w^2 - i gamma w)``."""

    eps_inf: float
    strength: float
    omega0: float
    gamma: float

    def __post_init__(self):
        if not self.eps_inf >= 1.0:
            raise DomainError(f"eps_inf must be >= 1, got {self.eps_inf}")
        if not self.strength >= 0.0:
            raise DomainError(f"oscillator strength must be >= 0, got {self.strength}")
        if not (self.omega0 > 0.0 and self.gamma > 0.0):
            raise DomainError("Lorentz permittivity needs omega0 > 0 and gamma > 0")

    def imag_axis(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        w0 = self.omega0
        return self.eps_inf + self.strength * w0**2 / (w0**2 + zeta**2 + self.gamma * zeta)

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        w0 = self.omega0
        return self.eps_inf + self.strength * w0**2 / (w0**2 - omega**2 - 1j * self.gamma * omega)

    @property
    def static(self) -> float:
        return self.eps_inf + self.strength

    @property
    def zeta2_limit(self) -> float:
        return 0.0

    plasma_limit = zeta2_limit


PermittivityModel = Union[Vacuum, Constant, Drude, LorentzOscillator]


def eps_imag_axis(model: PermittivityModel, zeta):
    """Permittivity at ``omega = i zeta``; real and >= 1.  Requires ``zeta > 0``."""
    if np.any(np.asarray(zeta) <= 0.0):
        raise DomainError("eps_imag_axis needs zeta > 0; the zeta = 0 term has its own prescription")
    out = model.imag_axis(zeta)
    return float(out) if np.ndim(out) == 0 else out


def eps_real_axis(model: PermittivityModel, omega):
    out = model.real_axis(omega)
    return complex(out) if np.ndim(out) == 0 else out


# -- polarizability ---------------------------------------------------------

@dataclass(frozen=True)
class Lorentz:
    """One tensor entry ``a0 w0^2 / (w0^2 - w^2 - i gamma w)``.

    ``a0`` is the static polarizability volume.  Diagonal entries need
    ``a0 >= 0``; off-diagonal entries may carry either sign.
    """

    alpha0: float
    omega0: float
    gamma: float = 0.0

    def __post_init__(self):
        if not self.omega0 > 0.0:
            raise DomainError(f"omega0 must be positive, got {self.omega0}")
        if math.isinf(self.omega0) and self.gamma != 0.0:
            raise DomainError("a static entry (omega0 = inf) cannot be damped")
        if not self.gamma >= 0.0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")

    @property
    def is_static(self) -> bool:
        return math.isinf(self.omega0)

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        if self.is_static:
            return np.full(omega.shape, self.alpha0, dtype=complex)
        w0 = self.omega0
        denom = w0**2 - omega**2 - 1j * self.gamma * omega
        if np.any(denom == 0.0):
            raise PoleError(f"undamped oscillator evaluated on its resonance omega0={w0}")
        return self.alpha0 * w0**2 / denom

    def imag_part_real_axis(self, omega):
        """``Im`` of :meth:`real_axis`; the delta-line of an undamped entry is dropped."""
        omega = np.asarray(omega, dtype=float)
        if self.gamma == 0.0:
            return np.zeros_like(omega)  # also covers static entries
        w0 = self.omega0
        d = w0**2 - omega**2
        return self.alpha0 * w0**2 * self.gamma * omega / (d * d + (self.gamma * omega) ** 2)

    def imag_axis(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        if self.is_static:
            return np.full(zeta.shape, float(self.alpha0))
        w0 = self.omega0
        return self.alpha0 * w0**2 / (w0**2 + zeta**2 + self.gamma * zeta)


_PAIRS = {"xx": (0, 0), "yy": (1, 1), "zz": (2, 2), "xy": (0, 1), "xz": (0, 2), "yz": (1, 2)}


@dataclass(frozen=True)
class PolarizabilityModel:
    """Symmetric 3x3 polarizability made of independent Lorentz entries.

    Absent entries are identically zero.  Physical models must keep the
    imaginary part of the tensor positive semidefinite on the real axis; only
    the diagonal entries are checked here.
    """

    xx: Optional[Lorentz] = None
    yy: Optional[Lorentz] = None
    zz: Optional[Lorentz] = None
    xy: Optional[Lorentz] = None
    xz: Optional[Lorentz] = None
    yz: Optional[Lorentz] = None

    def __post_init__(self):
        for name in ("xx", "yy", "zz"):
            entry = getattr(self, name)
            if entry is not None and entry.alpha0 < 0.0:
                raise DomainError(f"diagonal entry {name} needs alpha0 >= 0")

    @classmethod
    def isotropic(cls, alpha0: float, omega0: float, gamma: float = 0.0) -> "PolarizabilityModel":
        line = Lorentz(alpha0, omega0, gamma)
        return cls(xx=line, yy=line, zz=line)

    @classmethod
    def diagonal(cls, xx: Lorentz, yy: Lorentz, zz: Lorentz) -> "PolarizabilityModel":
        return cls(xx=xx, yy=yy, zz=zz)

    @classmethod
    def static(cls, alpha0: float) -> "PolarizabilityModel":
        return cls.isotropic(alpha0, math.inf, 0.0)

    def entries(self):
        for name, (i, j) in _PAIRS.items():
            entry = getattr(self, name)
            if entry is not None:
                yield name, i, j, entry

    @property
    def is_isotropic(self) -> bool:
        return (self.xx is not None and self.xx == self.yy == self.zz
                and self.xy is None and self.xz is None and self.yz is None)

    @property
    def is_diagonal(self) -> bool:
        return self.xy is None and self.xz is None and self.yz is None

    @property
    def resonances(self) -> tuple[float, ...]:
        return tuple(sorted({e.omega0 for _, _, _, e in self.entries() if not e.is_static}))

    def _assemble(self, shape, dtype, fn):
        out = np.zeros(shape + (3, 3), dtype=dtype)
        for _, i, j, entry in self.entries():
            value = fn(entry)
            out[..., i, j] = value
            out[..., j, i] = value
        return out

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self._assemble(omega.shape, complex, lambda e: e.real_axis(omega))

    def imag_part_real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self._assemble(omega.shape, float, lambda e: e.imag_part_real_axis(omega))

    def imag_axis(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        return self._assemble(zeta.shape, float, lambda e: e.imag_axis(zeta))

    def diagonal_imag_axis(self, zeta):
        """``(alpha_xx, alpha_yy, alpha_zz)`` at ``i zeta``."""
        t = self.imag_axis(zeta)
        return t[..., 0, 0], t[..., 1, 1], t[..., 2, 2]


def alpha_imag_axis(model: PolarizabilityModel, zeta):
    """Real symmetric polarizability tensor at ``omega = i zeta``, ``zeta >= 0``."""
    if np.any(np.asarray(zeta) < 0.0):
        raise DomainError("alpha_imag_axis needs zeta >= 0")
    return model.imag_axis(zeta)


def alpha_real_axis(model: PolarizabilityModel, omega):
    """Retarded polarizability tensor ``alpha^R(omega)``."""
    return model.real_axis(omega)


def alpha_keldysh(model: PolarizabilityModel, omega, T: float):
    """Keldysh component of a particle in local equilibrium at temperature ``T``.

    ``alpha^K = 2i coth(omega / 2T) Im alpha^R(omega)``, entrywise.
    """
    omega = np.asarray(omega, dtype=float)
    if not T > 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    if np.any(omega == 0.0):
        raise DomainError("alpha_keldysh is undefined at omega = 0 (pole of coth)")
    coth = 1.0 / np.tanh(omega / (2.0 * T))
    return 2j * coth[..., None, None] * model.real_axis(omega).imag
