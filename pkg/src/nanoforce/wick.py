"""Real-frequency versus Matsubara representation of equilibrium sums.

For a response ``f`` that is analytic in the upper half plane, obeys
``f(-w) = conj f(w)`` and decays faster than ``1/w^2``,

    (1/pi) int_0^inf coth(w / 2T) Im f(w) dw = T sum_{s>=0} (2 - delta_s0) f(i zeta_s),

with ``zeta_s = 2 pi T s``.  The left side is the folded form of the
full-line integral ``(1/pi) int Im f(w) / (exp(-w/T) - 1) dw``:
``1/(exp(-w/T) - 1) = -(1 + coth(w/2T)) / 2``, the constant part drops out
because ``Im f`` is odd, so the full-line form equals minus the folded form.
The right side follows from the poles of ``coth`` at ``w = i zeta_s``; the
half weight of ``s = 0`` is the pole sitting on the real axis.

:class:`RationalResponse` supplies test functions with exactly these
properties (sums of damped Lorentz lines).  A line with ``gamma < 0`` puts a
pole in the upper half plane and breaks the identity, which makes a useful
negative control.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .numerics import (
    IntegralResult,
    MatsubaraGrid,
    NumericsPolicy,
    integrate_semi_infinite,
    matsubara_sum,
)

__all__ = [
    "LorentzTerm",
    "RationalResponse",
    "WickReport",
    "real_axis_side",
    "full_line_side",
    "matsubara_side",
    "verify_wick",
    "random_response",
    "random_temperatures",
]


@dataclass(frozen=True)
class LorentzTerm:
    weight: float
    omega: float
    gamma: float

    def __post_init__(self):
        if not self.omega > 0.0:
            raise DomainError(f"line frequency must be positive, got {self.omega}")
        if self.gamma == 0.0 or abs(self.gamma) >= 2.0 * self.omega:
            raise DomainError("need 0 < |gamma| < 2 omega for a finite imaginary-axis value")


@dataclass(frozen=True)
class RationalResponse:
    """``f(w) = sum_j c_j w_j^2 / (w_j^2 - w^2 - i gamma_j w)``."""

    terms: tuple[LorentzTerm, ...] = ()

    @classmethod
    def of(cls, *triples) -> "RationalResponse":
        return cls(tuple(LorentzTerm(*t) for t in triples))

    def __add__(self, other: "RationalResponse") -> "RationalResponse":
        return RationalResponse(self.terms + other.terms)

    @property
    def analytic_upper(self) -> bool:
        return all(t.gamma > 0.0 for t in self.terms)

    @property
    def resonances(self) -> tuple[float, ...]:
        return tuple(sorted({t.omega for t in self.terms}))

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        out = np.zeros(omega.shape, dtype=complex)
        for t in self.terms:
            out += t.weight * t.omega**2 / (t.omega**2 - omega**2 - 1j * t.gamma * omega)
        return out

    def imag_real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        out = np.zeros(omega.shape)
        for t in self.terms:
            d = t.omega**2 - omega**2
            out += t.weight * t.omega**2 * t.gamma * omega / (d * d + (t.gamma * omega) ** 2)
        return out

    def imag_axis(self, zeta):
        zeta = np.asarray(zeta, dtype=float)
        out = np.zeros(zeta.shape)
        for t in self.terms:
            out += t.weight * t.omega**2 / (t.omega**2 + zeta**2 + t.gamma * zeta)
        return out

    def slope_at_zero(self) -> float:
        """``d Im f / dw`` at ``w = 0``."""
        return math.fsum(t.weight * t.gamma / t.omega**2 for t in self.terms)


def _coth_times_im(f: RationalResponse, T: float):
    slope = f.slope_at_zero()

    def integrand(omega):
        x = omega / (2.0 * T)
        small = x < 1e-8
        safe = np.where(small, 1.0, x)
        out = f.imag_real_axis(omega) / np.tanh(safe)
        # coth(x) Im f(w) -> 2T Im f'(0) as w -> 0
        return np.where(small, 2.0 * T * slope, out)

    return integrand


def _breaks(f: RationalResponse, T: float) -> list[float]:
    return sorted({*f.resonances, 2.0 * T})


def real_axis_side(f: RationalResponse, T: float, policy: NumericsPolicy | None = None) -> IntegralResult:
    """``(1/pi) int_0^inf coth(w/2T) Im f(w) dw``."""
    if not T > 0.0:
        raise DomainError(f"T must be positive, got {T}")
    policy = policy or NumericsPolicy()
    if not f.terms:
        return IntegralResult(0.0, 0.0, 0, True)
    scale = max(f.resonances)
    res = integrate_semi_infinite(_coth_times_im(f, T), 0.0, policy, scale=scale,
                                  points=_breaks(f, T))
    return IntegralResult(res.value / math.pi, res.error_estimate / math.pi,
                          res.evaluations, res.converged)


def full_line_side(f: RationalResponse, T: float, policy: NumericsPolicy | None = None) -> IntegralResult:
    """``(1/pi) int_{-inf}^{inf} Im f(w) / (exp(-w/T) - 1) dw``, the unfolded weight."""
    policy = policy or NumericsPolicy()
    if not f.terms:
        return IntegralResult(0.0, 0.0, 0, True)
    slope = f.slope_at_zero()

    def both_halves(x):
        # w = +x and w = -x folded onto x > 0; Im f(-x) = -Im f(x)
        im = f.imag_real_axis(x)
        pos = np.where(x > 0, im / np.expm1(-x / T), -T * slope)
        neg = np.where(x > 0, im * np.exp(-x / T) / np.expm1(-x / T), -T * slope)
        return pos + neg

    res = integrate_semi_infinite(both_halves, 0.0, policy, scale=max(f.resonances),
                                  points=_breaks(f, T))
    return IntegralResult(res.value / math.pi, res.error_estimate / math.pi,
                          res.evaluations, res.converged)


def matsubara_side(f: RationalResponse, T: float, policy: NumericsPolicy | None = None) -> IntegralResult:
    """``T sum_{s>=0} (2 - delta_s0) f(i zeta_s)``."""
    policy = policy or NumericsPolicy()
    grid = MatsubaraGrid(T)
    if not f.terms:
        return IntegralResult(0.0, 0.0, 0, True)
    return matsubara_sum(lambda zeta: float(f.imag_axis(zeta)), grid, policy)


@dataclass(frozen=True)
class WickReport:
    lhs: float
    rhs: float
    rel_diff: float
    verdict: str  # "pass", "fail" or "indeterminate"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def verify_wick(f: RationalResponse, T: float, tol: float = 1e-6,
                policy: NumericsPolicy | None = None) -> WickReport:
    """Compare both sides; ``indeterminate`` if either failed to converge."""
    lhs = real_axis_side(f, T, policy)
    rhs = matsubara_side(f, T, policy)
    scale = max(abs(lhs.value), abs(rhs.value))
    rel = 0.0 if scale == 0.0 else abs(lhs.value - rhs.value) / scale
    if not (lhs.converged and rhs.converged):
        verdict = "indeterminate"
    else:
        verdict = "pass" if rel <= tol else "fail"
    return WickReport(lhs.value, rhs.value, rel, verdict)


def random_response(rng: np.random.Generator, n_terms: int = 3) -> RationalResponse:
    """Positive-weight lines with ``omega`` in [0.3, 3] and ``gamma / omega`` in [0.05, 1]
    (both log-uniform)."""
    terms = []
    for _ in range(n_terms):
        omega = float(np.exp(rng.uniform(math.log(0.3), math.log(3.0))))
        gamma = omega * float(np.exp(rng.uniform(math.log(0.05), math.log(1.0))))
        terms.append(LorentzTerm(float(rng.uniform(0.2, 2.0)), omega, gamma))
    return RationalResponse(tuple(terms))


def random_temperatures(rng: np.random.Generator, n: int, lo: float = 0.01, hi: float = 10.0) -> Sequence[float]:
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size=n)).tolist()
