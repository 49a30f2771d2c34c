"""Adaptive quadrature and Matsubara summation.

Both engines are deterministic: node placement depends only on the integrand
values, subdivision always bisects the interval with the largest error, and
sums are accumulated in a fixed ascending order.

Integrands are called with a 1-d ``numpy`` array of abscissae and must return
an array of the same shape, or of shape ``(n, m)`` for an ``m``-component
integrand (errors are then measured in the max norm).  Wrap scalar callables
with :func:`vectorize`.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "NumericsPolicy",
    "IntegralResult",
    "SeriesResult",
    "MatsubaraGrid",
    "integrate_interval",
    "integrate_semi_infinite",
    "matsubara_sum",
    "vectorize",
]

# 21-point Gauss-Kronrod rule (QUADPACK qk21).  Nodes listed from the
# outermost inwards; odd positions are the 10-point Gauss nodes.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525478306,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651146,
])

# symmetric layout on [-1, 1]: 10 negative nodes, centre, 10 positive nodes
NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[:-1][::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[:-1][::-1]])
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[[1, 3, 5, 7, 9]] = _WG
GAUSS_WEIGHTS[[11, 13, 15, 17, 19]] = _WG[::-1]

_EPS = np.finfo(float).eps
_ROUNDOFF = 50.0 * _EPS


@dataclass(frozen=True)
class NumericsPolicy:
    """Tolerances and truncation limits shared by every integral and sum."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-30
    max_subdivisions: int = 200
    matsubara_max_terms: int = 100_000
    tail_consecutive: int = 3
    tail_trigger: float = 1e-3

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if not 0.0 < self.tail_trigger < 1.0:
            raise ValueError(f"tail_trigger must lie in (0, 1), got {self.tail_trigger}")
        if not self.abs_tol > 0.0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        for name in ("max_subdivisions", "matsubara_max_terms", "tail_consecutive"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive count")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def with_rel_tol(self, rel_tol: float) -> "NumericsPolicy":
        return replace(self, rel_tol=rel_tol)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool


@dataclass(frozen=True)
class SeriesResult(IntegralResult):
    """Matsubara sum with its weighted terms ``T (2 - delta_s0) g(zeta_s)``.

    ``value == fsum(terms) + tail``; ``tail`` is nonzero only when an
    Euler-Maclaurin estimate closed an algebraically decaying series.
    """

    terms: tuple = field(default=(), repr=False)
    tail: float = 0.0


@dataclass(frozen=True)
class MatsubaraGrid:
    """Bosonic Matsubara frequencies ``zeta_s = 2 pi T s`` and ``k_s = zeta_s / c``."""

    T: float
    c: float = 1.0

    def __post_init__(self):
        if not self.T > 0.0:
            raise ValueError(f"temperature must be positive, got {self.T}")
        if not self.c > 0.0:
            raise ValueError(f"speed of light must be positive, got {self.c}")

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi * self.T

    def zeta(self, s: int) -> float:
        return self.spacing * s

    def k(self, s: int) -> float:
        return self.zeta(s) / self.c

    def frequencies(self, n: int) -> np.ndarray:
        return self.spacing * np.arange(n, dtype=float)


def vectorize(f: Callable[[float], float]) -> Callable[[np.ndarray], np.ndarray]:
    """Adapt a scalar integrand to the array calling convention."""

    def wrapped(x):
        return np.array([float(f(xi)) for xi in np.ravel(x)]).reshape(np.shape(x))

    return wrapped


def _tail_map(f, a, scale):
    # x = a + L u / (1 - u),  dx = L / (1 - u)^2 du
    def g(u):
        one_minus = 1.0 - u
        x = a + scale * u / one_minus
        y = np.asarray(f(x), dtype=float)
        jac = scale / one_minus**2
        return y * (jac if y.ndim == 1 else jac[:, None])

    return g


def _gk21(g, lo, hi):
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = centre + half * NODES
    y = np.asarray(g(x), dtype=float)
    if not np.all(np.isfinite(y)):
        raise FloatingPointError(f"integrand is not finite near u={x[0]!r}..{x[-1]!r}")
    kronrod = half * (KRONROD_WEIGHTS @ y)
    gauss = half * (GAUSS_WEIGHTS @ y)
    err = float(np.max(np.abs(kronrod - gauss)))
    resabs = abs(half) * float(np.max(KRONROD_WEIGHTS @ np.abs(y)))
    if np.ndim(kronrod) == 0:
        kronrod = float(kronrod)
    return kronrod, err, resabs


def _fsum(values):
    values = list(values)
    if values and np.ndim(values[0]):
        return np.array([math.fsum(col) for col in zip(*values)])
    return math.fsum(values)


def _norm(value) -> float:
    return float(np.max(np.abs(value))) if np.ndim(value) else abs(value)


def _adaptive(segments, policy: NumericsPolicy) -> IntegralResult:
    """Globally adaptive GK21 over a list of ``(g, lo, hi)`` segments.

    Vector-valued integrands are measured in the max norm.
    """
    heap = []
    frozen = []  # intervals too narrow to bisect further
    counter = 0
    evaluations = 0
    for g, lo, hi in segments:
        val, err, rabs = _gk21(g, lo, hi)
        evaluations += 21
        heapq.heappush(heap, (-err, counter, g, lo, hi, val, rabs))
        counter += 1

    def totals():
        items = [(e[5], -e[0], e[6]) for e in heap] + frozen
        return (_fsum(v for v, _, _ in items), math.fsum(e for _, e, _ in items),
                math.fsum(a for _, _, a in items))

    while True:
        value, error, resabs = totals()
        # cancelling integrands cannot beat rounding in the integral of |f|
        if error <= max(policy.tolerance(_norm(value)), _ROUNDOFF * resabs):
            return IntegralResult(value, error, evaluations, True)
        if not heap or len(heap) + len(frozen) >= policy.max_subdivisions:
            return IntegralResult(value, error, evaluations, False)
        neg_err, _, g, lo, hi, val, rabs = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi or (hi - lo) <= 8 * _EPS * max(abs(lo), abs(hi)):
            frozen.append((val, -neg_err, rabs))
            continue
        for a, b in ((lo, mid), (mid, hi)):
            v, e, ra = _gk21(g, a, b)
            evaluations += 21
            heapq.heappush(heap, (-e, counter, g, a, b, v, ra))
            counter += 1


def _breakpoints(points: Sequence[float], lo: float, hi: float) -> list[float]:
    inner = sorted({float(p) for p in points if lo < p < hi})
    return [lo, *inner, hi]


def integrate_interval(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    policy: NumericsPolicy | None = None,
    points: Sequence[float] = (),
) -> IntegralResult:
    """Integrate ``f`` over the finite interval ``[a, b]``.

    ``points`` are interior breakpoints (resonances, kinks) that always
    become subinterval edges.
    """
    policy = policy or NumericsPolicy()
    if a == b:
        return IntegralResult(0.0, 0.0, 0, True)  # scalar zero even for vector f
    if b < a:
        res = integrate_interval(f, b, a, policy, points)
        return replace(res, value=-res.value)
    edges = _breakpoints(points, a, b)
    segments = [(f, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]
    return _adaptive(segments, policy)


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    policy: NumericsPolicy | None = None,
    scale: float = 1.0,
    points: Sequence[float] = (),
) -> IntegralResult:
    """Integrate ``f`` over ``[a, inf)``.

    The tail beyond the last breakpoint is mapped onto ``u in [0, 1)`` with
    ``x = x0 + scale * u / (1 - u)``; ``scale`` should be the decay length of
    the integrand.  Non-convergence is reported through
    ``IntegralResult.converged``, never raised.
    """
    policy = policy or NumericsPolicy()
    if not scale > 0.0:
        raise ValueError(f"scale must be positive, got {scale}")
    inner = sorted({float(p) for p in points if p > a})
    edges = [float(a), *inner]
    segments = [(f, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]
    segments.append((_tail_map(f, edges[-1], scale), 0.0, 1.0))
    return _adaptive(segments, policy)


def _value_of(out) -> tuple[float, float, int, bool]:
    if isinstance(out, IntegralResult):
        return out.value, out.error_estimate, out.evaluations, out.converged
    return float(out), 0.0, 1, True


def _series_tail(g, grid, raw, terms, policy):
    """Estimate ``sum_{s > N}`` of the weighted terms after the stop rule fired.

    Returns ``(tail, error, evaluations, ok)``.
    """
    t_last, t_prev = terms[-1], terms[-2] if len(terms) > 1 else 0.0
    if t_last == 0.0 and t_prev == 0.0:
        return 0.0, 0.0, 0, True
    q = abs(t_last) / abs(t_prev) if t_prev != 0.0 else math.inf
    if q < 0.9:
        # geometric decay: tail is left out, bounded with a safety factor of 2
        return 0.0, 2.0 * abs(t_last) * q / (1.0 - q), 0, True
    if len(raw) < 4:
        return 0.0, math.inf, 0, False
    # slowly varying terms: Euler-Maclaurin with the continuum integral,
    #   sum_{s>n} g_s = (1/h) int_{zeta_n}^inf g - g_n/2 - h g'_n/12 + h^3 g^(3)_n/720 - ...
    # g'_n from a second-order backward difference; its error (h^2 g^(3)/3) and
    # the dropped h^3 term are bounded with a third backward difference.
    h = grid.spacing
    n = len(raw) - 1
    zeta_n = grid.zeta(n)
    g_n = raw[-1]
    dg = (3.0 * raw[-1] - 4.0 * raw[-2] + raw[-3]) / (2.0 * h)
    d3 = abs(raw[-1] - 3.0 * raw[-2] + 3.0 * raw[-3] - raw[-4])  # ~ h^3 |g^(3)|
    integral = integrate_semi_infinite(
        vectorize(lambda z: _value_of(g(z))[0]), zeta_n, policy, scale=max(zeta_n, h)
    )
    weight = 2.0 * grid.T
    tail = weight * (integral.value / h - 0.5 * g_n - h * dg / 12.0)
    trunc = 2.0 * d3 * (1.0 / 36.0 + 1.0 / 720.0) + 8.0 * _EPS * abs(g_n)
    err = weight * (integral.error_estimate / h + trunc)
    return tail, err, integral.evaluations, integral.converged


def matsubara_sum(
    g: Callable[[float], float | IntegralResult],
    grid: MatsubaraGrid,
    policy: NumericsPolicy | None = None,
) -> SeriesResult:
    """Compute ``T * sum_{s>=0} (2 - delta_s0) g(zeta_s)``.

    Terms are added in ascending ``s``.  Once ``policy.tail_consecutive``
    successive weighted terms fall below ``tail_trigger`` times the partial
    sum, a remainder estimate is attempted; summation stops when its error
    bound meets the tolerance.  ``g`` may return an
    :class:`IntegralResult`, whose error estimates and convergence flags are
    propagated into the series result.
    """
    policy = policy or NumericsPolicy()
    raw, terms = [], []
    partial = 0.0
    inner_err = 0.0
    inner_ok = True
    evaluations = 0
    small = 0
    next_try = 0
    for s in range(policy.matsubara_max_terms):
        val, err, nev, ok = _value_of(g(grid.zeta(s)))
        weight = grid.T if s == 0 else 2.0 * grid.T
        term = weight * val
        raw.append(val)
        terms.append(term)
        partial += term
        inner_err += weight * err
        inner_ok = inner_ok and ok
        evaluations += nev
        tol = policy.tolerance(partial)
        trigger = max(tol, policy.tail_trigger * abs(partial))
        small = small + 1 if abs(term) <= trigger else 0
        if small < policy.tail_consecutive or s < next_try:
            continue
        tail, tail_err, nev, tail_ok = _series_tail(g, grid, raw, terms, policy)
        evaluations += nev
        next_try = s + max(1, s // 2)
        if tail_ok and tail_err <= tol:
            value = math.fsum(terms) + tail
            error = tail_err + inner_err
            converged = inner_ok and error <= policy.tolerance(value)
            return SeriesResult(value, error, evaluations, converged, tuple(terms), tail)
    value = math.fsum(terms)
    return SeriesResult(value, abs(terms[-1]) + inner_err if terms else 0.0,
                        evaluations, False, tuple(terms), 0.0)
