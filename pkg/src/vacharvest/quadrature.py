"""Numerical integration used by every amplitude in the package.

Finite intervals go through QUADPACK (``scipy.integrate.quad``).  Semi-infinite
oscillatory integrals are split into panels between integrand zeros and summed
with optional Levin acceleration.  Integrands with poles just above the real
axis (the regulated Wightman kernels) are handled by subtracting their
principal parts analytically.  Regulated quantities are taken to zero
regulator by polynomial Richardson extrapolation.
"""
from __future__ import annotations

import dataclasses
import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import ConvergenceError


class TailStrategy(enum.Enum):
    PARTITION_AT_ZEROS = "partition"
    ACCELERATED = "accelerated"


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 500
    oscillatory_tail_strategy: TailStrategy = TailStrategy.ACCELERATED
    extrapolation_orders: int = 4
    # regulator values in units of the window duration, geometric
    regulator_ladder: tuple = (2e-3, 1e-3, 5e-4, 2.5e-4)
    max_tail_panels: int = 400_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.abs_tol < 0:
            raise ValueError("abs_tol must be non-negative")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.extrapolation_orders < 2:
            raise ValueError("need at least two regulator values")
        if len(self.regulator_ladder) < self.extrapolation_orders:
            raise ValueError("regulator ladder shorter than extrapolation_orders")

    def tolerance(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    @property
    def ladder(self) -> tuple:
        return tuple(self.regulator_ladder[: self.extrapolation_orders])


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float

    def __iter__(self):
        yield self.value
        yield self.error


def _quad_real(f, a, b, s: QuadratureSettings, points):
    kw = dict(epsabs=s.abs_tol, epsrel=s.rel_tol, limit=s.max_subdivisions, full_output=1)
    if points:
        kw["points"] = points
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, **kw)
    val, err = out[0], out[1]
    if len(out) > 3 and err > 10 * s.tolerance(val):
        raise ConvergenceError(
            f"quad failed on [{a}, {b}]: {out[3]!s:.80}", estimate=val, error=err)
    return val, err


def integrate_1d(f: Callable, a: float, b: float, settings: QuadratureSettings = DEFAULT_SETTINGS,
                 *, points: Sequence[float] | None = None, spacing: float | None = None,
                 head: float = 0.0) -> QuadResult:
    """Integrate a real- or complex-valued ``f`` over ``[a, b]``.

    ``b`` may be ``inf``; ``f`` must then accept numpy arrays and ``spacing``
    should be the distance between consecutive zeros of its fastest
    oscillation (see :func:`integrate_semi_infinite`).
    """
    if math.isinf(b):
        return integrate_semi_infinite(f, a, spacing or 1.0, settings, head=head)
    pts = None
    if points:
        pts = sorted(p for p in points if a < p < b) or None
    if not np.iscomplexobj(f(0.5 * (a + b))):
        v, e = _quad_real(lambda x: float(f(x)), a, b, settings, pts)
        return QuadResult(complex(v), e)
    vr, er = _quad_real(lambda x: complex(f(x)).real, a, b, settings, pts)
    vi, ei = _quad_real(lambda x: complex(f(x)).imag, a, b, settings, pts)
    return QuadResult(complex(vr, vi), math.hypot(er, ei))


def integrate_2d(f: Callable, domain: tuple, settings: QuadratureSettings = DEFAULT_SETTINGS) -> QuadResult:
    """Iterated adaptive quadrature of ``f(x, y)`` over ``((ax, bx), (ay, by))``."""
    (ax, bx), (ay, by) = domain
    inner_err = [0.0]

    def inner(x):
        r = integrate_1d(lambda y: f(x, y), ay, by, settings)
        inner_err[0] = max(inner_err[0], r.error)
        return r.value

    r = integrate_1d(inner, ax, bx, settings)
    return QuadResult(r.value, r.error + inner_err[0] * (bx - ax))


# -- semi-infinite oscillatory integrals -----------------------------------

_PANEL_X, _PANEL_W = np.polynomial.legendre.leggauss(16)
_BLOCK = 32


def levin_u(partial_sums: Sequence[complex], beta: float = 1.0, terms: Sequence[complex] | None = None) -> complex:
    """Levin u-transform of a sequence of partial sums.

    For a trailing window of a longer series pass the window's own ``terms``
    and ``beta = 1 + index of its first term``.
    """
    s = np.asarray(partial_sums, dtype=complex)
    n = s.size
    if n < 3:
        return complex(s[-1])
    a = np.diff(s, prepend=0.0) if terms is None else np.asarray(terms, dtype=complex)
    k = n - 1
    j = np.arange(n)
    rem = (j + beta) * a
    if np.any(rem == 0):
        return complex(s[-1])
    binom = np.array([math.comb(k, i) for i in range(n)], dtype=float)
    coef = (-1.0) ** j * binom * ((j + beta) / (k + beta)) ** (k - 1)
    return complex(np.sum(coef * s / rem) / np.sum(coef / rem))


_LEVIN_WINDOW = 20
_MAX_BLOCK_SEQUENCE = 60


class _Accelerator:
    """Tracks successive Levin estimates of one sequence and decides when they have settled."""

    def __init__(self):
        self.history: list[complex] = []
        self.err = math.inf

    def push(self, value: complex, settings: QuadratureSettings) -> bool:
        if not np.isfinite(value):
            self.history.clear()
            return False
        self.history.append(value)
        if len(self.history) < 3:
            return False
        h = self.history
        # successive transforms converge roughly geometrically; the spread
        # of the last three, inflated, bounds the distance to the limit
        self.err = 10.0 * max(abs(h[-1] - h[-2]), abs(h[-2] - h[-3]))
        return self.err <= settings.tolerance(value)


def integrate_semi_infinite(f: Callable, a: float, spacing: float,
                            settings: QuadratureSettings = DEFAULT_SETTINGS,
                            *, head: float = 0.0) -> QuadResult:
    """Integrate a vectorized ``f`` over ``[a, inf)``.

    ``[a, a + head]`` (at least one block of panels) goes to adaptive
    quadrature.  Beyond it the axis is cut into panels of width ``spacing``
    (the zero spacing of the integrand's oscillation), each integrated by
    16-point Gauss-Legendre, in blocks of 32.  With ``PARTITION_AT_ZEROS`` the
    sum stops once the tail, bounded assuming at least ``1/x**2`` decay, is
    below tolerance for two blocks running.  ``ACCELERATED`` also applies
    Levin transforms after every block, to the panel partial sums (suited to
    alternating panels) and to the block partial sums (suited to monotone
    tails), and stops when three successive transforms of either agree.
    """
    h = float(spacing)
    if not h > 0:
        raise ValueError("spacing must be positive")
    accelerate = settings.oscillatory_tail_strategy is TailStrategy.ACCELERATED
    n_head = max(_BLOCK, int(math.ceil(head / h)))
    split = a + n_head * h
    edges = a + h * np.arange(1, n_head)
    front = integrate_1d(lambda x: f(np.asarray(x)), a, split,
                         dataclasses.replace(settings, max_subdivisions=max(settings.max_subdivisions, 4 * n_head)),
                         points=list(edges) if n_head <= 400 else None)
    weights = np.tile(_PANEL_W, _BLOCK)
    total = front.value
    block_sums: list[complex] = []
    by_panel, by_block = _Accelerator(), _Accelerator()
    start = split
    blocks = 0
    panels_done = 0
    quiet = 0
    max_blocks = max(1, settings.max_tail_panels // _BLOCK)
    while blocks < max_blocks:
        mids = start + h * (np.arange(_BLOCK) + 0.5)
        x = (mids[:, None] + 0.5 * h * _PANEL_X[None, :]).ravel()
        panel = 0.5 * h * (weights * np.asarray(f(x))).reshape(_BLOCK, -1).sum(axis=1)
        cum = total + np.cumsum(panel)
        block = complex(cum[-1] - total)
        total = complex(cum[-1])
        block_sums.append(total)
        start += _BLOCK * h
        blocks += 1
        panels_done += _BLOCK
        # tail bound assuming panel sums decay at least like 1/x**2
        tail = abs(block) * (start - a) / (_BLOCK * h)
        quiet = quiet + 1 if tail <= settings.tolerance(total) else 0
        if quiet >= 2:
            return QuadResult(total, tail + front.error)
        if not accelerate:
            continue
        m = _LEVIN_WINDOW
        with np.errstate(all="ignore"):
            acc_p = levin_u(cum[-m:], beta=panels_done - m + 1, terms=panel[-m:])
            seq = np.asarray(block_sums[-_MAX_BLOCK_SEQUENCE:]) - front.value
            first = len(block_sums) - seq.size
            terms = np.diff(np.asarray(block_sums[max(first - 1, 0):]) - front.value, prepend=0.0)[-seq.size:]
            acc_b = front.value + levin_u(seq, beta=first + 1, terms=terms)
        for acc, tracker in ((acc_p, by_panel), (acc_b, by_block)):
            if tracker.push(acc, settings):
                return QuadResult(acc, max(tracker.err, 10 * np.finfo(float).eps * abs(acc)) + front.error)
    best = by_panel.history[-1] if by_panel.history else total
    raise ConvergenceError(
        f"oscillatory tail not converged after {blocks * _BLOCK} panels", estimate=best,
        error=min(by_panel.err, by_block.err))


# -- integrands with poles near the real axis -------------------------------

@dataclass(frozen=True)
class Pole:
    """Term ``coeff / (u - location)**order`` of a kernel."""

    location: complex
    order: int
    coeff: complex = 1.0

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError("only simple and double poles are supported")
        if complex(self.location).imag == 0.0:
            raise ValueError("pole must be off the real axis")


def _log_segment(a, b, c):
    # int_a^b du/(u-c); the path u-c keeps a fixed nonzero imaginary part
    return np.log(b - c) - np.log(a - c)


def _inv_segment(a, b, c):
    # int_a^b du/(u-c)**2
    return 1.0 / (a - c) - 1.0 / (b - c)


def integrate_pole_subtracted(g: Callable, a: float, b: float, poles: Sequence[Pole],
                              settings: QuadratureSettings = DEFAULT_SETTINGS,
                              *, regular: Callable | None = None, fd_step: float | None = None) -> QuadResult:
    """Integrate ``g(u) * (sum of poles + regular(u))`` over ``[a, b]``.

    Each pole's principal part is integrated in closed form against the
    low-order Taylor polynomial of ``g`` at the pole's real part; only the
    bounded remainder goes to adaptive quadrature.  The split is an identity,
    so the Taylor coefficients (first derivative by central differences) only
    affect how smooth the remainder is, never the result.
    """
    span = b - a
    h = fd_step if fd_step is not None else 1e-4 * span
    parts = []
    analytic = 0.0 + 0.0j
    for p in poles:
        c = complex(p.location)
        x0 = min(max(c.real, a), b)
        g0 = complex(g(x0))
        if p.order == 1:
            analytic += p.coeff * g0 * _log_segment(a, b, c)
            parts.append((p, x0, g0, 0.0))
        else:
            lo, hi = max(a, x0 - h), min(b, x0 + h)
            g1 = (complex(g(hi)) - complex(g(lo))) / (hi - lo)
            i1 = _log_segment(a, b, c)
            i2 = _inv_segment(a, b, c)
            analytic += p.coeff * (g0 * i2 + g1 * (i1 + (c - x0) * i2))
            parts.append((p, x0, g0, g1))

    def remainder(u):
        gu = complex(g(u))
        acc = 0.0 + 0.0j
        for p, x0, g0, g1 in parts:
            d = u - p.location
            acc += p.coeff * (gu - g0 - g1 * (u - x0)) / d**p.order
        if regular is not None:
            acc += gu * complex(regular(u))
        return acc

    points = [min(max(complex(p.location).real, a), b) for p in poles]
    r = integrate_1d(remainder, a, b, settings, points=points)
    return QuadResult(analytic + r.value, r.error)


# -- regulator extrapolation ------------------------------------------------

@dataclass(frozen=True)
class ExtrapolationResult:
    value: complex
    error: float
    reliable: bool = True
    warning: str | None = None

    def __iter__(self):
        yield self.value
        yield self.error


def _neville_at_zero(x: np.ndarray, y: np.ndarray) -> complex:
    p = y.astype(complex).copy()
    n = len(x)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (x[i] * p[i + 1] - x[i + m] * p[i]) / (x[i] - x[i + m])
    return p[0]


def extrapolate_regulator(values: Sequence[tuple]) -> ExtrapolationResult:
    """Polynomial Richardson extrapolation of ``(eps, value)`` pairs to eps=0.

    The pairs must form a geometric progression in ``eps`` (at least three).
    The error estimate is the change between the last two extrapolation
    orders.  The result is flagged when the raw values do not approach the
    limit monotonically or the order-to-order changes do not shrink.
    """
    if len(values) < 3:
        raise ValueError("need at least three regulator values")
    pts = sorted(values, key=lambda p: -p[0])
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=complex)
    if np.any(x <= 0):
        raise ValueError("regulator values must be positive")
    ratios = x[1:] / x[:-1]
    if not np.allclose(ratios, ratios[0], rtol=1e-6):
        raise ValueError("regulator values must form a geometric progression")
    # extrapolants of increasing order, each using the smallest regulators
    orders = [_neville_at_zero(x[-k:], y[-k:]) for k in range(2, len(x) + 1)]
    best = complex(orders[-1])
    steps = [abs(orders[i + 1] - orders[i]) for i in range(len(orders) - 1)]
    err = float(steps[-1]) if steps else 0.0
    # raw values should approach the limit from one side with shrinking steps
    d = np.diff(y)
    settled = all(abs(d[i + 1]) <= abs(d[i]) and (d[i + 1] * np.conj(d[i])).real >= 0 for i in range(len(d) - 1))
    reliable = settled and all(steps[i + 1] <= steps[i] for i in range(len(steps) - 1))
    warn = None if reliable else "extrapolation residuals are not monotone; result unreliable"
    return ExtrapolationResult(best, err, reliable, warn)
