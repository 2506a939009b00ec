"""Two atoms on mirror-image uniformly accelerated worldlines (acceleration 2/L).

Over unbounded interaction time both second-order amplitudes grow linearly,
so everything here is a rate per unit proper time.  Both rates come from
residue sums over the poles of the Wightman function on the imaginary axis:

* emission: ``(Omega/2pi) sum_{n>=1} exp(-pi n Omega L)``
* exchange: ``(Omega/2pi) sum_{n>=0} exp(-pi (n + 1/2) Omega L)``

A direct quadrature of the same Fourier integrals is provided as an
independent check.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .amplitudes import AmplitudeSet
from .correlators import FOUR_PI2
from .errors import ConvergenceError
from .quadrature import (DEFAULT_SETTINGS, Pole, QuadratureSettings, extrapolate_regulator,
                         integrate_1d, integrate_pole_subtracted)

SERIES_REMAINDER_TOL = 1e-15


@dataclass(frozen=True)
class RindlerScenario:
    L: float
    gap: float
    series_terms: int = 50

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if not self.gap > 0:
            raise ValueError(f"gap must be positive, got {self.gap}")
        if self.series_terms < 1:
            raise ValueError("series_terms must be at least 1")
        if self.remainder_bound > SERIES_REMAINDER_TOL:
            raise ValueError(
                f"series_terms={self.series_terms} leaves a relative remainder "
                f"{self.remainder_bound:.2e} at Omega*L={self.x:g}; increase series_terms")

    @property
    def x(self) -> float:
        """Dimensionless ``Omega * L``."""
        return self.gap * self.L

    @property
    def remainder_bound(self) -> float:
        return float(np.exp(-np.pi * self.series_terms * self.x))

    @property
    def prefactor(self) -> float:
        return self.gap / (2.0 * np.pi)


def _terms(q: float, n: int, offset: float) -> float:
    k = np.arange(n, dtype=float) + offset
    # smallest first, so the sum does not lose the tail
    return float(np.sum(np.exp(-np.pi * q * k)[::-1]))


def emission_rate(s: RindlerScenario) -> float:
    """Single-atom emission (excitation) probability per unit proper time, residue series."""
    return s.prefactor * _terms(s.x, s.series_terms, 1.0)


def exchange_amplitude_rate(s: RindlerScenario) -> float:
    """Exchange amplitude per unit proper time, residue series."""
    return s.prefactor * _terms(s.x, s.series_terms, 0.5)


def emission_rate_closed(s: RindlerScenario) -> float:
    return s.prefactor / np.expm1(np.pi * s.x)


def exchange_amplitude_rate_closed(s: RindlerScenario) -> float:
    return s.prefactor * np.exp(-0.5 * np.pi * s.x) / -np.expm1(-np.pi * s.x)


def analytic_ratio(s: RindlerScenario) -> float:
    """Exchange over emission, ``exp(pi Omega L / 2)``."""
    return float(np.exp(0.5 * np.pi * s.x))


# -- quadrature oracle ------------------------------------------------------

def _inv_sinh2_minus_pole(z, L):
    """``1/(L^2 sinh^2(z/L)) - 1/z^2``, regular at 0."""
    x = z / L
    if abs(x) < 0.1:
        x2 = x * x
        series = -1 / 3 + x2 * (1 / 15 + x2 * (-2 / 189 + x2 * (1 / 675 - x2 * 2 / 10395)))
        return series / (L * L)
    return 1.0 / (L * L * np.sinh(x) ** 2) - 1.0 / (z * z)


def _tail(gap, L, half, alternating, kmax=60):
    """``int_{|s|>half} exp(-i gap s) * 4 sum_k (+-1)^(k+1) k exp(-2k|s|/L) ds``, both sides."""
    k = np.arange(1, kmax + 1, dtype=float)
    sgn = (-1.0) ** (k + 1) if alternating else np.ones_like(k)
    b = 2.0 * k / L
    # int_half^inf e^{-bs} cos(gap s) ds, doubled (the sine parts cancel)
    one = np.exp(-b * half) * (b * np.cos(gap * half) - gap * np.sin(gap * half)) / (b * b + gap * gap)
    return float(np.sum(4.0 * sgn * k * 2.0 * one))


def emission_rate_quadrature(s: RindlerScenario, settings: QuadratureSettings = DEFAULT_SETTINGS,
                             half_window: float = 10.0) -> tuple[float, float]:
    """``int exp(-i Omega s) W_same(s - i eps) ds`` by pole subtraction and regulator extrapolation.

    ``|s| <= half_window * L`` is integrated numerically; the exponential
    tails beyond are summed in closed form.  Returns ``(rate, error)``.
    """
    L, om = s.L, s.gap
    a, b = -half_window * L, half_window * L

    def g(u):
        return np.exp(-1j * om * u)

    samples = []
    err = 0.0
    for e in settings.ladder:
        reg = e * L

        def regular(u, reg=reg):
            return -_inv_sinh2_minus_pole(u - 1j * reg, L) / FOUR_PI2

        res = integrate_pole_subtracted(g, a, b, [Pole(1j * reg, 2, -1.0 / FOUR_PI2)], settings,
                                        regular=regular, fd_step=1e-4 * L)
        samples.append((reg, res.value))
        err = max(err, res.error)
    ext = extrapolate_regulator(samples)
    tail = -_tail(om, L, b, alternating=False) / (FOUR_PI2 * L * L)
    return float(ext.value.real + tail), float(ext.error + err)


def emission_rate_quadrature_mp(s: RindlerScenario, ladder=None, half_window: float = 10.0,
                                dps: int = 34) -> tuple[float, float]:
    """Extended-precision variant of :func:`emission_rate_quadrature`.

    For large ``Omega * L`` the rate is ``exp(-pi Omega L)`` smaller than the
    integrand, so double precision cancels away most digits.  The integrand
    is the same; ``exp(-i Omega s)`` is expanded to first order at the pole,
    the polynomial part is integrated exactly and the bounded remainder goes
    to tanh-sinh quadrature at ``dps`` digits.
    """
    ladder = tuple(ladder) if ladder is not None else DEFAULT_SETTINGS.ladder
    with mpmath.workdps(dps):
        L, om = mpmath.mpf(s.L), mpmath.mpf(s.gap)
        a, b = -half_window * L, half_window * L
        k = 1 / (4 * mpmath.pi**2)
        n_cuts = max(8, int(np.ceil(s.gap * half_window * s.L / np.pi)) + 1)
        samples = []
        for e in ladder:
            c = 1j * mpmath.mpf(e) * L

            def rem(u, c=c):
                z = u - c
                x = z / L
                core = (mpmath.exp(-1j * om * u) - 1 + 1j * om * u) / (z * z)
                reg = 1 / (L * L * mpmath.sinh(x) ** 2) - 1 / (z * z)
                return -k * (core + mpmath.exp(-1j * om * u) * reg)

            inv = 1 / (a - c) - 1 / (b - c)
            lin = mpmath.log(b - c) - mpmath.log(a - c) + c * inv
            exact = -k * (inv - 1j * om * lin)
            inner = mpmath.linspace(-mpmath.mpf(e) * 50 * L, mpmath.mpf(e) * 50 * L, 5)
            cuts = sorted(set(list(mpmath.linspace(a, b, 2 * n_cuts + 1)) + list(inner)))
            samples.append((e * s.L, complex(exact + mpmath.quad(rem, cuts))))
    ext = extrapolate_regulator(samples)
    tail = -_tail(s.gap, s.L, half_window * s.L, alternating=False) / (FOUR_PI2 * s.L * s.L)
    return float(ext.value.real + tail), float(ext.error)


def exchange_rate_quadrature(s: RindlerScenario, settings: QuadratureSettings = DEFAULT_SETTINGS,
                             half_window: float = 10.0) -> tuple[float, float]:
    """``int exp(i Omega sigma) W_cross(sigma) d sigma``; no real-axis singularity, so no regulator."""
    L, om = s.L, s.gap
    b = half_window * L

    def f(u):
        return np.cos(om * u) / (FOUR_PI2 * L * L * np.cosh(u / L) ** 2)

    n_osc = int(np.ceil(om * b / np.pi)) + 1
    res = integrate_1d(f, -b, b, settings, points=list(np.linspace(-b, b, min(n_osc, 400) + 1)[1:-1]))
    tail = _tail(om, L, b, alternating=True) / (FOUR_PI2 * L * L)
    return float(res.value.real + tail), float(res.error)


@dataclass(frozen=True)
class RindlerComparison:
    gap: float
    L: float
    emission_series: float
    emission_quadrature: float
    exchange_series: float
    exchange_quadrature: float
    ratio_closed_form: float
    ratio_series: float
    emission_rel_err: float
    exchange_rel_err: float
    ratio_rel_err: float
    converged: bool = True
    message: str = ""

    def passed(self, rate_tol: float = 1e-4, ratio_tol: float = 1e-12) -> bool:
        return (self.converged and self.emission_rel_err <= rate_tol
                and self.exchange_rel_err <= rate_tol and self.ratio_rel_err <= ratio_tol)


EXTENDED_PRECISION_ABOVE = 3.0


def compare(gap: float, L: float, settings: QuadratureSettings = DEFAULT_SETTINGS,
            extended_precision: bool | None = None) -> RindlerComparison:
    """Series rates against quadrature, and the series ratio against the closed form.

    ``extended_precision=None`` switches the emission quadrature to
    multiprecision when ``Omega * L`` exceeds ``EXTENDED_PRECISION_ABOVE``.
    """
    s = RindlerScenario(L=L, gap=gap)
    em, ex = emission_rate(s), exchange_amplitude_rate(s)
    ratio = analytic_ratio(s)
    if extended_precision is None:
        extended_precision = s.x > EXTENDED_PRECISION_ABOVE
    converged, msg = True, ""
    try:
        if extended_precision:
            em_q, _ = emission_rate_quadrature_mp(s, settings.ladder)
        else:
            em_q, _ = emission_rate_quadrature(s, settings)
        ex_q, _ = exchange_rate_quadrature(s, settings)
    except ConvergenceError as exc:
        em_q = ex_q = float("nan")
        converged, msg = False, str(exc)
    return RindlerComparison(
        gap=gap, L=L,
        emission_series=em, emission_quadrature=em_q,
        exchange_series=ex, exchange_quadrature=ex_q,
        ratio_closed_form=ratio, ratio_series=ex / em,
        emission_rel_err=abs(em_q - em) / em if converged else float("inf"),
        exchange_rel_err=abs(ex_q - ex) / ex if converged else float("inf"),
        ratio_rel_err=abs(ex / em - ratio) / ratio,
        converged=converged, message=msg,
    )


def rindler_amplitude_set(s: RindlerScenario, coupling: float = 1.0, duration: float = 1.0) -> AmplitudeSet:
    """Amplitudes accumulated over a long interaction of effective length ``duration``.

    Rates are scaled by ``coupling**2 * duration``.  The emission overlap
    between the two atoms averages to zero per unit time, so ``eab = 0``.
    """
    if not duration > 0:
        raise ValueError("duration must be positive")
    scale = coupling * coupling * duration
    x0 = exchange_amplitude_rate(s) * scale
    ea = emission_rate(s) * scale
    return AmplitudeSet(
        x0=complex(x0), x2=x0 * x0 + ea * ea, ea2=ea, eb2=ea, eab=0j,
        provenance={
            "geometry": "rindler",
            "separation": s.L,
            "gap": s.gap,
            "effective_duration": duration,
            "max_transition_probability": (emission_rate(s) + s.prefactor) * scale,
        },
    )
