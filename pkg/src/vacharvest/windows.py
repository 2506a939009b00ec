"""Interaction window functions and their Fourier spectra.

A window is ``amplitude * shape(t - center)`` where the built-in shapes peak
at 1.  Spectra use the convention ``S(w) = int eps(t) exp(+i w t) dt`` with no
``1/2pi``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from . import kernels
from .errors import WindowDomainError

FOURIER_CONVENTION = "S(w) = int eps(t) exp(+i w t) dt"

# Gaussian windows are cut at +-5 sigma, sigma = duration / 10
_GAUSS_SIGMAS = 5.0
_GAUSS_FLOOR = float(np.exp(-0.5 * _GAUSS_SIGMAS**2))

_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


class WindowShape(enum.Enum):
    COSINE_SQUARED = "cos2"
    GAUSSIAN = "gaussian"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class WindowFunction:
    """Switching profile ``eps(t)`` of one atom.

    For tabulated windows ``table`` holds ``(times, values)`` with times
    measured from ``center``; ``duration`` is then the table span.
    """

    shape: WindowShape = WindowShape.COSINE_SQUARED
    duration: float = 1.0
    center: float = 0.0
    amplitude: float = 1.0
    table: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.amplitude >= 0:
            raise ValueError(f"window amplitude must be non-negative, got {self.amplitude}")
        if self.shape is WindowShape.TABULATED:
            if self.table is None:
                raise ValueError("tabulated window needs a table")
            t = np.asarray(self.table[0], dtype=float)
            y = np.asarray(self.table[1], dtype=float)
            if t.ndim != 1 or t.shape != y.shape or t.size < 2:
                raise ValueError("table must be two equal-length 1-D columns")
            dt = np.diff(t)
            if np.any(dt <= 0) or not np.allclose(dt, dt[0], rtol=1e-9, atol=0):
                raise ValueError("tabulated window needs a uniform increasing grid")
            object.__setattr__(self, "table", (t, y))
            object.__setattr__(self, "duration", float(t[-1] - t[0]))
        if not self.duration > 0:
            raise ValueError(f"window duration must be positive, got {self.duration}")

    @property
    def support(self) -> tuple[float, float]:
        if self.shape is WindowShape.TABULATED:
            t = self.table[0]
            return self.center + t[0], self.center + t[-1]
        return self.center - 0.5 * self.duration, self.center + 0.5 * self.duration

    @property
    def is_even(self) -> bool:
        return self.shape is not WindowShape.TABULATED

    def scaled(self, amplitude: float) -> "WindowFunction":
        return WindowFunction(self.shape, self.duration, self.center, amplitude, self.table)

    def __call__(self, t):
        return window_eval(self, t)

    def spectrum(self, omega):
        return window_spectrum(self, omega)


def cosine_squared(duration: float = 1.0, center: float = 0.0, amplitude: float = 1.0) -> WindowFunction:
    return WindowFunction(WindowShape.COSINE_SQUARED, duration, center, amplitude)


def gaussian(duration: float = 1.0, center: float = 0.0, amplitude: float = 1.0) -> WindowFunction:
    return WindowFunction(WindowShape.GAUSSIAN, duration, center, amplitude)


def tabulated(times, values, center: float = 0.0, amplitude: float = 1.0) -> WindowFunction:
    return WindowFunction(WindowShape.TABULATED, 1.0, center, amplitude, (times, values))


def load_tabulated(path, center: float = 0.0, amplitude: float = 1.0) -> WindowFunction:
    """Read a two-column ``t eps`` text file on a uniform grid."""
    data = np.loadtxt(path, dtype=float, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns, got {data.shape[1]}")
    return tabulated(data[:, 0], data[:, 1], center=center, amplitude=amplitude)


def _shape_values(w: WindowFunction, s: np.ndarray) -> np.ndarray:
    """Unit-amplitude shape at offsets ``s = t - center`` (inside the support)."""
    if w.shape is WindowShape.COSINE_SQUARED:
        c = np.cos(np.pi * s / w.duration)
        return c * c
    if w.shape is WindowShape.GAUSSIAN:
        sigma = w.duration / (2 * _GAUSS_SIGMAS)
        g = np.exp(-0.5 * (s / sigma) ** 2)
        return (g - _GAUSS_FLOOR) / (1.0 - _GAUSS_FLOOR)
    t, y = w.table
    return np.interp(s, t, y)


def window_eval(w: WindowFunction, t):
    """Evaluate ``eps(t)``; exactly zero outside the support.

    Raises
    ------
    WindowDomainError
        If a tabulated window is queried outside its table.
    """
    t = np.asarray(t, dtype=float)
    lo, hi = w.support
    inside = (t >= lo) & (t <= hi)
    if w.shape is WindowShape.TABULATED and not np.all(inside):
        bad = t[~inside].ravel()[0]
        raise WindowDomainError(f"t={bad} outside tabulated domain [{lo}, {hi}]")
    out = np.zeros_like(t)
    out[inside] = w.amplitude * _shape_values(w, t[inside] - w.center)
    return out if out.ndim else float(out)


def _gaussian_spectrum(w: WindowFunction, omega: np.ndarray) -> np.ndarray:
    # truncated, floor-shifted Gaussian; erf written through the Faddeeva
    # function so that large |omega| neither overflows nor cancels
    h = 0.5 * w.duration
    sigma = h / _GAUSS_SIGMAS
    a = h / (sigma * np.sqrt(2.0))
    b = sigma * omega / np.sqrt(2.0)
    core = np.exp(-b * b) - np.exp(-a * a) * np.exp(-2j * a * b) * special.wofz(-b + 1j * a)
    trunc = sigma * np.sqrt(0.5 * np.pi) * 2.0 * core.real
    box = 2.0 * h * np.sinc(omega * h / np.pi)
    out = (trunc - _GAUSS_FLOOR * box) / (1.0 - _GAUSS_FLOOR)
    return w.amplitude * out * np.exp(1j * omega * w.center)


def _tabulated_spectrum(w: WindowFunction, omega: np.ndarray) -> np.ndarray:
    # exact transform of the linear interpolant, summed by parts
    t, y = w.table
    t = t + w.center
    slopes = np.diff(y) / np.diff(t)
    out = np.empty(omega.shape, dtype=complex)
    small = np.abs(omega) * (t[-1] - t[0]) < 1e-2
    if np.any(small):
        out[small] = _tabulated_small(w, omega[small])
    om = omega[~small]
    if om.size:
        e = np.exp(1j * np.outer(om, t))
        iw = 1j * om
        boundary = (y[-1] * e[:, -1] - y[0] * e[:, 0]) / iw
        inner = (e[:, 1:] - e[:, :-1]) @ slopes
        out[~small] = w.amplitude * (boundary - inner / (iw * iw))
    return out


def _tabulated_small(w: WindowFunction, omega: np.ndarray) -> np.ndarray:
    t, y = w.table
    t = t + w.center
    half = 0.5 * np.diff(t)
    mids = 0.5 * (t[1:] + t[:-1])
    x4, w4 = np.polynomial.legendre.leggauss(4)
    tt = (mids[:, None] + half[:, None] * x4[None, :]).ravel()
    ww = (half[:, None] * w4[None, :]).ravel()
    vals = ww * np.interp(tt, t, y)
    return w.amplitude * (np.exp(1j * np.outer(omega, tt)) @ vals)


def window_spectrum(w: WindowFunction, omega):
    """Fourier transform ``S(omega)`` of the window.

    Closed form for cos^2 windows, exact piecewise-linear transform for
    tabulated ones, and an erf (Faddeeva) form for the truncated Gaussian.
    Returns complex values with the shape of ``omega``.
    """
    omega = np.asarray(omega, dtype=float)
    flat = omega.ravel()
    if w.shape is WindowShape.COSINE_SQUARED:
        s = w.amplitude * kernels.cos2_spectrum(flat, w.duration).astype(complex)
        if w.center != 0.0:
            s = s * np.exp(1j * flat * w.center)
    elif w.shape is WindowShape.TABULATED:
        s = _tabulated_spectrum(w, flat)
    else:
        s = _gaussian_spectrum(w, flat)
    s = s.reshape(omega.shape)
    return s if s.ndim else complex(s)


@dataclass(frozen=True)
class WindowSpectrum:
    """Callable spectrum of a window, tagged with its Fourier convention."""

    source: WindowFunction
    convention: str = FOURIER_CONVENTION

    def __call__(self, omega):
        return window_spectrum(self.source, omega)

    @property
    def eval(self) -> Callable:
        return self.__call__


def window_energy(w: WindowFunction) -> float:
    """``int eps(t)**2 dt`` over the support."""
    lo, hi = w.support
    if w.shape is WindowShape.TABULATED:
        edges = w.table[0] + w.center
    else:
        edges = np.linspace(lo, hi, 9)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[1:] + edges[:-1])
    tt = (mids[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    ww = (half[:, None] * _GL_W[None, :]).ravel()
    e = w.amplitude * _shape_values(w, tt - w.center)
    return float(np.sum(ww * e * e))
