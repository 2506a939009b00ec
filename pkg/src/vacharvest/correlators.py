"""Vacuum Wightman function of the massless scalar field in 3+1 dimensions.

``D(x, x') = <0|phi(x) phi(x')|0>`` with the ``t - t' - i*reg`` prescription.
The static form depends on the time difference and spatial distance; along
the mirror pair of uniformly accelerated worldlines it depends on the proper
time difference (same worldline) or the proper time sum (opposite worldlines).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

FOUR_PI2 = 4.0 * np.pi**2


def wightman_static(dt, r, reg: float = 0.0):
    """``-1 / (4 pi^2 ((dt - i reg)^2 - r^2))``."""
    z = np.asarray(dt, dtype=complex) - 1j * reg
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("distance must be non-negative")
    return -1.0 / (FOUR_PI2 * (z * z - r * r))


def wightman_rindler_same(dtau, L: float, reg: float = 0.0):
    """Same accelerated worldline, proper-time lag ``dtau``, acceleration ``2/L``."""
    if not L > 0:
        raise ValueError("L must be positive")
    s = np.sinh((np.asarray(dtau, dtype=complex) - 1j * reg) / L)
    return -1.0 / (FOUR_PI2 * L * L * s * s)


def wightman_rindler_cross(sigma, L: float, reg: float = 0.0):
    """Opposite wedges, ``sigma = tau_A + tau_B``."""
    if not L > 0:
        raise ValueError("L must be positive")
    c = np.cosh((np.asarray(sigma, dtype=complex) - 1j * reg) / L)
    return 1.0 / (FOUR_PI2 * L * L * c * c)


def frequency_kernel_static(omega, L):
    """Spectral density ``sin(omega L) / L`` of the static correlator.

    ``D(dt, L) = (1/4pi^2) int_0^inf K(omega) exp(-i omega dt) d omega``;
    at ``L = 0`` this is the same-point density ``omega``.
    """
    omega = np.asarray(omega, dtype=float)
    L = float(L)
    if L < 0:
        raise ValueError("L must be non-negative")
    x = omega * L
    if L == 0.0:
        return omega.copy() if omega.ndim else float(omega)
    # sin(x)/L = omega * sinc
    out = omega * np.sinc(x / np.pi)
    return out if out.ndim else float(out)


def rindler_trajectory(tau, L: float, side: str):
    """Coordinates ``(t, x)`` at proper time ``tau``; side ``'A'`` is the left wedge."""
    tau = np.asarray(tau, dtype=float)
    eta = 2.0 * tau / L
    t = 0.5 * L * np.sinh(eta)
    x = 0.5 * L * np.cosh(eta)
    if side == "A":
        return t, -x
    if side == "B":
        return t, x
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


class Geometry(enum.Enum):
    STATIC = "static"
    RINDLER = "rindler"


@dataclass(frozen=True)
class WightmanKernel:
    geometry: Geometry
    L: float
    regulator: float = 0.0

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be positive")
        if self.regulator < 0:
            raise ValueError("regulator must be non-negative")

    def same(self, x):
        """Correlator between two points on one worldline (time lag ``x``)."""
        if self.geometry is Geometry.STATIC:
            return wightman_static(x, 0.0, self.regulator)
        return wightman_rindler_same(x, self.L, self.regulator)

    def cross(self, x):
        """Correlator between the two worldlines (lag, or proper-time sum)."""
        if self.geometry is Geometry.STATIC:
            return wightman_static(x, self.L, self.regulator)
        return wightman_rindler_cross(x, self.L, self.regulator)
