"""Second-order amplitudes of two atoms coupled to the field vacuum.

Every amplitude is a smeared two-point function

    G = <0| Phi_i^{s_i} Phi_j^{s_j} |0>
      = int dt dt' eps_i(t) eps_j(t') exp(i s_i W_i t + i s_j W_j t') D(x_i, t; x_j, t')

evaluated either in the time domain (regulated kernel, pole subtraction,
extrapolation of the regulator to zero) or in the frequency domain

    G = (1/4pi^2) int_0^inf K_r(w) S_i(s_i W_i - w) S_j(s_j W_j + w) dw

with ``K_r(w) = sin(w r)/r``.  The two routes share no code below the window
definitions, so each checks the other.
"""
from __future__ import annotations

import dataclasses
import enum
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .correlators import FOUR_PI2, frequency_kernel_static
from .errors import CausalityError, CrossValidationError, UndefinedRatioError
from .quadrature import (DEFAULT_SETTINGS, Pole, QuadratureSettings, extrapolate_regulator,
                         integrate_pole_subtracted, integrate_semi_infinite)
from .windows import WindowFunction, WindowShape, cosine_squared, window_energy


class Path(enum.Enum):
    TIME_DOMAIN = "time"
    FREQUENCY_DOMAIN = "frequency"
    BOTH = "both"


@dataclass(frozen=True)
class Atom:
    gap: float
    window: WindowFunction = field(default_factory=cosine_squared)

    def __post_init__(self):
        if not self.gap > 0:
            raise ValueError(f"energy gap must be positive, got {self.gap}")

    @property
    def coupling(self) -> float:
        return self.window.amplitude


@dataclass(frozen=True)
class ScenarioConfig:
    """Two static atoms at ``x = -L/2`` (A) and ``x = +L/2`` (B).

    Static windows must be spacelike separated (touching light cones at the
    window edges is allowed); ``allow_causal_contact`` lifts this for
    exploratory runs such as separation sweeps below the window duration.
    """

    atom_a: Atom
    atom_b: Atom
    separation: float
    path: Path = Path.FREQUENCY_DOMAIN
    quadrature: QuadratureSettings = DEFAULT_SETTINGS
    allow_causal_contact: bool = False

    def __post_init__(self):
        if not self.separation > 0:
            raise ValueError(f"separation must be positive, got {self.separation}")
        if self.atom_a.window.shape is not self.atom_b.window.shape:
            raise ValueError("both atoms must use the same window shape")
        if not self.allow_causal_contact and not self.spacelike:
            raise CausalityError(
                f"windows reach time separation {self.max_time_separation:.6g} > L = {self.separation:.6g}; "
                "set allow_causal_contact (CLI: --allow-causal-contact) to override")

    @classmethod
    def symmetric(cls, gap: float, separation: float, duration: float = 1.0, coupling: float = 1.0,
                  shape: WindowShape = WindowShape.COSINE_SQUARED, **kw) -> "ScenarioConfig":
        w = WindowFunction(shape, duration, 0.0, coupling)
        return cls(Atom(gap, w), Atom(gap, w), separation, **kw)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    @property
    def max_time_separation(self) -> float:
        la, ha = self.atom_a.window.support
        lb, hb = self.atom_b.window.support
        return max(ha - lb, hb - la)

    @property
    def spacelike(self) -> bool:
        return self.max_time_separation <= self.separation * (1 + 1e-12)

    def atom(self, label: str) -> Atom:
        if label == "A":
            return self.atom_a
        if label == "B":
            return self.atom_b
        raise ValueError(f"atom label must be 'A' or 'B', got {label!r}")

    def position(self, label: str) -> float:
        self.atom(label)
        return -0.5 * self.separation if label == "A" else 0.5 * self.separation


@dataclass(frozen=True)
class SmearedValue:
    value: complex
    error: float
    path: Path
    warning: str | None = None


@dataclass(frozen=True)
class AmplitudeSet:
    """The five second-order quantities of the atoms' reduced state.

    ``x0 = <0|X_AB>``, ``x2 = |X_AB|^2``, ``ea2 = |E_A|^2``, ``eb2 = |E_B|^2``,
    ``eab = <E_A|E_B>``.
    """

    x0: complex
    x2: float
    ea2: float
    eb2: float
    eab: complex
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        scale = max(abs(self.x0), self.ea2, self.eb2, self.x2, abs(self.eab), 1e-300)
        for name in ("x2", "ea2", "eb2"):
            if getattr(self, name) < -1e-12 * scale:
                raise ValueError(f"{name} is a norm and cannot be negative")
        if abs(self.eab) ** 2 > self.ea2 * self.eb2 * (1 + 1e-8) + 1e-30 * scale:
            raise ValueError("amplitudes violate Cauchy-Schwarz |<E_A|E_B>|^2 <= |E_A|^2 |E_B|^2")
        if self.x2 < abs(self.x0) ** 2 * (1 - 1e-8):
            raise ValueError("|X_AB|^2 must bound |<0|X_AB>|^2")

    def scaled(self, factor_a: float, factor_b: float) -> "AmplitudeSet":
        """Amplitudes after rescaling the couplings by ``factor_a``, ``factor_b``."""
        fa, fb = factor_a, factor_b
        x0 = self.x0 * fa * fb
        eab = self.eab * fa * fb
        ea2 = self.ea2 * fa * fa
        eb2 = self.eb2 * fb * fb
        x2 = self.x2 * (fa * fb) ** 2
        prov = dict(self.provenance)
        if "max_transition_probability" in prov:
            prov["max_transition_probability"] *= max(fa, fb) ** 2
        return AmplitudeSet(x0, x2, ea2, eb2, eab, prov)


# -- frequency domain -------------------------------------------------------

def _max_time(w: WindowFunction) -> float:
    lo, hi = w.support
    return max(abs(lo), abs(hi))


def _frequency_two_point(wi, gi, si, wj, gj, sj, r, settings) -> SmearedValue:
    a_i = si * gi
    a_j = sj * gj

    def integrand(om):
        return frequency_kernel_static(om, r) * wi.spectrum(a_i - om) * wj.spectrum(a_j + om)

    fastest = r + _max_time(wi) + _max_time(wj)
    spacing = math.pi / fastest
    tmin = min(wi.duration, wj.duration)
    head = max(gi, gj) + 20.0 * (2 * math.pi / tmin)
    res = integrate_semi_infinite(integrand, 0.0, spacing, settings, head=head)
    return SmearedValue(res.value / FOUR_PI2, res.error / FOUR_PI2, Path.FREQUENCY_DOMAIN)


# -- time domain ------------------------------------------------------------

@functools.lru_cache(maxsize=64)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _overlap(wi: WindowFunction, wj: WindowFunction, kappa: float):
    """``u -> int dv eps_i(u + v) eps_j(v) exp(i kappa v)``."""
    li, hi_i = wi.support
    lj, hj = wj.support
    ell = min(wi.duration, wj.duration)
    n = 24 + int(0.6 * (abs(kappa) + 2 * math.pi / wi.duration + 2 * math.pi / wj.duration) * ell)
    x, w = _gauss_legendre(n)
    amp = wi.amplitude * wj.amplitude
    if wi.shape is WindowShape.COSINE_SQUARED and wj.shape is WindowShape.COSINE_SQUARED:
        def prof(u):
            return amp * kernels.cos2_overlap(u, wi.duration, wi.center, wj.duration, wj.center,
                                              kappa, x, w)
        return prof

    def prof(u):
        u = float(u)
        lo = max(lj, li - u)
        hi = min(hj, hi_i - u)
        if hi <= lo:
            return 0.0j
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        v = mid + half * x
        return half * np.sum(w * wi(u + v) * wj(v) * np.exp(1j * kappa * v))
    return prof


def _time_two_point(wi, gi, si, wj, gj, sj, r, settings) -> SmearedValue:
    kappa = si * gi + sj * gj
    prof = _overlap(wi, wj, kappa)

    def g(u):
        return complex(np.exp(1j * si * gi * u) * prof(np.float64(u)))

    li, hi_i = wi.support
    lj, hj = wj.support
    ua, ub = li - hj, hi_i - lj
    tref = max(wi.duration, wj.duration)
    fd = 1e-4 * tref
    samples = []
    err = 0.0
    for eps in settings.ladder:
        reg = eps * tref
        if r > 0:
            c = -1.0 / (FOUR_PI2 * 2.0 * r)
            poles = [Pole(r + 1j * reg, 1, c), Pole(-r + 1j * reg, 1, -c)]
        else:
            poles = [Pole(1j * reg, 2, -1.0 / FOUR_PI2)]
        res = integrate_pole_subtracted(g, ua, ub, poles, settings, fd_step=fd)
        samples.append((reg, res.value))
        err = max(err, res.error)
    ext = extrapolate_regulator(samples)
    return SmearedValue(ext.value, ext.error + err, Path.TIME_DOMAIN, ext.warning)


# -- public operations ------------------------------------------------------

def _check_sign(s):
    if s not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {s!r}")


def smeared_two_point(i: str, sign_i: int, j: str, sign_j: int, cfg: ScenarioConfig,
                      path: Path | None = None) -> SmearedValue:
    """Vacuum expectation ``<0|Phi_i^{sign_i} Phi_j^{sign_j}|0>``.

    With ``Path.BOTH`` both routes run and must agree within ten times their
    combined error estimates; the frequency-domain value is returned.

    Raises
    ------
    CrossValidationError
        If the two routes disagree.
    """
    _check_sign(sign_i)
    _check_sign(sign_j)
    path = path or cfg.path
    ai, aj = cfg.atom(i), cfg.atom(j)
    r = abs(cfg.position(i) - cfg.position(j))
    args = (ai.window, ai.gap, sign_i, aj.window, aj.gap, sign_j, r, cfg.quadrature)
    if path is Path.FREQUENCY_DOMAIN:
        return _frequency_two_point(*args)
    if path is Path.TIME_DOMAIN:
        return _time_two_point(*args)
    f = _frequency_two_point(*args)
    t = _time_two_point(*args)
    gap = abs(f.value - t.value)
    allowed = 10.0 * (f.error + t.error) + cfg.quadrature.abs_tol
    if gap > allowed:
        raise CrossValidationError(
            f"<Phi_{i}^{sign_i:+d} Phi_{j}^{sign_j:+d}>: time {t.value:.12g} vs frequency "
            f"{f.value:.12g} (|diff| {gap:.3g} > {allowed:.3g})")
    return SmearedValue(f.value, max(f.error, gap), Path.BOTH, t.warning)


def wick_x2(x0: complex, eab: complex, ea2: float, eb2: float) -> float:
    """``<Phi_B^- Phi_A^- Phi_A^+ Phi_B^+>`` from its three Gaussian pairings."""
    return abs(x0) ** 2 + abs(eab) ** 2 + ea2 * eb2


def assemble_amplitudes(cfg: ScenarioConfig, path: Path | None = None) -> AmplitudeSet:
    """Wick-assembled amplitude set for both atoms starting in the ground state.

    ``|X_AB|^2`` is the four-point function ``<Phi_B^- Phi_A^- Phi_A^+ Phi_B^+>``,
    which for the Gaussian vacuum splits into the three pairings
    ``|x0|^2 + |eab|^2 + ea2 * eb2``.
    """
    path = path or cfg.path
    x0 = smeared_two_point("A", +1, "B", +1, cfg, path)
    ea = smeared_two_point("A", -1, "A", +1, cfg, path)
    eb = smeared_two_point("B", -1, "B", +1, cfg, path)
    eab = smeared_two_point("A", -1, "B", +1, cfg, path)
    ea2 = max(ea.value.real, 0.0)
    eb2 = max(eb.value.real, 0.0)
    x2 = wick_x2(x0.value, eab.value, ea2, eb2)
    # the de-excitation probability exceeds the excitation one by the
    # on-shell line (W/2pi) int eps^2 dt; it is the largest first-order
    # transition probability and so measures how perturbative the couplings are
    pmax = max(ea2 + cfg.atom_a.gap / (2 * math.pi) * window_energy(cfg.atom_a.window),
               eb2 + cfg.atom_b.gap / (2 * math.pi) * window_energy(cfg.atom_b.window))
    prov = {
        "path": path.value,
        "errors": {"x0": x0.error, "ea2": ea.error, "eb2": eb.error, "eab": eab.error},
        "time_ordered_self_energy_omitted": True,
        "max_transition_probability": pmax,
        "warnings": {k: v.warning for k, v in (("x0", x0), ("ea2", ea), ("eb2", eb), ("eab", eab)) if v.warning},
        "geometry": "static",
        "separation": cfg.separation,
    }
    return AmplitudeSet(complex(x0.value), x2, ea2, eb2, complex(eab.value), prov)


def harvesting_ratio(amp: AmplitudeSet) -> float:
    """``|<0|X_AB>| / sqrt(|E_A|^2 |E_B|^2)``; above 1 exactly when exchange beats emission."""
    denom = amp.ea2 * amp.eb2
    if not denom > 0:
        raise UndefinedRatioError("harvesting ratio undefined: an emission norm vanishes")
    return abs(amp.x0) / math.sqrt(denom)


def transition_probabilities(atom: str, cfg: ScenarioConfig, path: Path | None = None) -> tuple[float, float]:
    """Excitation (ground start) and de-excitation (excited start) probabilities of one atom."""
    p_exc = smeared_two_point(atom, -1, atom, +1, cfg, path).value.real
    p_deexc = smeared_two_point(atom, +1, atom, -1, cfg, path).value.real
    return max(p_exc, 0.0), max(p_deexc, 0.0)
