"""One-parameter scans over the gap or the separation, with crossing detection."""
from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .amplitudes import Path, ScenarioConfig, assemble_amplitudes, harvesting_ratio
from .density import assemble_rho, inseparability_inequalities, negativity
from .errors import ConvergenceError, CrossValidationError, HarvestError, PerturbativeRegimeError
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings
from .windows import WindowShape

OUTPUT_GROUPS = ("ratio", "negativity", "exchange_dominates", "overlap_dominates", "amplitudes")
AMPLITUDE_COLUMNS = ("x0_re", "x0_im", "x2", "ea2", "eb2", "eab_re", "eab_im")
CROSSING_XTOL = 1e-4


class SweepVariable(enum.Enum):
    OMEGA = "Omega"
    L = "L"


class SweepFailed(ConvergenceError):
    """More than half of the grid points failed to converge."""


@dataclass(frozen=True)
class SweepSpec:
    variable: SweepVariable
    start: float
    stop: float
    steps: int
    gap: float = 9.5
    separation: float = 1.0
    duration: float = 1.0
    coupling: float = 0.01
    shape: WindowShape = WindowShape.COSINE_SQUARED
    path: Path = Path.FREQUENCY_DOMAIN
    quadrature: QuadratureSettings = DEFAULT_SETTINGS
    allow_causal_contact: bool = False
    outputs: tuple = OUTPUT_GROUPS

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("a sweep needs at least two steps")
        if not (self.start > 0 and self.stop > 0):
            raise ValueError("sweep range must be positive")
        unknown = set(self.outputs) - set(OUTPUT_GROUPS)
        if unknown:
            raise ValueError(f"unknown outputs {sorted(unknown)}; choose from {OUTPUT_GROUPS}")
        object.__setattr__(self, "outputs", tuple(g for g in OUTPUT_GROUPS if g in self.outputs))

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def config(self, value: float) -> ScenarioConfig:
        gap, sep = (value, self.separation) if self.variable is SweepVariable.OMEGA else (self.gap, value)
        return ScenarioConfig.symmetric(gap, sep, self.duration, self.coupling, self.shape, path=self.path,
                                        quadrature=self.quadrature,
                                        allow_causal_contact=self.allow_causal_contact)

    @property
    def columns(self) -> tuple:
        cols = [self.variable.value, "status"]
        if "ratio" in self.outputs:
            cols.append("ratio")
        if "negativity" in self.outputs:
            cols.append("negativity")
        if "exchange_dominates" in self.outputs:
            cols.append("exchange_dominates")
        if "overlap_dominates" in self.outputs:
            cols.append("overlap_dominates")
        if "amplitudes" in self.outputs:
            cols.extend(AMPLITUDE_COLUMNS)
        cols.append("max_abs_error")
        return tuple(cols)


@dataclass(frozen=True)
class Crossing:
    value: float
    direction: str  # "up": ratio rises through 1 as the parameter grows


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list
    crossings: list = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(r["status"] != "ok" for r in self.rows)


def _evaluate(spec: SweepSpec, value: float) -> dict:
    row = {c: math.nan for c in spec.columns}
    row[spec.variable.value] = float(value)
    try:
        amp = assemble_amplitudes(spec.config(value))
    except (ConvergenceError, CrossValidationError) as exc:
        row["status"] = f"nonconverged: {type(exc).__name__}"
        return row
    row["status"] = "ok"
    row["max_abs_error"] = max(amp.provenance["errors"].values())
    if "ratio" in spec.outputs:
        row["ratio"] = harvesting_ratio(amp)
    exchange_dominates, overlap_dominates = inseparability_inequalities(amp)
    if "exchange_dominates" in spec.outputs:
        row["exchange_dominates"] = exchange_dominates
    if "overlap_dominates" in spec.outputs:
        row["overlap_dominates"] = overlap_dominates
    if "negativity" in spec.outputs:
        try:
            row["negativity"] = negativity(assemble_rho(amp))
        except PerturbativeRegimeError:
            row["status"] = "nonperturbative"
    if "amplitudes" in spec.outputs:
        row.update(x0_re=amp.x0.real, x0_im=amp.x0.imag, x2=amp.x2, ea2=amp.ea2, eb2=amp.eb2,
                   eab_re=amp.eab.real, eab_im=amp.eab.imag)
    return row


def _ratio_minus_one(spec: SweepSpec, value: float) -> float:
    return harvesting_ratio(assemble_amplitudes(spec.config(value))) - 1.0


def find_crossings(spec: SweepSpec, rows: list, xtol: float = CROSSING_XTOL) -> list[Crossing]:
    """Refine every sign change of ``ratio - 1`` between adjacent converged rows."""
    out = []
    key = spec.variable.value
    ok = [r for r in rows if r["status"] == "ok" and not math.isnan(r.get("ratio", math.nan))]
    for lo, hi in zip(ok, ok[1:]):
        flo, fhi = lo["ratio"] - 1.0, hi["ratio"] - 1.0
        if flo == 0.0 or flo * fhi >= 0:
            continue
        try:
            x = optimize.brentq(lambda v: _ratio_minus_one(spec, v), lo[key], hi[key], xtol=xtol)
        except HarvestError:
            # refinement failed; fall back to linear interpolation between the rows
            x = lo[key] - flo * (hi[key] - lo[key]) / (fhi - flo)
        out.append(Crossing(float(x), "up" if fhi > flo else "down"))
    return out


def _evaluate_star(args):
    return _evaluate(*args)


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate every grid point; rows come back in grid order whatever the worker count.

    Raises
    ------
    SweepFailed
        If more than half of the points fail to converge.
    """
    jobs = [(spec, float(v)) for v in spec.grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_star, jobs))
    else:
        rows = [_evaluate(*j) for j in jobs]
    bad = sum(r["status"].startswith("nonconverged") for r in rows)
    if bad > len(rows) / 2:
        raise SweepFailed(f"{bad} of {len(rows)} grid points failed to converge")
    crossings = find_crossings(spec, rows) if "ratio" in spec.outputs else []
    return SweepResult(spec, rows, crossings)
