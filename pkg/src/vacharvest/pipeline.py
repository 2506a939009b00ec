"""End-to-end runs: harvest amplitudes, build the state, measure it, distill it."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path as FsPath

from . import serialize
from .amplitudes import AmplitudeSet, ScenarioConfig, assemble_amplitudes, harvesting_ratio
from .density import (TwoQubitState, assemble_rho, concurrence, inseparability_inequalities,
                      lowest_order_negativity, negativity, write_state)
from .distillation import DistillTrace, distill_to_target
from .errors import HarvestError, NotDistillableError
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings
from .rindler import RindlerScenario, compare, rindler_amplitude_set


class StageError(HarvestError):
    """A module error re-raised with the name of the stage that produced it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineResult:
    amplitudes: AmplitudeSet
    state: TwoQubitState
    measures: dict
    trace: DistillTrace | None
    distillable: bool
    summary: str


def amplitudes_to_dict(amp: AmplitudeSet) -> dict:
    return {"x0": amp.x0, "x2": amp.x2, "ea2": amp.ea2, "eb2": amp.eb2, "eab": amp.eab,
            "provenance": amp.provenance}


def measures(amp: AmplitudeSet, rho: TwoQubitState) -> dict:
    exchange_dominates, overlap_dominates = inseparability_inequalities(amp)
    try:
        ratio = harvesting_ratio(amp)
    except HarvestError:
        ratio = float("nan")
    return {
        "ratio": ratio,
        "exchange_dominates": exchange_dominates,
        "overlap_dominates": overlap_dominates,
        "negativity": negativity(rho),
        "negativity_lowest_order": lowest_order_negativity(amp),
        "concurrence": concurrence(rho),
        "raw_trace": rho.raw_trace,
    }


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except HarvestError as exc:
        raise StageError(name, exc) from exc


def run_pipeline(source: ScenarioConfig | AmplitudeSet, target_fidelity: float = 0.9,
                 out_dir=None, fmt: str = "csv", max_rounds: int = 30) -> PipelineResult:
    """Harvest, measure and distill; writes the bundle to ``out_dir`` when given.

    A separable (PPT) state is a normal outcome, reported with
    ``distillable=False``.  Other module errors propagate as :class:`StageError`.
    """
    amp = source if isinstance(source, AmplitudeSet) else _stage("amplitudes", assemble_amplitudes, source)
    rho = _stage("density", assemble_rho, amp)
    meas = measures(amp, rho)
    try:
        trace = distill_to_target(rho, target_fidelity, max_rounds)
        distillable = True
    except NotDistillableError:
        trace, distillable = None, False
    insep = "yes" if meas["negativity"] > 0 else "no"
    if not distillable:
        tail = "not distillable (positive partial transpose)"
    elif trace.converged:
        tail = f"fidelity {trace.fidelities[-1]:.6f} >= {target_fidelity:g} after {trace.recurrence_rounds} rounds"
    else:
        tail = f"target {target_fidelity:g} not reached in {max_rounds} rounds (fidelity {trace.fidelities[-1]:.6f})"
    summary = f"inseparable: {insep}; {tail}"
    result = PipelineResult(amp, rho, meas, trace, distillable, summary)
    if out_dir is not None:
        write_bundle(result, out_dir, fmt)
    return result


def write_bundle(result: PipelineResult, out_dir, fmt: str = "csv") -> None:
    out = FsPath(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    serialize.write_json(amplitudes_to_dict(result.amplitudes), out / "amplitudes.json")
    write_state(result.state, out / "state.json")
    serialize.write_json(result.measures, out / "measures.json")
    if result.trace is not None:
        if fmt == "csv":
            result.trace.write_csv(out / "distill.csv")
        else:
            serialize.write_json(trace_to_dict(result.trace), out / "distill.json")
    serialize.write_json({"summary": result.summary, "distillable": result.distillable,
                          "units": serialize.UNITS_NOTE}, out / "summary.json")


def trace_to_dict(trace: DistillTrace) -> dict:
    return {
        "target": trace.target,
        "target_fidelity": trace.target_fidelity,
        "converged": trace.converged,
        "filter": None if trace.filter is None else {"eta_a": trace.filter.eta_a, "eta_b": trace.filter.eta_b},
        "rounds": [{"round": r.round, "fidelity": r.fidelity, "p_success": r.success_prob,
                    "pairs_remaining": r.pairs_remaining} for r in trace.rounds],
    }


def rindler_amplitudes(gap: float, L: float, coupling: float, duration: float) -> AmplitudeSet:
    return _stage("rindler", rindler_amplitude_set, RindlerScenario(L=L, gap=gap), coupling, duration)


def run_rindler_compare(gap: float, L: float, settings: QuadratureSettings = DEFAULT_SETTINGS,
                        rate_tol: float = 1e-4, ratio_tol: float = 1e-12) -> dict:
    c = compare(gap, L, settings)
    report = {k: getattr(c, k) for k in c.__dataclass_fields__}
    report["rate_tolerance"] = rate_tol
    report["ratio_tolerance"] = ratio_tol
    report["passed"] = c.passed(rate_tol, ratio_tol)
    return report
