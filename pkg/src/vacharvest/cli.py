"""Command-line interface.

Exit codes: 0 success, 2 physics regime (non-perturbative couplings or a
state that cannot be distilled), 3 numerical non-convergence, 4 bad input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path as FsPath

from . import serialize
from .amplitudes import Path, ScenarioConfig
from .density import read_state
from .distillation import distill_to_target
from .errors import ConvergenceError, CrossValidationError, HarvestError, NotDistillableError, PerturbativeRegimeError
from .pipeline import StageError, rindler_amplitudes, run_pipeline, run_rindler_compare, trace_to_dict
from .quadrature import QuadratureSettings
from .sweep import OUTPUT_GROUPS, SweepSpec, SweepVariable, run_sweep
from .windows import WindowShape

EXIT_OK, EXIT_REGIME, EXIT_NUMERICAL, EXIT_INPUT = 0, 2, 3, 4

DEFAULTS = {
    "gap": 9.5,
    "separation": 1.0,
    "duration": 1.0,
    "coupling": 0.01,
    "window": "cos2",
    "path": "frequency",
    "geometry": "static",
    "target_fidelity": 0.9,
    "max_rounds": 30,
    "workers": 1,
    "format": "csv",
    "allow_causal_contact": False,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=FsPath, help="JSON file with parameters; flags override it")
    p.add_argument("--out", type=FsPath, help="output directory")
    p.add_argument("--workers", type=int, help="parallel grid evaluations")
    p.add_argument("--tolerance", type=float, help="relative tolerance (quadrature, or rate check for 'rindler')")
    p.add_argument("--format", choices=("csv", "json"), help="table format")


def _physics(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gap", type=float, help="energy gap Omega")
    p.add_argument("--separation", "-L", type=float, help="atom separation L")
    p.add_argument("--duration", type=float, help="window duration T")
    p.add_argument("--coupling", type=float, help="coupling lambda")
    p.add_argument("--window", choices=[s.value for s in WindowShape if s is not WindowShape.TABULATED])
    p.add_argument("--path", choices=[p_.value for p_ in Path])
    p.add_argument("--allow-causal-contact", action="store_true", default=None,
                   help="permit windows that are not spacelike separated")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vacharvest", description="Entanglement harvesting from the field vacuum.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="scan the gap or the separation")
    _common(sw)
    _physics(sw)
    sw.add_argument("--variable", choices=[v.value for v in SweepVariable])
    sw.add_argument("--start", type=float)
    sw.add_argument("--stop", type=float)
    sw.add_argument("--steps", type=int)
    sw.add_argument("--outputs", help="comma-separated subset of " + ",".join(OUTPUT_GROUPS))

    rd = sub.add_parser("rindler", help="residue series against quadrature for accelerated atoms")
    _common(rd)
    rd.add_argument("--gap", type=float)
    rd.add_argument("--separation", "-L", type=float)

    pl = sub.add_parser("pipeline", help="harvest, measure and distill one configuration")
    _common(pl)
    _physics(pl)
    pl.add_argument("--geometry", choices=("static", "rindler"))
    pl.add_argument("--target-fidelity", type=float)
    pl.add_argument("--max-rounds", type=int)

    ds = sub.add_parser("distill", help="distill a state read from a file")
    _common(ds)
    ds.add_argument("state", type=FsPath, help="4x4 state, JSON or 16 lines of 're im'")
    ds.add_argument("--target-fidelity", type=float)
    ds.add_argument("--max-rounds", type=int)
    return parser


def _settings(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config is not None:
        cfg.update(serialize.load_config(args.config))
    for k, v in vars(args).items():
        if v is not None and k not in ("config", "command"):
            cfg[k] = v
    return cfg


def _quadrature(cfg) -> QuadratureSettings:
    q = dict(cfg.get("quadrature", {}))
    if cfg.get("tolerance") is not None:
        q["rel_tol"] = cfg["tolerance"]
    if "regulator_ladder" in q:
        q["regulator_ladder"] = tuple(q["regulator_ladder"])
    return QuadratureSettings(**q)


def _scenario(cfg) -> ScenarioConfig:
    return ScenarioConfig.symmetric(
        float(cfg["gap"]), float(cfg["separation"]), float(cfg["duration"]), float(cfg["coupling"]),
        WindowShape(cfg["window"]), path=Path(cfg["path"]), quadrature=_quadrature(cfg),
        allow_causal_contact=bool(cfg["allow_causal_contact"]))


def _out_dir(cfg) -> FsPath:
    out = FsPath(cfg.get("out") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_sweep(cfg, argv) -> int:
    sweep = cfg.get("sweep", {})
    for key in ("variable", "start", "stop", "steps", "outputs"):
        if cfg.get(key) is not None:
            sweep[key] = cfg[key]
    missing = [k for k in ("variable", "start", "stop", "steps") if k not in sweep]
    if missing:
        raise ValueError(f"sweep needs {', '.join(missing)}")
    outputs = sweep.get("outputs", ",".join(SweepSpec.__dataclass_fields__["outputs"].default))
    if isinstance(outputs, str):
        outputs = tuple(o.strip() for o in outputs.split(",") if o.strip())
    spec = SweepSpec(
        SweepVariable(sweep["variable"]), float(sweep["start"]), float(sweep["stop"]), int(sweep["steps"]),
        gap=float(cfg["gap"]), separation=float(cfg["separation"]), duration=float(cfg["duration"]),
        coupling=float(cfg["coupling"]), shape=WindowShape(cfg["window"]), path=Path(cfg["path"]),
        quadrature=_quadrature(cfg), allow_causal_contact=bool(cfg["allow_causal_contact"]),
        outputs=tuple(outputs))
    result = run_sweep(spec, workers=int(cfg["workers"]))
    out = _out_dir(cfg)
    crossings = [{"value": c.value, "direction": c.direction} for c in result.crossings]
    if cfg["format"] == "csv":
        serialize.write_csv(result.rows, spec.columns, out / "sweep.csv")
        serialize.write_json({"variable": spec.variable.value, "crossings": crossings}, out / "crossings.json")
    else:
        serialize.write_json({"variable": spec.variable.value, "columns": list(spec.columns),
                              "rows": result.rows, "crossings": crossings}, out / "sweep.json")
    serialize.write_metadata(out, "sweep", argv)
    print(f"{len(result.rows)} rows, {result.failures} flagged")
    for c in result.crossings:
        print(f"ratio crosses 1 ({c.direction}) at {spec.variable.value} = {c.value:.4f}")
    return EXIT_OK


def cmd_rindler(cfg, argv) -> int:
    rate_tol = cfg.get("tolerance") or 1e-4
    q = dict(cfg.get("quadrature", {}))
    report = run_rindler_compare(float(cfg["gap"]), float(cfg["separation"]),
                                 QuadratureSettings(**q) if q else QuadratureSettings(), rate_tol=rate_tol)
    out = _out_dir(cfg)
    serialize.write_json(report, out / "rindler.json")
    serialize.write_metadata(out, "rindler", argv)
    print(f"Omega*L = {report['gap'] * report['L']:g}: ratio {report['ratio_series']:.15g} "
          f"(closed form {report['ratio_closed_form']:.15g}); "
          f"rate errors {report['emission_rel_err']:.2e}, {report['exchange_rel_err']:.2e}; "
          f"{'PASS' if report['passed'] else 'FAIL'}")
    return EXIT_OK if report["passed"] else EXIT_NUMERICAL


def cmd_pipeline(cfg, argv) -> int:
    if cfg["geometry"] == "rindler":
        source = rindler_amplitudes(float(cfg["gap"]), float(cfg["separation"]), float(cfg["coupling"]),
                                    float(cfg["duration"]))
    else:
        source = _scenario(cfg)
    out = _out_dir(cfg)
    result = run_pipeline(source, float(cfg["target_fidelity"]), out, cfg["format"], int(cfg["max_rounds"]))
    serialize.write_metadata(out, "pipeline", argv)
    print(result.summary)
    return EXIT_OK if result.distillable else EXIT_REGIME


def cmd_distill(cfg, argv) -> int:
    rho = read_state(cfg["state"])
    trace = distill_to_target(rho, float(cfg["target_fidelity"]), int(cfg["max_rounds"]))
    out = _out_dir(cfg)
    if cfg["format"] == "csv":
        trace.write_csv(out / "distill.csv")
    else:
        serialize.write_json(trace_to_dict(trace), out / "distill.json")
    serialize.write_metadata(out, "distill", argv)
    status = "reached" if trace.converged else "not reached"
    print(f"target {trace.target_fidelity:g} {status}: fidelity {trace.fidelities[-1]:.6f} "
          f"after {trace.recurrence_rounds} rounds")
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "rindler": cmd_rindler, "pipeline": cmd_pipeline, "distill": cmd_distill}


def _exit_code(exc: BaseException) -> int:
    cause = exc.cause if isinstance(exc, StageError) else exc
    if isinstance(cause, (PerturbativeRegimeError, NotDistillableError)):
        return EXIT_REGIME
    if isinstance(cause, (ConvergenceError, CrossValidationError)):
        return EXIT_NUMERICAL
    return EXIT_INPUT


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        cfg = _settings(args)
        return COMMANDS[args.command](cfg, argv)
    except (HarvestError, ValueError, KeyError, OSError) as exc:
        print(f"vacharvest {args.command}: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
