"""Command-line entry point.

    cddswap run --preset fig2a --nx 8 --out ./out
    cddswap run --config scenario.json --calibrate 0.05,0.3 --out ./out
    cddswap presets

Each run writes ``trajectory.csv``, ``summary.json`` and ``config-echo.json``
into its output directory. Exit status is 2 for configuration errors, 3 when
the solver aborts and 0 otherwise; positivity problems only set the
``positivity_warning`` field of the summary.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
import json
import logging
from pathlib import Path
import sys

import numpy as np

from .config import ConfigError, ScenarioConfig, from_dict
from .redfield import SolverAbort, Trajectory, evolve
from .scenarios import PRESET_NAMES, CalibrationError, build_preset, calibrate

log = logging.getLogger("cddswap")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3

_BASIS = ("uu", "ud", "du", "dd")
CSV_COLUMNS = ["t", "concurrence", "dfs_occupancy", "fidelity", "purity", "positivity_defect"] + [
    f"rho_{a}_{b}_{part}" for a in _BASIS for b in _BASIS for part in ("re", "im")
]


def parse_band(text):
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}") from None
    if not 0 < lo < hi < 1:
        raise argparse.ArgumentTypeError(f"band must satisfy 0 < LO < HI < 1, got {text!r}")
    return lo, hi


def build_parser():
    parser = argparse.ArgumentParser(prog="cddswap", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evolve one or more scenarios and write their outputs")
    run.add_argument("--preset", action="append", default=[], metavar="NAME",
                     help="figure preset; repeat to run several")
    run.add_argument("--config", type=Path, metavar="FILE", help="JSON scenario file")
    run.add_argument("--nx", type=int)
    run.add_argument("--nz", type=int)
    run.add_argument("--eta", type=float, help="dephasing coupling (amplitude damping is scaled from it)")
    run.add_argument("--omega-c", type=float, dest="omega_c")
    run.add_argument("--beta", type=float)
    run.add_argument("--grid", type=int)
    run.add_argument("--out", type=Path, default=Path("out"))
    run.add_argument("--jobs", type=int, default=1, help="presets to run concurrently")
    run.add_argument("--calibrate", type=parse_band, metavar="LO,HI",
                     help="calibrate eta to this final-concurrence band before running")

    sub.add_parser("presets", help="list preset names")
    return parser


def _overrides(args):
    keys = {"nx": args.nx, "nz": args.nz, "grid": args.grid}
    return {k: v for k, v in keys.items() if v is not None}


def resolve_config(args, preset=None) -> ScenarioConfig:
    """Scenario from a preset and/or a config file, with command-line overrides applied last."""
    data = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except OSError as exc:
            raise ConfigError("config", f"cannot read {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"{args.config} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a JSON object")
    name = preset or data.pop("preset", None)
    base = build_preset(name) if name else ScenarioConfig()
    config = from_dict({**data, **_overrides(args)}, base)
    bath = {k: v for k, v in (("omega_c", args.omega_c), ("beta", args.beta)) if v is not None}
    if bath:
        try:
            config = config.with_bath(**bath)
        except ValueError as exc:
            raise ConfigError(next(iter(bath)).replace("_", "-"), str(exc)) from None
    if args.eta is not None:
        try:
            config = config.with_eta(args.eta)
        except ValueError as exc:
            raise ConfigError("eta", str(exc)) from None
    return config


def calibrated(config: ScenarioConfig, band):
    """Calibrate eta on the unprotected fig2a run with this config's bath and grid."""
    if not config.channels:
        raise ConfigError("channels", "calibration needs a noise channel to scale")
    bath = config.channels[0].bath
    base = build_preset("fig2a", nx=0, eta=0.0, omega_c=bath.omega_c, beta=bath.beta, grid=config.grid_size)
    eta = calibrate(band, base)
    return config.with_eta(eta), eta


def write_csv(path, traj: Trajectory):
    rho = traj.rho_schrodinger.reshape(len(traj.times), 16)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for k, rec in enumerate(traj.records()):
            row = [rec.t, rec.concurrence, rec.dfs_occupancy, rec.fidelity_to_target, rec.purity,
                   rec.positivity_defect]
            for z in rho[k]:
                row += [z.real, z.imag]
            writer.writerow([repr(float(v)) for v in row])


def summarize(traj: Trajectory, config: ScenarioConfig, eta=None, band=None) -> dict:
    k = int(np.argmax(traj.concurrence))
    return {
        "scenario": config.name,
        "grid": config.grid_size,
        "final_concurrence": float(traj.concurrence[-1]),
        "max_concurrence": float(traj.concurrence[k]),
        "time_of_max": float(traj.times[k]),
        "final_fidelity": float(traj.fidelity[-1]),
        "calibration": None if band is None else {"band": list(band), "eta": eta},
        "channels": {c.kind: c.bath.eta for c in config.channels},
        "diagnostics": traj.diagnostics,
        "positivity_warning": traj.positivity_warning,
    }


def run_one(config: ScenarioConfig, out: Path, band=None) -> dict:
    eta = None
    if band is not None:
        config, eta = calibrated(config, band)
    traj = evolve(config)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "trajectory.csv", traj)
    summary = summarize(traj, config, eta, band)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    (out / "config-echo.json").write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n")
    return summary


def _run_command(args):
    if not args.preset and args.config is None:
        raise ConfigError("preset", "give --preset NAME or --config FILE")
    if len(args.preset) > 1 and args.config is not None:
        raise ConfigError("config", "--config combines with at most one --preset")
    if args.jobs < 1:
        raise ConfigError("jobs", f"must be >= 1, got {args.jobs}")
    names = args.preset or [None]
    configs = [resolve_config(args, name) for name in names]
    outs = [args.out] if len(configs) == 1 else [args.out / c.name for c in configs]
    if args.jobs == 1 or len(configs) == 1:
        summaries = [run_one(c, o, args.calibrate) for c, o in zip(configs, outs)]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(run_one, c, o, args.calibrate) for c, o in zip(configs, outs)]
            summaries = [f.result() for f in futures]
    for s, o in zip(summaries, outs):
        flag = "  [positivity warning]" if s["positivity_warning"] else ""
        print(f"{s['scenario']}: final concurrence {s['final_concurrence']:.6f} -> {o}{flag}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "presets":
        print("\n".join(PRESET_NAMES))
        return EXIT_OK
    try:
        _run_command(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverAbort, CalibrationError) as exc:
        print(f"solver aborted: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
