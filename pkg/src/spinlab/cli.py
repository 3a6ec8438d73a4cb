"""Command-line front end.

    spinlab tables [--which N]
    spinlab run --mode MODE (--function F | --all) [options]
    spinlab restore F [options]

Exit status: 0 on success, 1 when a recomputed table disagrees or (with
``--all``) any decision is wrong, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import config as cfgmod
from .ideal import MODES, run as run_ideal
from .oracle import BooleanFunction, FunctionClass, PAPER_FUNCTIONS, classify
from .spectrum import (
    percent_report,
    restore_experiment,
    run_suite,
    write_report_csv,
    write_spectrum_csv,
)
from .tables import check_all

RUN_MODES = (*MODES, "pulse")


class UsageError(Exception):
    pass


def _add_sim_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help=f"system config file (falls back to ${cfgmod.ENV_VAR})")
    p.add_argument("--acq", help="acquisition config file")
    p.add_argument("--out", help="directory for CSV output")
    p.add_argument("--dt", type=float, help="integration time step, seconds")
    p.add_argument("--coupling", choices=("weak", "strong"), help="coupling model")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinlab", description="Three-qubit NMR Deutsch-Jozsa simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="recompute and check the reference tables")
    p.add_argument("--which", type=int, choices=range(1, 6), metavar="N", help="table number 1-5")

    p = sub.add_parser("run", help="run one function or all eight")
    p.add_argument("--mode", choices=RUN_MODES, default="pulse")
    sel = p.add_mutually_exclusive_group(required=True)
    sel.add_argument("--function", help="f1..f8 or a 4-bit truth table such as 0110")
    sel.add_argument("--all", action="store_true", help="run f1..f8")
    p.add_argument("--threshold", type=float, default=0.5, help="decision threshold (fraction)")
    p.add_argument("--seed", type=int, help="reserved; the simulation is deterministic")
    _add_sim_options(p)

    p = sub.add_parser("restore", help="restore experiment for a balanced function")
    p.add_argument("function", help="f1..f8 or a 4-bit truth table")
    _add_sim_options(p)
    return parser


def _parse_function(text: str) -> BooleanFunction:
    try:
        f = BooleanFunction.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if classify(f) is FunctionClass.NEITHER:
        raise UsageError(f"function {f.name} is neither constant nor balanced")
    return f


def _outdir(path: str | None) -> Path | None:
    if path is None:
        return None
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(args) -> cfgmod.SimulationConfig:
    return cfgmod.load(args.config, args.acq, dt=args.dt, coupling=args.coupling)


def cmd_tables(args, stdout) -> int:
    tables, problems = check_all(args.which)
    print("\n\n".join(t.render() for t in tables), file=stdout)
    for m in problems:
        print(f"MISMATCH {m}", file=sys.stderr)
    return 1 if problems else 0


def _evidence(res) -> str:
    return ", ".join(f"{k}={v:.6f}" for k, v in res.evidence.items())


def cmd_run(args, stdout) -> int:
    if not 0 < args.threshold < 1:
        raise UsageError("threshold must lie in (0, 1)")
    functions = list(PAPER_FUNCTIONS.values()) if args.all else [_parse_function(args.function)]
    out = _outdir(args.out)
    if args.mode != "pulse":
        lines = []
        for f in functions:
            res = run_ideal(f, args.mode, args.threshold)
            line = f"{f.name}: {res.decision.value} (truth {res.truth.value}), {_evidence(res)}"
            if res.expansion is not None:
                line += f"\n  output: {res.expansion.render()}"
            lines.append((line, res.correct))
        text = "\n".join(line for line, _ in lines)
        print(text, file=stdout)
        if out:
            (out / f"{args.mode}.txt").write_text(text + "\n")
        return 0 if all(ok for _, ok in lines) or not args.all else 1

    cfg = _load(args)
    targets = functions if any(f.label == "f1" for f in functions) else [PAPER_FUNCTIONS["f1"], *functions]
    runs = run_suite(targets, system=cfg.system, pulse=cfg.pulse, acq=cfg.acquisition, dt=cfg.dt)
    report = percent_report(runs, args.threshold)
    keep = {f.name for f in functions}
    report.rows = [r for r in report.rows if r.function in keep]
    print(report.format(), file=stdout)
    if out:
        for r in runs:
            if r.function.name in keep:
                write_spectrum_csv(out / f"spectrum_{r.function.name}.csv", r.spectrum)
        write_report_csv(out / "report.csv", report)
    return 0 if report.all_correct or not args.all else 1


def cmd_restore(args, stdout) -> int:
    f = _parse_function(args.function)
    if classify(f) is FunctionClass.CONSTANT:
        raise UsageError(f"constant function has no suppressed lines ({f.name})")
    cfg = _load(args)
    res = restore_experiment(f, system=cfg.system, pulse=cfg.pulse, acq=cfg.acquisition, dt=cfg.dt)
    print(f"{'spin':<6}{'before %':>10}{'after %':>10}{'recovery':>10}", file=stdout)
    for k in ("I", "S", "R"):
        before = 100 * res.before[k] / res.reference[k]
        after = 100 * res.after[k] / res.reference[k]
        rec = f"{res.recovery[k]:10.2f}" if k in res.suppressed else f"{'-':>10}"
        print(f"{k:<6}{before:10.1f}{after:10.1f}{rec}", file=stdout)
    out = _outdir(args.out)
    if out:
        for tag, sp in res.spectra.items():
            write_spectrum_csv(out / f"restore_{f.name}_{tag}.csv", sp)
    return 0


COMMANDS = {"tables": cmd_tables, "run": cmd_run, "restore": cmd_restore}


def main(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, stdout)
    except (UsageError, cfgmod.ConfigError, ValueError) as exc:
        print(f"spinlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
