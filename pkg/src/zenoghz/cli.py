"""Command-line front end.

    zenoghz ghz --config base.json [--out traces.csv]
    zenoghz sweep --preset fig3a --jobs 4 --out fig3a.csv
    zenoghz validate

CSV goes to ``--out`` (or the file's ``output_path``); without either it is
written to stdout and the run summary moves to stderr. Exit codes: 0 ok,
1 failed validation, 2 malformed config or usage, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .dynamics import fidelity
from .errors import ConfigError, ZenoError
from .experiment import load_experiment, load_preset, preset_names
from .protocol import (
    atomic_register,
    compare_effective,
    concurrence,
    epr_reduce,
    ghz_register,
    run_ghz,
    sweep,
)
from .validation import run_checks

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def fmt(x) -> str:
    """Locale-independent, 12 significant digits."""
    if x is None:
        return ""
    return format(float(x), ".12g")


def write_csv(stream, header, rows) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="ascii") as fh:
            yield fh


def _summary_stream(out_path):
    return sys.stderr if out_path is None else sys.stdout


def _trajectory_rows(traj):
    pops = traj.populations
    norms = traj.norms
    for k, t in enumerate(traj.times):
        yield (t, pops["P_initial"][k], pops["P_e"][k], pops["P_c"][k], pops["P_f"][k],
               pops["P_final"][k], norms[k])


TRAJ_HEADER = ["t", "P_initial", "P_e", "P_c", "P_f", "P_final", "norm"]


def cmd_ghz(exp, args, out_path, block_name="ghz"):
    block = exp.block(block_name)
    report = run_ghz(exp.chain, use_decoherence=block.get("use_decoherence", False),
                     n_samples=exp.n_samples, tau=block.get("tau"), tol=exp.clustering_tol)
    with _output(out_path) as fh:
        write_csv(fh, TRAJ_HEADER, _trajectory_rows(report.trajectory))
    secs = f" tau_s={fmt(report.tau_seconds)}" if report.tau_seconds is not None else ""
    print(f"{block_name}: N={exp.chain.n_atoms} tau={fmt(report.tau_gt)} (1/g){secs} "
          f"fidelity={fmt(report.fidelity)} max_P_c={fmt(report.max_P_c)} "
          f"max_P_f={fmt(report.max_P_f)} max_P_e={fmt(report.max_P_e)} "
          f"final_norm={fmt(report.final_norm)}", file=_summary_stream(out_path))
    return EXIT_OK


def cmd_populations(exp, args, out_path):
    return cmd_ghz(exp, args, out_path, block_name="populations")


def cmd_sweep(exp, args, out_path):
    axes = exp.sweep_axes()
    result = sweep(exp.chain, *axes, observable=exp.sweep_observable,
                   use_decoherence=exp.block("sweep").get("use_decoherence", False),
                   n_samples=exp.n_samples, jobs=args.jobs)
    with _output(out_path) as fh:
        write_csv(fh, result.header, result.rows())
    print(f"sweep: {' x '.join(f'{a.param}[{len(a.values)}]' for a in axes)} "
          f"{result.observable} min={fmt(result.grid.min())} max={fmt(result.grid.max())}",
          file=_summary_stream(out_path))
    return EXIT_OK


def cmd_compare(exp, args, out_path):
    cmp = compare_effective(exp.chain, n_samples=exp.n_samples, tol=exp.clustering_tol)
    with _output(out_path) as fh:
        write_csv(fh, ["t", "P_full", "P_eff"], zip(cmp.times, cmp.p_full, cmp.p_eff))
    print(f"compare-eff: N={exp.chain.n_atoms} tau={fmt(cmp.tau * exp.chain.g)} (1/g) "
          f"max_deviation={fmt(cmp.max_deviation)}", file=_summary_stream(out_path))
    return EXIT_OK


def cmd_epr(exp, args, out_path):
    block = exp.block("epr")
    n = exp.chain.n_atoms
    atom = block.get("measured_atom", (n + 1) // 2)
    if block.get("source", "simulated") == "ideal":
        reg = ghz_register(n)
    else:
        reg = atomic_register(run_ghz(exp.chain, n_samples=2, tol=exp.clustering_tol).final_state, exp.chain)
    res = epr_reduce(reg, atom)
    rows = []
    for outcome in (0, 1):
        branch = res.branches[outcome]
        conc = concurrence(branch) if branch is not None and branch.size == 4 else None
        rows.append((outcome, res.probabilities[outcome], conc))
    with _output(out_path) as fh:
        write_csv(fh, ["outcome", "probability", "concurrence"], rows)
    print(f"epr: measured atom {atom}; register GHZ fidelity={fmt(fidelity(ghz_register(n), reg))}; "
          + "; ".join(f"outcome {o}: p={fmt(p)} C={fmt(c)}" for o, p, c in rows)
          + (f"; omitted outcomes {list(res.flagged)}" if res.flagged else ""),
          file=_summary_stream(out_path))
    return EXIT_OK


def cmd_validate(args):
    checks = run_checks(n_random=args.random)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


COMMANDS = {
    "ghz": cmd_ghz,
    "sweep": cmd_sweep,
    "populations": cmd_populations,
    "compare-eff": cmd_compare,
    "epr": cmd_epr,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zenoghz", description="Zeno-dynamics GHZ generation in fiber-linked cavities")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="experiment JSON file")
        src.add_argument("--preset", help=f"shipped preset ({', '.join(preset_names())})")
        p.add_argument("--out", help="CSV output path (default: config output_path, else stdout)")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
        p.add_argument("--samples", type=int, help="time samples per run (overrides n_samples)")
    v = sub.add_parser("validate")
    v.add_argument("--random", type=int, default=200, help="randomized configs for the invariant checks")
    sub.add_parser("presets")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "presets":
        for name in preset_names():
            print(f"{name}: {load_preset(name).description}")
        return EXIT_OK
    try:
        if args.command == "validate":
            return cmd_validate(args)
        exp = load_experiment(args.config) if args.config else load_preset(args.preset)
        if args.samples is not None:
            if args.samples < 2:
                raise ConfigError("--samples must be at least 2")
            exp.n_samples = args.samples
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        out_path = args.out or exp.output_path
        return COMMANDS[args.command](exp, args, out_path)
    except ConfigError as exc:
        print(f"zenoghz: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ZenoError, np.linalg.LinAlgError, FloatingPointError, ValueError) as exc:
        print(f"zenoghz: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
