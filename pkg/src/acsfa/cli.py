"""Command line interface: solve, bench, stats, exact."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .acs import AcsParams, run_acs
from .bench import export, format_trace, load_config, run_experiment
from .exact import HELD_KARP_MAX, held_karp
from .hybrid import HybridConfig, run_acsfa
from .stats import error_matrix, rcbd_anova, read_response_matrix, tukey_hsd
from .tsplib import TsplibParseError, parse_instance


def _load_instance(path: str):
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"instance file not found: {p}")
    return parse_instance(p.read_text())


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    rng = np.random.default_rng(args.seed)
    if args.algo == "acs":
        params = AcsParams(m=args.ants)
        record = run_acs(inst, params, args.iterations, rng)
        trace_text = "iteration,best_length\n" + "".join(
            f"{i},{length}\n" for i, length in enumerate(record.best_lengths)
        )
    else:
        config = HybridConfig(iterations=args.iterations, m=args.ants)
        record, trace = run_acsfa(inst, config, rng)
        trace_text = format_trace(trace)
    print(
        f"algorithm={args.algo} instance={inst.name} seed={args.seed} "
        f"iterations={args.iterations} ants={args.ants} "
        f"best={record.best_tour.length} time_s={record.wall_time_s:.2f}"
    )
    print("tour: " + " ".join(str(c) for c in record.best_tour.order))
    if record.best_params is not None:
        v = record.best_params
        print(
            f"params: beta={v.beta:.4f} rho={v.rho:.4f} q0={v.q0:.4f} "
            f"gamma={v.gamma:.4f} delta={v.delta:.4f}"
        )
    if args.trace:
        Path(args.trace).write_text(trace_text)
        print(f"trace written to {args.trace}")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    result = run_experiment(config)
    written = export(result)
    for failure in result.failures:
        print(f"warning: skipped {failure.path}: {failure.error}", file=sys.stderr)
    for s in result.summaries:
        print(
            f"{s.algorithm},{s.instance},best={s.best},average={s.average:.2f},"
            f"worst={s.worst},t_avg_s={s.t_avg_s:.2f}"
        )
    print(f"wrote {len(written)} files under {config.output_dir}")
    return 0 if result.summaries else 1


def _read_optima(path: str) -> dict[str, float]:
    optima: dict[str, float] = {}
    for line in Path(path).read_text().splitlines():
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = stripped.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"optima file: expected 'name value' lines, got {stripped!r}")
        optima[parts[0]] = float(parts[1])
    return optima


def _cmd_stats(args: argparse.Namespace) -> int:
    matrix = read_response_matrix(Path(args.matrix).read_text())
    if args.response == "error":
        if not args.optima:
            raise ValueError("--response error requires --optima FILE")
        matrix = error_matrix(matrix, _read_optima(args.optima))
    table = rcbd_anova(matrix)
    print(f"response: {args.response}")
    print("source,df,adj_ss,adj_ms,f,p")
    print(
        f"treatment,{table.treatment.df},{table.treatment.ss:.1f},{table.treatment.ms:.1f},"
        f"{table.f_treatment:.2f},{table.p_treatment:.3f}"
    )
    print(
        f"block,{table.block.df},{table.block.ss:.1f},{table.block.ms:.1f},"
        f"{table.f_block:.2f},{table.p_block:.3f}"
    )
    print(f"error,{table.error.df},{table.error.ss:.1f},{table.error.ms:.1f},,")
    print(f"total,{table.total.df},{table.total.ss:.1f},,,")
    grouping = tukey_hsd(matrix, args.confidence)
    print(
        f"tukey at {100 * args.confidence:g}% confidence: "
        f"q={grouping.q_critical:.4f} hsd={grouping.hsd:.4f}"
    )
    print("treatment,mean,group")
    for label, mean, letters in zip(grouping.treatments, grouping.means, grouping.letters):
        print(f"{label},{mean:.2f},{letters}")
    for pair in grouping.pairs:
        flag = "significant" if pair.significant else "not significant"
        print(f"{pair.first} vs {pair.second}: diff={pair.difference:.2f} ({flag})")
    return 0


def _cmd_exact(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    length = held_karp(inst, max_cities=args.max_cities)
    print(f"instance={inst.name} optimal={length}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acsfa",
        description="Symmetric-TSP solvers (fixed-parameter and self-tuning ant colony), "
        "exact oracle, benchmark runner and statistical comparison.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one seeded solve on a TSPLIB instance")
    p_solve.add_argument("instance", help="path to a TSPLIB file")
    p_solve.add_argument("--algo", choices=("acs", "acsfa"), default="acsfa")
    p_solve.add_argument("--iterations", type=int, default=1000)
    p_solve.add_argument("--ants", type=int, default=10)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--trace", help="write the per-iteration trace to this file")
    p_solve.set_defaults(func=_cmd_solve)

    p_bench = sub.add_parser("bench", help="run a configured experiment and export results")
    p_bench.add_argument("config", help="path to a key-value config file")
    p_bench.set_defaults(func=_cmd_bench)

    p_stats = sub.add_parser("stats", help="blocked ANOVA plus Tukey grouping on a response matrix")
    p_stats.add_argument("matrix", help="delimited response matrix file")
    p_stats.add_argument("--confidence", type=float, default=0.90)
    p_stats.add_argument("--response", choices=("best", "error"), default="best")
    p_stats.add_argument("--optima", help="file of 'instance optimum' lines (for --response error)")
    p_stats.set_defaults(func=_cmd_stats)

    p_exact = sub.add_parser("exact", help="exact optimal length for a small instance")
    p_exact.add_argument("instance", help="path to a TSPLIB file")
    p_exact.add_argument("--max-cities", type=int, default=HELD_KARP_MAX)
    p_exact.set_defaults(func=_cmd_exact)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TsplibParseError, ValueError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
