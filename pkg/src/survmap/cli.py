"""Command line: ``survmap <command> [options]``.

Exit status is 0 when the pipeline ran, 2 when it ran but the outcome is
not survivable (or a solution violates its model), and 1 on error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from survmap.errors import SurvmapError
from survmap.failure_model import validate_srlg_set
from survmap.harness import ExperimentSpec, generate_srlgs, load, metric_columns, run_experiment, run_sweep, sweep_specs
from survmap.heuristic import DEFAULT_BIG_M, HeuristicConfig
from survmap.instance_io import format_instance, read_instance, write_instance
from survmap.milp import FAMILIES, build_model, check_solution, ingest_solution, read_solution
from survmap.topologies import physical_by_name
from survmap.verifier import format_table, phys_utilization, verify_k, verify_srlg

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNPROTECTED = 2


def _add_instance_args(p: argparse.ArgumentParser, need_logical: bool = True) -> None:
    p.add_argument("--phys", required=True, help="NSF, NSF1, FIG2 or an instance file")
    if need_logical:
        p.add_argument("--logical", help="CLN1..CLN4, FIG2 or an instance file (default: from --phys)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--srlg-file", help="instance file with srlg records")
    src.add_argument("--count", type=int, help="generate this many 3-SRLGs")
    src.add_argument("--k", type=int, help="use every k-combination of physical links instead of SRLGs")
    p.add_argument("--seed", type=int, default=0, help="SRLG generation seed")
    p.add_argument("--srlg-base", help="physical network the SRLGs are drawn on")


def _add_heuristic_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--big-m", type=float, default=DEFAULT_BIG_M)
    p.add_argument("--max-augment", type=int, default=None)
    p.add_argument("--order", default="given", help="given | shuffled:<seed>")


def _spec(args, pipeline: str) -> ExperimentSpec:
    mode = "k" if getattr(args, "k", None) is not None else "srlg"
    config = HeuristicConfig(
        getattr(args, "big_m", DEFAULT_BIG_M), getattr(args, "max_augment", None), getattr(args, "order", "given")
    )
    return ExperimentSpec(
        physical=args.phys,
        logical=getattr(args, "logical", None),
        mode=mode,
        srlg_file=args.srlg_file,
        srlg_count=args.count,
        srlg_seed=args.seed,
        srlg_base=args.srlg_base,
        k=args.k,
        pipeline=pipeline,
        out_dir=getattr(args, "out", None),
        family=getattr(args, "family", None),
        root=getattr(args, "root", None),
        config=config,
    )


def _print_metrics(result) -> int:
    print(format_table([result.metrics], metric_columns(result.spec.mode)), end="")
    return EXIT_OK if result.survivable else EXIT_UNPROTECTED


def cmd_gen_srlg(args) -> int:
    phys = _load_phys_only(args.phys)
    srlgs = generate_srlgs(phys, args.seed, args.count)
    print(validate_srlg_set(phys, srlgs))
    text = format_instance(phys, srlgs=srlgs, header=f"{args.count} SRLGs on {args.phys}, seed {args.seed}")
    if args.out:
        write_instance(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _load_phys_only(name: str):
    try:
        return physical_by_name(name)
    except SurvmapError:
        return read_instance(name).phys


def cmd_heuristic(args) -> int:
    return _print_metrics(run_experiment(_spec(args, "heuristic")))


def cmd_verify(args) -> int:
    result = run_experiment(_spec(args, "verify"))
    code = _print_metrics(result)
    if result.report.failed_scenarios:
        print("failed:", " ".join(result.report.failed_scenarios))
    return code


def cmd_emit_milp(args) -> int:
    spec = _spec(args, "milp-emit")
    result = run_experiment(spec)
    if args.out:
        print(f"wrote {Path(args.out) / 'model.lp'}")
    else:
        sys.stdout.write(result.lp_text)
    return EXIT_OK


def cmd_check_solution(args) -> int:
    spec = _spec(args, "milp-emit")
    phys, logical, srlgs, _ = load(spec)
    family = args.family or f"tree-{spec.mode}"
    model = build_model(family, phys, logical, srlgs=srlgs, k=spec.k, root=args.root)
    values = read_solution(args.solution)
    violations = check_solution(model, values) if set(model.variables) <= set(values) else None
    mapping = ingest_solution(model, values, args.prune_cycles)
    report = verify_srlg(logical, mapping, srlgs) if spec.mode == "srlg" else verify_k(logical, mapping, spec.k)
    for lid, route in mapping.routes.items():
        print(f"route {lid} {' '.join(map(str, route))}")
    print(f"PhyS {phys_utilization(mapping, logical)}")
    print(f"{report.metric_name} {report.protected_count}/{report.total_count}")
    if violations is None:
        print("model check skipped: solution does not cover flow / hit variables")
    else:
        print(violations)
    bad = (violations is not None and not violations.ok) or not report.survivable
    return EXIT_UNPROTECTED if bad else EXIT_OK


def cmd_report(args) -> int:
    config = HeuristicConfig(args.big_m, args.max_augment, args.order)
    specs = sweep_specs(seed=args.seed, k=args.k, config=config)
    results, table, csv_text = run_sweep(specs)
    print(table, end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_instance(out / "report.txt", table)
        write_instance(out / "report.csv", csv_text)
    return EXIT_OK if all(r.survivable for r in results) else EXIT_UNPROTECTED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="survmap", description="Survivable two-layer network mapping tools.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-srlg", help="generate a validated 3-SRLG set")
    p.add_argument("--phys", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_srlg)

    p = sub.add_parser("heuristic", help="build protecting trees and report metrics")
    _add_instance_args(p)
    _add_heuristic_args(p)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_heuristic)

    p = sub.add_parser("verify", help="check an instance's routes against its failure scenarios")
    _add_instance_args(p)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("emit-milp", help="write the LP model")
    _add_instance_args(p)
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--root", type=int)
    p.add_argument("--out", help="output directory (default: LP text on stdout)")
    p.set_defaults(func=cmd_emit_milp)

    p = sub.add_parser("check-solution", help="check a solver solution and rebuild its routes")
    _add_instance_args(p)
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--root", type=int)
    p.add_argument("--solution", required=True, help="file of 'name value' lines")
    p.add_argument("--prune-cycles", action="store_true")
    p.set_defaults(func=cmd_check_solution)

    p = sub.add_parser("report", help="heuristic sweep over NSF/NSF1 and CLN1..CLN4")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int)
    _add_heuristic_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except SurvmapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
