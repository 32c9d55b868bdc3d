# FILE: pfgr/cli.py
# ==============================================================================
# Command-line surface. Each subcommand has a manual entry, an argparse
# subparser and a handler returning the exit status:
#   0 success, 1 failed validation, 2 refusal or bad input.
# ==============================================================================
import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from . import config
from .bench import SUITES, run_ov_scaling, scaling_slope, write_csv
from .closure import derive_chain, load_claim, load_ledger
from .exceptions import PFGRError
from .formats import (
    parse_dimacs,
    parse_graph,
    parse_ov,
    parse_td,
    read_text,
    write_dimacs,
    write_graph,
    write_ov,
    write_td,
)
from .generators import gen_cnf, gen_ov, gen_partial_ktree
from .models import DiameterAlgo, Engine
from .oracles import diameter_brute, ov_brute
from .reductions import OV2DIAM, SAT2OV, mapping_report, ov_graph_decomposition, ov_to_diameter, sat_to_ov
from .results import ResultRecord, emit, format_claim_chain, format_mapping, format_ov_answer, format_validation
from .twdiam import SolveStats, diameter_td, solve_ov_via_diameter
from .utils.validators import validate_td

# --- COMMAND MANUAL ---
COMMANDS_HELP_MANUAL = {
    "gen-ov": {
        "description": "Generate a random OV instance with |A| = |B| = n.",
        "example": "gen-ov 200 4 --plant --seed 1 -o planted.ov",
    },
    "gen-cnf": {
        "description": "Generate a random k-CNF formula in DIMACS format.",
        "example": "gen-cnf 12 40 --seed 3 -o formula.cnf",
    },
    "gen-ktree": {
        "description": "Generate a partial k-tree with its tree decomposition (PREFIX.gr, PREFIX.td).",
        "example": "gen-ktree 120 3 --keep-prob 0.6 --seed 2 -o ktree",
    },
    "solve-ov": {
        "description": "Decide an OV instance by exhaustive search or through the diameter reduction.",
        "example": "solve-ov --engine diam --max-d 8 planted.ov",
    },
    "reduce": {
        "description": "Run an executable reduction: sat2ov writes PREFIX.ov, ov2diam writes PREFIX.gr and PREFIX.td.",
        "example": "reduce ov2diam planted.ov -o planted",
    },
    "map": {
        "description": "Evaluate a reduction's parameter mapping at concrete source parameters.",
        "example": "map ov2diam n=100 d=8",
    },
    "diam": {
        "description": "Exact diameter by all-pairs search or from a tree decomposition.",
        "example": "diam --algo td planted.gr planted.td",
    },
    "validate-td": {
        "description": "Check a tree decomposition against a graph; exits 1 when a property fails.",
        "example": "validate-td planted.gr planted.td",
    },
    "bench": {
        "description": "Time both OV engines over growing n at fixed d and write CSV.",
        "example": "bench --suite ov-scaling --d 3 --n-list 1024,2048,4096 --reps 3",
    },
    "calc": {
        "description": "Compose an improved-algorithm claim with the reduction ledger and print the derived bounds.",
        "example": "calc --ledger pfgr/data/table1_ledger.psv --claim pfgr/data/diameter_claim.env",
    },
}


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
        logging.info(f"CLI: wrote {out}")
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from None


# --- Handlers ---


def gen_ov_command(args) -> int:
    _write(write_ov(gen_ov(args.n, args.d, plant=args.plant, seed=args.seed)), args.out)
    return 0


def gen_cnf_command(args) -> int:
    _write(write_dimacs(gen_cnf(args.n, args.m, k=args.k, seed=args.seed)), args.out)
    return 0


def gen_ktree_command(args) -> int:
    graph, td = gen_partial_ktree(args.n, args.k, keep_prob=args.keep_prob, seed=args.seed)
    Path(f"{args.out}.gr").write_text(write_graph(graph))
    Path(f"{args.out}.td").write_text(write_td(td, graph.vertex_count))
    print(f"wrote {args.out}.gr and {args.out}.td (width {td.width})")
    return 0


def solve_ov_command(args) -> int:
    instance = parse_ov(read_text(args.file))
    record = ResultRecord(command="solve-ov", engine=args.engine, n=max(instance.n_a, instance.n_b), d=instance.d)
    if args.engine == Engine.BRUTE.value:
        started = time.perf_counter()
        has_pair = ov_brute(instance) is not None
        solve_ms = (time.perf_counter() - started) * 1000.0
        timings = {"solve": solve_ms, "total": solve_ms}
        record.reduce_ms, record.solve_ms, record.total_ms = 0.0, solve_ms, solve_ms
    else:
        report = solve_ov_via_diameter(instance, max_d=args.max_d)
        has_pair = report.has_orthogonal_pair
        timings = {"reduce": report.reduction_ms, "solve": report.solve_ms, "total": report.total_ms}
        record.reduce_ms, record.solve_ms, record.total_ms = report.reduction_ms, report.solve_ms, report.total_ms
        record.width = instance.d + 1
        record.fallbacks = report.stats.to_dict()
    record.answer = "true" if has_pair else "false"
    print(format_ov_answer(has_pair, args.engine, timings))
    emit(record, args.records)
    return 0


def reduce_command(args) -> int:
    prefix = args.out or str(Path(args.file).with_suffix(""))
    if args.reduction == SAT2OV:
        instance, mapping = sat_to_ov(parse_dimacs(read_text(args.file)))
        Path(f"{prefix}.ov").write_text(write_ov(instance))
        print(f"wrote {prefix}.ov")
    else:
        instance = parse_ov(read_text(args.file))
        graph, mapping = ov_to_diameter(instance)
        td = ov_graph_decomposition(instance)
        Path(f"{prefix}.gr").write_text(write_graph(graph))
        Path(f"{prefix}.td").write_text(write_td(td, graph.vertex_count))
        print(f"wrote {prefix}.gr and {prefix}.td")
    print(format_mapping(mapping))
    return 0


def map_command(args) -> int:
    params: Dict[str, int] = {}
    for item in args.params:
        name, sep, value = item.partition("=")
        if not sep or not value.lstrip("-").isdigit():
            raise ValueError(f"parameter '{item}' must be name=integer")
        params[name] = int(value)
    print(format_mapping(mapping_report(args.reduction, params)))
    return 0


def diam_command(args) -> int:
    graph = parse_graph(read_text(args.graph))
    record = ResultRecord(command="diam", engine=None, n=graph.vertex_count)
    if args.algo == DiameterAlgo.TD.value:
        if not args.td:
            raise ValueError("--algo td needs a tree decomposition file")
        td = parse_td(read_text(args.td))
        stats = SolveStats()
        started = time.perf_counter()
        diameter = diameter_td(graph, td, stats=stats)
        record.width, record.fallbacks = td.width, stats.to_dict()
    else:
        started = time.perf_counter()
        diameter = diameter_brute(graph)
    record.reduce_ms = 0.0
    record.solve_ms = record.total_ms = (time.perf_counter() - started) * 1000.0
    record.answer = str(diameter)
    print(f"diameter: {diameter}")
    emit(record, args.records)
    return 0


def validate_td_command(args) -> int:
    report = validate_td(parse_graph(read_text(args.graph)), parse_td(read_text(args.td)))
    print(format_validation(report))
    return 0 if report.ok else 1


def bench_command(args) -> int:
    engines = [Engine(e) for e in args.engines.split(",")]
    rows = run_ov_scaling(args.d, args.n_list, reps=args.reps, seed=args.seed, engines=engines, max_d=args.max_d)
    if args.out:
        with open(args.out, "w", newline="") as handle:
            write_csv(rows, handle)
    else:
        write_csv(rows, sys.stdout)
    for row in rows:
        emit(
            ResultRecord(
                command="bench",
                engine=row["engine"],
                answer=str(row["answer"]).lower(),
                n=row["n"],
                d=row["d"],
                seed=row["seed"],
                reduce_ms=row["reduce_ms"],
                solve_ms=row["solve_ms"],
                total_ms=row["total_ms"],
            ),
            args.records,
        )
    if len(set(args.n_list)) > 1:
        for engine in engines:
            logging.info(f"BENCH: {engine.value} log-log slope {scaling_slope(rows, engine.value):.3f}")
    return 0


def calc_command(args) -> int:
    ledger = load_ledger(args.ledger)
    claim = load_claim(args.claim)
    via = [name for name in (args.via or "").split(",") if name]
    steps = derive_chain(ledger, claim, via=via or None)
    print(format_claim_chain(claim, steps))
    return 0


command_mapping: Dict[str, Callable] = {
    "gen-ov": gen_ov_command,
    "gen-cnf": gen_cnf_command,
    "gen-ktree": gen_ktree_command,
    "solve-ov": solve_ov_command,
    "reduce": reduce_command,
    "map": map_command,
    "diam": diam_command,
    "validate-td": validate_td_command,
    "bench": bench_command,
    "calc": calc_command,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfgr",
        description="Parameterized fine-grained reductions: OV, treewidth diameter and closure bounds.",
        epilog="\n".join(f"  {name:<12} {entry['example']}" for name, entry in COMMANDS_HELP_MANUAL.items()),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--records", help="append one JSON result record per solve to this file")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="logging level (default from PFGR_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str) -> argparse.ArgumentParser:
        entry = COMMANDS_HELP_MANUAL[name]
        return commands.add_parser(name, help=entry["description"], description=entry["description"])

    p = add("gen-ov")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--plant", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")

    p = add("gen-cnf")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")

    p = add("gen-ktree")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--keep-prob", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True, help="output prefix")

    p = add("solve-ov")
    p.add_argument("--engine", choices=[e.value for e in Engine], default=Engine.DIAM.value)
    p.add_argument("--max-d", type=int, default=None, help=f"dimension cap (default {config.MAX_D})")
    p.add_argument("file")

    p = add("reduce")
    p.add_argument("reduction", choices=[SAT2OV, OV2DIAM])
    p.add_argument("file")
    p.add_argument("-o", "--out", help="output prefix (default: input path without suffix)")

    p = add("map")
    p.add_argument("reduction")
    p.add_argument("params", nargs="*", help="name=value pairs")

    p = add("diam")
    p.add_argument("--algo", choices=[a.value for a in DiameterAlgo], default=DiameterAlgo.TD.value)
    p.add_argument("graph")
    p.add_argument("td", nargs="?")

    p = add("validate-td")
    p.add_argument("graph")
    p.add_argument("td")

    p = add("bench")
    p.add_argument("--suite", choices=SUITES, default=SUITES[0])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-list", type=_int_list, required=True)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--engines", default="brute,diam")
    p.add_argument("--max-d", type=int, default=None)
    p.add_argument("-o", "--out", help="CSV file (default stdout)")

    p = add("calc")
    p.add_argument("--ledger", help="ledger file (default: shipped ledger)")
    p.add_argument("--claim", help="claim file (default: shipped diameter claim)")
    p.add_argument("--via", help="comma-separated reduction names to follow in order")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=str(args.log_level).upper(),
        format="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=[logging.StreamHandler(sys.stderr)],
    )
    try:
        return command_mapping[args.command](args)
    except (PFGRError, ValueError, OSError) as e:
        logging.debug("CLI: command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 2
