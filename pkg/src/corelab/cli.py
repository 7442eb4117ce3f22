"""Command-line interface.

Bidders are numbered from 1 on the command line and in all printed output;
goods are letters (``A``, ``B``, ...) with ``0`` for "nothing".

Exit status: 0 success, 1 bad input, 2 resource cap hit, 3 internal check failed.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional

from .auction import (
    FirstIndex,
    FixedScript,
    format_prices,
    good_name,
    run_auction,
    run_auction_all_branches,
    trace_rows,
    trace_table,
    trace_tsv,
    trace_header,
)
from .errors import ContractViolation, InvariantError, ResourceLimitError, UsageError
from .exact import brute_force_oracle, qbc_report, solve_welfare_max_core
from .generate import random_market
from .hardness import CubicGraph, build_mbsbm, verify_reduction
from .io import (
    market_from_json,
    market_to_json,
    outcome_from_dict,
    outcome_to_dict,
    solve_report_to_dict,
)
from .market import Market, blocking_pairs, is_core, welfare
from .strategy import (
    DEFAULT_MAX_WALKS,
    auction_mechanism,
    format_walk,
    general_position_check,
    ic_counterexample,
    solver_mechanism,
)

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_INTERNAL = 0, 1, 2, 3


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def _int_list(raw: str, what: str) -> List[int]:
    try:
        return [int(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {raw!r}")


def _range(raw: str, what: str):
    parts = raw.split(":")
    if len(parts) != 2:
        raise UsageError(f"{what} must look like LO:HI, got {raw!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"{what} bounds must be integers, got {raw!r}")


def _market(args) -> Market:
    market = market_from_json(_read_text(args.market))
    if getattr(args, "reserves", None):
        market = Market(market.values, market.budgets, _int_list(args.reserves, "--reserves"))
    return market


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _assignment_text(market: Market, mu) -> str:
    return " ".join(f"{i + 1}<-{good_name(j, market.m)}" for i, j in enumerate(mu)) or "(no bidders)"


def _outcome_lines(market: Market, outcome) -> List[str]:
    return [
        f"assignment: {_assignment_text(market, outcome.assignment)}",
        f"prices:     {format_prices(outcome.prices)}",
        f"welfare:    {welfare(market, outcome.assignment)}",
    ]


def _parse_policy(raw: str):
    if raw == "first":
        return FirstIndex()
    if raw == "branches":
        return "branches"
    if raw.startswith("fixed:"):
        ids = _int_list(raw[len("fixed:"):], "fixed policy")
        if not ids or any(i < 1 for i in ids):
            raise UsageError("fixed policy needs 1-based bidder ids, e.g. fixed:2,1")
        return FixedScript([i - 1 for i in ids])
    raise UsageError(f"unknown policy {raw!r}; use first, fixed:<ids> or branches")


def _trace_json(trace, market):
    header = trace_header(market)
    return [dict(zip(header, cells)) for cells in trace_rows(trace, market)]


def cmd_auction(args) -> int:
    market = _market(args)
    policy = "branches" if args.branches else _parse_policy(args.policy)
    if policy == "branches":
        results = run_auction_all_branches(market)
        if args.format == "json":
            _emit(json.dumps({
                "outcomes": [
                    dict(outcome_to_dict(r.outcome), welfare=welfare(market, r.outcome.assignment),
                         choices=[i + 1 for i in r.choices], core=is_core(market, r.outcome))
                    for r in results
                ]
            }, indent=2))
            return EXIT_OK
        for k, r in enumerate(results, 1):
            chosen = ",".join(str(i + 1) for i in r.choices) or "none"
            _emit(f"branch {k} (step-3 choices: {chosen})")
            if args.format == "tsv":
                _emit(trace_tsv(r.trace, market))
            else:
                _emit(trace_table(r.trace, market))
            for line in _outcome_lines(market, r.outcome):
                _emit("  " + line)
            _emit(f"  core:       {str(is_core(market, r.outcome)).lower()}")
        return EXIT_OK

    result = run_auction(market, policy)
    core = is_core(market, result.outcome)
    if args.format == "json":
        doc = dict(outcome_to_dict(result.outcome))
        doc.update(
            welfare=welfare(market, result.outcome.assignment),
            certificate=result.certificate,
            core=core,
            trace=_trace_json(result.trace, market),
        )
        _emit(json.dumps(doc, indent=2))
        return EXIT_OK
    if args.format == "tsv":
        _emit(trace_tsv(result.trace, market))
        return EXIT_OK
    _emit(trace_table(result.trace, market))
    for line in _outcome_lines(market, result.outcome):
        _emit(line)
    _emit(f"certificate: {str(result.certificate).lower()} (single-bidder conflict sets only)")
    _emit(f"core:        {str(core).lower()}")
    return EXIT_OK


def cmd_solve(args) -> int:
    market = _market(args)
    if args.oracle:
        report = brute_force_oracle(market)
    else:
        report = solve_welfare_max_core(market, max_nodes=args.max_nodes)
    qbc = qbc_report(market, report.outcome)
    core = is_core(market, report.outcome)
    if args.format == "json":
        doc = solve_report_to_dict(report)
        doc.update(qbc=qbc.holds, core=core)
        _emit(json.dumps(doc, indent=2))
    else:
        for line in _outcome_lines(market, report.outcome):
            _emit(line)
        _emit(f"explored:   {report.assignments_explored} assignments, {report.lp_calls} LP calls")
        _emit(f"core:       {str(core).lower()}")
        _emit(f"q-BC:       {str(qbc.holds).lower()}")
        for v in qbc.violations:
            _emit(f"  violated {v}")
    if not (core and qbc.holds):
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_check(args) -> int:
    market = _market(args)
    if args.outcome:
        try:
            doc = json.loads(_read_text(args.outcome))
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed outcome JSON: {exc}")
        outcome = outcome_from_dict(doc)
    elif args.assignment is not None and args.prices is not None:
        outcome = outcome_from_dict({
            "assignment": _int_list(args.assignment, "--assignment"),
            "prices": [x for x in args.prices.split(",") if x.strip()],
        })
    else:
        raise UsageError("give --outcome FILE or both --assignment and --prices")
    pairs = blocking_pairs(market, outcome)
    if args.format == "json":
        _emit(json.dumps({
            "core": not pairs,
            "blocking_pairs": [[i + 1, j] for i, j in pairs],
        }, indent=2))
    else:
        for line in _outcome_lines(market, outcome):
            _emit(line)
        _emit(f"core:       {str(not pairs).lower()}")
        for i, j in pairs:
            _emit(f"  blocking pair: bidder {i + 1} with good {good_name(j, market.m)}")
    return EXIT_OK


def _graph(args) -> CubicGraph:
    return CubicGraph.from_edge_list(_read_text(args.edges))


def cmd_gadget(args) -> int:
    graph = _graph(args)
    if args.action == "build":
        gm = build_mbsbm(graph, args.k)
        text = market_to_json(gm.market)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            _emit(text)
        if args.names:
            with open(args.names, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(gm.names_sidecar(), indent=2) + "\n")
        sys.stderr.write(
            f"{gm.market.n} buyers, {gm.market.m} sellers, threshold {gm.sw_threshold()}\n"
        )
        return EXIT_OK
    report = verify_reduction(graph, args.k)
    if args.format == "json":
        _emit(json.dumps(report.to_json(), indent=2))
    else:
        _emit(report.table())
        _emit(f"overall: {'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_INTERNAL


def cmd_genpos(args) -> int:
    market = _market(args)
    result = general_position_check(market, max_len=args.max_len, max_walks=args.max_walks)
    if args.format == "json":
        _emit(json.dumps({
            "verdict": result.verdict.value,
            "max_len": result.max_len,
            "walks_enumerated": result.walks_enumerated,
            "witness": [format_walk(w) for w in result.witness] if result.witness else None,
        }, indent=2))
    else:
        _emit(result.describe())
    return EXIT_OK


def cmd_ic(args) -> int:
    mechanism = solver_mechanism if args.mechanism == "solver" else auction_mechanism
    report = ic_counterexample(mechanism)
    if args.format == "json":
        e = report.experiment
        _emit(json.dumps({
            "mechanism": args.mechanism,
            "manipulator": report.manipulator + 1,
            "truthful": outcome_to_dict(e.truthful_outcome),
            "truthful_utilities": [str(u) for u in e.truthful_utilities],
            "reported_budget": 2,
            "deviating": outcome_to_dict(e.reported_outcome),
            "truthful_utility": str(report.truthful_utility),
            "deviating_utility": str(report.deviating_utility),
        }, indent=2))
    else:
        _emit(f"mechanism: {args.mechanism}")
        _emit(report.describe())
    return EXIT_OK


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    market = random_market(
        rng, args.n, args.m,
        values=_range(args.values, "--values"),
        budgets=_range(args.budgets, "--budgets"),
        reserves=_range(args.reserves, "--reserves") if args.reserves else None,
    )
    text = market_to_json(market)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corelab",
        description="Core outcomes in assignment markets with budget-constrained bidders.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def market_cmd(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("market", help="market JSON file, or - for stdin")
        p.add_argument("--reserves", help="override reserves, e.g. 0,2")
        p.add_argument("--format", choices=["table", "tsv", "json"], default="table")
        return p

    p = market_cmd("auction", "run the iterative auction and print its trace")
    p.add_argument("--policy", default="first", help="first | fixed:<ids> | branches (default first)")
    p.add_argument("--branches", action="store_true", help="explore every step-3 choice")
    p.set_defaults(func=cmd_auction)

    p = market_cmd("solve", "find a welfare-maximizing core outcome")
    p.add_argument("--oracle", action="store_true", help="use integer-price brute force")
    p.add_argument("--max-nodes", type=int, default=None, help="search node cap")
    p.set_defaults(func=cmd_solve)

    p = market_cmd("check", "list blocking pairs of an outcome")
    p.add_argument("--outcome", help='outcome JSON: {"assignment": [...], "prices": [...]}')
    p.add_argument("--assignment", help="good per bidder, e.g. 0,2,1")
    p.add_argument("--prices", help="price per good, e.g. 1,1 or 5/2,1")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gadget", help="build or verify the independent-set reduction")
    p.add_argument("action", choices=["build", "verify"])
    p.add_argument("edges", help="edge list of a cubic graph, one 'u v' per line")
    p.add_argument("--k", type=int, default=1, help="target independent set size")
    p.add_argument("--out", help="write the market JSON here instead of stdout")
    p.add_argument("--names", help="write the agent-name sidecar JSON here")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_gadget)

    p = market_cmd("genpos", "check general position by walk enumeration")
    p.add_argument("--max-len", type=int, default=None, help="walk length bound (default 2(n+m))")
    p.add_argument("--max-walks", type=int, default=DEFAULT_MAX_WALKS, help="walk enumeration cap")
    p.set_defaults(func=cmd_genpos)

    p = sub.add_parser("ic", help="show a profitable budget misreport")
    p.add_argument("--mechanism", choices=["auction", "solver"], default="auction")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_ic)

    p = sub.add_parser("gen", help="write a seeded random market")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=3, help="number of bidders")
    p.add_argument("--m", type=int, default=2, help="number of goods")
    p.add_argument("--values", default="0:6", help="value range LO:HI")
    p.add_argument("--budgets", default="1:6", help="budget range LO:HI")
    p.add_argument("--reserves", default=None, help="reserve range LO:HI (default all 0)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RESOURCE
    except (InvariantError, ContractViolation, AssertionError) as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_INTERNAL
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
