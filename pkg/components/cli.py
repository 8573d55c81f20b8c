"""
Command-line Interface
`python home.py <subcommand> FILE [options] [QUERY]`
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, List, Optional, Sequence, TextIO

from components.analysis import check_coincidence
from components.as_engine import answer_sets_as
from components.epistemic import (
    ReductMode,
    Semantics,
    compute_world_views,
    epistemic_scenarios,
    guess_count_bound,
    is_candidate,
    maximal_scenarios,
    parse_guess,
    valid_guesses,
)
from components.queries import (
    QueryOp,
    QueryResult,
    WorldViewSession,
    derive_view_atoms,
    load_view_rules,
    parse_queries,
)
from components.ras_engine import QueryMode, answer_sets_ras
from components.reports import (
    answer_sets_frame,
    answer_sets_lines,
    answer_sets_payload,
    bound_frame,
    bound_payload,
    coincidence_lines,
    coincidence_payload,
    render,
    scenarios_lines,
    scenarios_payload,
    world_views_frame,
    world_views_payload,
)
from components.repl import run_repl
from components.syntax import GroundProgram, load_program
from utils.config import Settings, get_settings, reload_settings
from utils.errors import ElpError
from utils.helpers import (
    METHOD_CHOICES,
    MODE_CHOICES,
    REDUCT_CHOICES,
    SEMANTICS_CHOICES,
    configure_logging,
    format_atom_set,
    format_bool,
)

logger = logging.getLogger(__name__)

COMMANDS = ("answersets", "scenarios", "worldviews", "check-guess", "bound", "analyze", "query", "repl")


# ==================== ARGUMENTS ====================

def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elp",
        description="Answer sets, world views and epistemic queries for epistemic logic programs",
    )
    parser.add_argument("command", choices=COMMANDS, help="What to compute")
    parser.add_argument("file", help="Program file (.lp)")
    parser.add_argument("query", nargs="?", default=None, help="Query text for `query` (e.g. \"KW guilty(john)\")")
    parser.add_argument("--semantics", choices=SEMANTICS_CHOICES, default=settings.default_semantics,
                        help="Answer set semantics (default: %(default)s)")
    parser.add_argument("--method", choices=METHOD_CHOICES, default=settings.default_method,
                        help="World view search (default: %(default)s)")
    parser.add_argument("--reduct", choices=REDUCT_CHOICES, default=settings.default_reduct,
                        help="Epistemic reduct mode (default: %(default)s)")
    parser.add_argument("--mode", choices=MODE_CHOICES, default="contextual",
                        help="Query sequence mode (default: %(default)s)")
    parser.add_argument("--guess", default=None, help="Guess for check-guess, e.g. \"enot b, enot not a\"")
    parser.add_argument("--views", default=None, help="World-view rule file (.views)")
    parser.add_argument("--json", action="store_true", help="Emit JSON")
    parser.add_argument("--table", action="store_true", help="Emit a table")
    parser.add_argument("--config", default=None, help="Settings YAML (default: $ELP_CONFIG or config/settings.yaml)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    return parser


def _emit(out: TextIO, args: argparse.Namespace, payload: Any, lines: Sequence[str], table: Optional[str] = None) -> None:
    if args.json:
        out.write(json.dumps(payload, indent=2) + "\n")
    elif args.table and table is not None:
        out.write(table + "\n")
    else:
        for line in lines:
            out.write(line + "\n")


# ==================== SUBCOMMANDS ====================

def cmd_answersets(gp: GroundProgram, args, out: TextIO) -> int:
    engine = answer_sets_ras if args.semantics == "ras" else answer_sets_as
    sets = engine(gp)
    _emit(out, args, answer_sets_payload(sets), answer_sets_lines(sets), render(answer_sets_frame(sets)))
    return 0


def cmd_scenarios(gp: GroundProgram, args, out: TextIO) -> int:
    scenarios = epistemic_scenarios(gp)
    maximal = maximal_scenarios(scenarios)
    _emit(out, args, scenarios_payload(scenarios, maximal), scenarios_lines(scenarios, maximal))
    return 0


def _world_views(gp: GroundProgram, args):
    return compute_world_views(gp, args.method, ReductMode(args.reduct), Semantics(args.semantics))


def cmd_worldviews(gp: GroundProgram, args, out: TextIO) -> int:
    views = _world_views(gp, args)
    derived = derive_view_atoms(load_view_rules(args.views, gp.constants), views) if args.views else None
    lines = [str(wv) for wv in views]
    if derived is not None:
        lines.append(f"view atoms: {format_atom_set(derived)}")
    _emit(out, args, world_views_payload(views, derived), lines, render(world_views_frame(views)))
    return 0


def cmd_check_guess(gp: GroundProgram, args, out: TextIO) -> int:
    if args.guess is None:
        raise ElpError("check-guess needs --guess")
    mode, semantics = ReductMode(args.reduct), Semantics(args.semantics)
    phi = parse_guess(args.guess)
    candidate = is_candidate(gp, phi, mode, semantics)
    valid = candidate and phi in valid_guesses(gp, mode, semantics)
    payload = {"guess": [str(el) for el in phi.sorted_literals()], "candidate": candidate, "valid": valid}
    lines = [f"guess: {phi}", f"candidate: {format_bool(candidate)}", f"valid: {format_bool(valid)}"]
    _emit(out, args, payload, lines)
    return 0


def cmd_bound(gp: GroundProgram, args, out: TextIO) -> int:
    report = guess_count_bound(gp, with_counts=True)
    frame = bound_frame(report)
    lines = [f"{q}: {v}" for q, v in zip(frame["quantity"], frame["value"])]
    _emit(out, args, bound_payload(report), lines, render(frame))
    return 0


def cmd_analyze(gp: GroundProgram, args, out: TextIO) -> int:
    report = check_coincidence(gp)
    _emit(out, args, coincidence_payload(report), coincidence_lines(report))
    return 0


def cmd_query(gp: GroundProgram, args, out: TextIO) -> int:
    if not args.query:
        raise ElpError("query needs QUERY text")
    queries = parse_queries(args.query)
    views = _world_views(gp, args)
    view_rules = load_view_rules(args.views, gp.constants) if args.views else []
    view_heads = {r.head for r in view_rules}
    derived = derive_view_atoms(view_rules, views) if view_rules else frozenset()

    session = WorldViewSession(views, QueryMode(args.mode))
    results: List[QueryResult] = []
    for q in queries:
        if q.op == QueryOp.PLAIN and q.atom in view_heads:
            results.append(QueryResult(q.atom in derived))
        else:
            results.append(session.ask(q))

    if args.json:
        payload = [
            {"query": str(q), "value": r.value, "witnesses": [[i, sorted(map(str, m))] for i, m in r.witnesses]}
            for q, r in zip(queries, results)
        ]
        out.write(json.dumps(payload, indent=2) + "\n")
    elif len(queries) == 1:
        out.write(format_bool(results[0].value) + "\n")
    else:
        for q, r in zip(queries, results):
            out.write(f"{q}: {format_bool(r.value)}\n")
    return 0 if all(r.value for r in results) else 1


def cmd_repl(gp: GroundProgram, args, out: TextIO) -> int:
    return run_repl(
        gp,
        mode=QueryMode(args.mode),
        reduct=ReductMode(args.reduct),
        semantics=Semantics(args.semantics),
        method=args.method,
        stdout=out,
    )


HANDLERS = {
    "answersets": cmd_answersets,
    "scenarios": cmd_scenarios,
    "worldviews": cmd_worldviews,
    "check-guess": cmd_check_guess,
    "bound": cmd_bound,
    "analyze": cmd_analyze,
    "query": cmd_query,
    "repl": cmd_repl,
}


def run_cli(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    Run one command

    Args:
        argv: Arguments without the program name
        stdout: Output stream (default: sys.stdout)
        stderr: Diagnostic stream (default: sys.stderr)

    Returns:
        0 on success (or true query), 1 on a false query, 2 on errors
    """
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    settings = get_settings()
    try:
        args = build_parser(settings).parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.config:
        os.environ["ELP_CONFIG"] = args.config
        settings = reload_settings()
    configure_logging(settings.log_level, args.verbose)

    try:
        gp = load_program(args.file)
        return HANDLERS[args.command](gp, args, out)
    except ElpError as exc:
        err.write(f"error: {exc}\n")
        return 2
