"""
Query Components
Epistemic query operators over one world view, over all world views, on
guess-tailored programs and on the multi-view program; world-view rules
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

from lark import Lark

from components.as_engine import Interpretation
from components.epistemic import (
    Guess,
    MultiViewProgram,
    WorldView,
    rascgk_check,
    tailor,
)
from components.ras_engine import QueryMode, holds_in_all, holds_in_some
from components.syntax import ATOM_GRAMMAR, Atom, AtomBuilder, Form, GroundProgram, Literal, run_parser
from utils.errors import ElpError, InvalidGuessError, PreconditionError, QuerySyntaxError
from utils.helpers import format_atom_set, format_bool

logger = logging.getLogger(__name__)


class QueryOp(str, Enum):
    PLAIN = ""
    NAF = "not"
    ENOT = "ENOT"
    M = "M"
    K = "K"
    NOT = "NOT"
    ENOT_W = "ENOTW"
    M_W_SOME = "MWsome"
    M_W_ALL = "MWall"
    K_W = "KW"
    NOT_W = "NOTW"

    @property
    def is_world_level(self) -> bool:
        return self in _WORLD_LEVEL


_WORLD_LEVEL = {QueryOp.ENOT_W, QueryOp.M_W_SOME, QueryOp.M_W_ALL, QueryOp.K_W, QueryOp.NOT_W}

# world-level operator -> (per-view operator, quantifier over views)
_LIFTED = {
    QueryOp.K_W: (QueryOp.K, all),
    QueryOp.M_W_SOME: (QueryOp.M, any),
    QueryOp.M_W_ALL: (QueryOp.M, all),
    QueryOp.ENOT_W: (QueryOp.ENOT, any),
    QueryOp.NOT_W: (QueryOp.NOT, all),
}


@dataclass(frozen=True)
class Query:
    op: QueryOp
    atom: Atom

    def __str__(self) -> str:
        return f"{self.op.value} {self.atom}" if self.op.value else str(self.atom)


Witness = Tuple[int, Interpretation]


@dataclass
class QueryResult:
    value: bool
    witnesses: List[Witness] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.value

    def __str__(self) -> str:
        return format_bool(self.value)


# ==================== PARSING ====================

QUERY_GRAMMAR = r"""
    query: qlit ("," qlit)* "."?
    views: view_rule*
    view_rule: atom ":-" qlit ("," qlit)* "."
             | atom "."
    qlit: qop atom
        | atom
    qop: NAF | ENOTL | ENOTU | KOP | MOP | NOTOP | KWOP | MWSOME | MWALL | ENOTW | NOTW

    NAF: "not"
    ENOTL: "enot"
    ENOTU: "ENOT"
    KOP: "K"
    MOP: "M"
    NOTOP: "NOT"
    KWOP: "KW"
    MWSOME: "MWsome"
    MWALL: "MWall"
    ENOTW: "ENOTW"
    NOTW: "NOTW"
""" + ATOM_GRAMMAR

_TOKEN_OPS = {
    "NAF": QueryOp.NAF,
    "ENOTL": QueryOp.ENOT,
    "ENOTU": QueryOp.ENOT,
    "KOP": QueryOp.K,
    "MOP": QueryOp.M,
    "NOTOP": QueryOp.NOT,
    "KWOP": QueryOp.K_W,
    "MWSOME": QueryOp.M_W_SOME,
    "MWALL": QueryOp.M_W_ALL,
    "ENOTW": QueryOp.ENOT_W,
    "NOTW": QueryOp.NOT_W,
}


@dataclass(frozen=True)
class ViewRule:
    """`head :- q1, ..., qn.` evaluated against the set of world views"""

    head: Atom
    body: Tuple[Query, ...] = ()

    def substitute(self, binding: Dict[str, str]) -> "ViewRule":
        return ViewRule(
            self.head.substitute(binding),
            tuple(Query(q.op, q.atom.substitute(binding)) for q in self.body),
        )

    @property
    def variables(self) -> Set[str]:
        found = set(self.head.variables)
        for q in self.body:
            found |= q.atom.variables
        return found

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(q) for q in self.body)}."


class QueryBuilder(AtomBuilder):
    def qop(self, children):
        return _TOKEN_OPS[children[0].type]

    def qlit(self, children):
        if len(children) == 1:
            return Query(QueryOp.PLAIN, children[0])
        return Query(children[0], children[1])

    def query(self, children):
        return list(children)

    def view_rule(self, children):
        return ViewRule(children[0], tuple(children[1:]))

    def views(self, children):
        return list(children)


_query_parser = Lark(QUERY_GRAMMAR, parser="lalr", start="query")
_views_parser = Lark(QUERY_GRAMMAR, parser="lalr", start="views")


def parse_queries(text: str) -> List[Query]:
    """
    Parse a comma-separated conjunction of ground queries

    Args:
        text: e.g. "KW guilty(john), MWsome reliable(witness1,john)." (trailing `.` optional)

    Returns:
        Queries in order
    """
    text = text.strip()
    if text.startswith("?-"):
        text = text[2:]
    queries = run_parser(_query_parser, QueryBuilder(), text, QuerySyntaxError)
    for q in queries:
        if not q.atom.is_ground:
            raise QuerySyntaxError(f"query atom '{q.atom}' contains variables")
    return queries


def parse_query(text: str) -> Query:
    """Parse exactly one query"""
    queries = parse_queries(text)
    if len(queries) != 1:
        raise QuerySyntaxError(f"expected one query, got {len(queries)}")
    return queries[0]


def parse_view_rules(text: str) -> List[ViewRule]:
    """Parse a `.views` file (rules may contain variables)"""
    return run_parser(_views_parser, QueryBuilder(), text, QuerySyntaxError)


def ground_view_rules(rules: Sequence[ViewRule], constants: Iterable[str]) -> List[ViewRule]:
    """
    Instantiate view rules over the constants of the underlying program

    Args:
        rules: Parsed view rules
        constants: Constants to substitute for variables

    Returns:
        Ground view rules
    """
    values = sorted(constants)
    grounded: List[ViewRule] = []
    for r in rules:
        variables = sorted(r.variables)
        if not variables:
            grounded.append(r)
            continue
        for combo in itertools.product(values, repeat=len(variables)):
            grounded.append(r.substitute(dict(zip(variables, combo))))
    return list(dict.fromkeys(grounded))


# ==================== ONE WORLD VIEW ====================

def eval_on_world_view(wv: WorldView, q: Query) -> QueryResult:
    """
    Evaluate a per-world-view operator

    PLAIN/M: A in some member; NAF/ENOT: A missing from some member;
    K: A in every member; NOT: A in no member.

    Args:
        wv: World view (nonempty)
        q: Query with a per-world-view operator

    Returns:
        QueryResult; witnesses hold the member proving an existential verdict
        or refuting a universal one
    """
    if q.op.is_world_level:
        raise PreconditionError(f"'{q}' quantifies over world views")
    if not wv.answer_sets:
        raise PreconditionError("world view has no answer sets")

    members = sorted(wv.answer_sets, key=lambda m: sorted(map(str, m)))
    a = q.atom
    if q.op in (QueryOp.PLAIN, QueryOp.M):
        found = [m for m in members if a in m]
        return QueryResult(bool(found), [(wv.index, found[0])] if found else [])
    if q.op in (QueryOp.NAF, QueryOp.ENOT):
        found = [m for m in members if a not in m]
        return QueryResult(bool(found), [(wv.index, found[0])] if found else [])
    if q.op == QueryOp.K:
        against = [m for m in members if a not in m]
    else:
        against = [m for m in members if a in m]
    return QueryResult(not against, [(wv.index, against[0])] if against else [])


# ==================== ALL WORLD VIEWS ====================

def eval_over_world_views(wvs: Sequence[WorldView], q: Query) -> QueryResult:
    """
    Evaluate a world-view-level operator

    Args:
        wvs: World views (nonempty)
        q: KW / MWsome / MWall / ENOTW / NOTW query

    Returns:
        QueryResult with the witnesses of the deciding views
    """
    if not q.op.is_world_level:
        raise PreconditionError(f"'{q}' is not a world-view-level query")
    if not wvs:
        raise PreconditionError("no world views to query")

    inner, quantifier = _LIFTED[q.op]
    per_view = [eval_on_world_view(wv, Query(inner, q.atom)) for wv in wvs]
    value = quantifier(r.value for r in per_view)
    if quantifier is any:
        deciding = [r for r in per_view if r.value]
    else:
        deciding = [r for r in per_view if not r.value]
    return QueryResult(value, [w for r in deciding for w in r.witnesses])


def eval_in_every_view(wvs: Sequence[WorldView], q: Query) -> QueryResult:
    """A per-world-view query holds on the program when it holds in each world view"""
    if not wvs:
        return QueryResult(False)
    per_view = [eval_on_world_view(wv, q) for wv in wvs]
    return QueryResult(all(r.value for r in per_view), [w for r in per_view for w in r.witnesses])


def evaluate(wvs: Sequence[WorldView], q: Query) -> QueryResult:
    """Dispatch on the operator level"""
    if q.op.is_world_level:
        return eval_over_world_views(wvs, q)
    return eval_in_every_view(wvs, q)


# ==================== GUESS-TAILORED AND MULTI-VIEW ====================

def _tailored_verdict(program: GroundProgram, op: QueryOp, a: Atom) -> bool:
    if op in (QueryOp.PLAIN, QueryOp.M):
        return holds_in_some(program, Literal(a))
    if op in (QueryOp.NAF, QueryOp.ENOT):
        return holds_in_some(program, Literal(a, Form.NAF))
    if op == QueryOp.K:
        return holds_in_all(program, a)
    return not holds_in_some(program, Literal(a))


def guess_tailored_eval(gp: GroundProgram, phi: Guess, q: Query, checked: bool = False) -> QueryResult:
    """
    Answer a per-world-view query for the world view of a guess without building it

    Args:
        gp: Normalized ground program
        phi: Guess passing the RAS candidate check
        q: Per-world-view query
        checked: Skip re-running the candidate check

    Returns:
        QueryResult (no witnesses: no answer set is materialized)
    """
    if q.op.is_world_level:
        raise PreconditionError(f"'{q}' quantifies over world views")
    if not checked and not rascgk_check(gp, phi):
        raise InvalidGuessError(f"guess {phi} does not yield a world view")
    return QueryResult(_tailored_verdict(tailor(gp, phi), q.op, q.atom))


def eval_on_multiview(mv: MultiViewProgram, q: Query) -> QueryResult:
    """
    World-view-level query as a conjunction or disjunction over the renamed copies

    Args:
        mv: Multi-view program built from the valid guesses
        q: World-view-level query

    Returns:
        QueryResult
    """
    if not q.op.is_world_level:
        raise PreconditionError(f"'{q}' is not a world-view-level query")
    inner, quantifier = _LIFTED[q.op]
    value = quantifier(_tailored_verdict(mv.program, inner, mv.copy_atom(i, q.atom)) for i in mv.copies())
    return QueryResult(value)


# ==================== SESSIONS ====================

class WorldViewSession:
    """
    Query sequence over a fixed set of world views

    A per-world-view query succeeds when it holds in every world view of the
    context. In CONTEXTUAL mode a succeeding `A` / `not A` narrows each world
    view of the context to the answer sets satisfying it.
    """

    def __init__(self, world_views: Sequence[WorldView], mode: QueryMode = QueryMode.CONTEXTUAL):
        self.world_views = list(world_views)
        self.mode = QueryMode(mode)
        self.context: List[WorldView] = list(self.world_views)

    def reset(self) -> None:
        self.context = list(self.world_views)

    def set_mode(self, mode: QueryMode) -> None:
        self.mode = QueryMode(mode)
        self.reset()

    def ask(self, q: Query) -> QueryResult:
        views = self.context if self.mode == QueryMode.CONTEXTUAL else self.world_views
        if not views:
            return QueryResult(False)
        result = evaluate(views, q)
        if result.value and self.mode == QueryMode.CONTEXTUAL and q.op in (QueryOp.PLAIN, QueryOp.NAF):
            wanted = q.op == QueryOp.PLAIN
            self.context = [
                WorldView(frozenset(m for m in wv.answer_sets if (q.atom in m) == wanted), wv.guess, wv.index)
                for wv in views
            ]
        logger.debug("query %s -> %s", q, result.value)
        return result

    def ask_all(self, queries: Sequence[Query]) -> List[QueryResult]:
        return [self.ask(q) for q in queries]


# ==================== WORLD-VIEW RULES ====================

def derive_view_atoms(view_rules: Sequence[ViewRule], wvs: Sequence[WorldView]) -> FrozenSet[Atom]:
    """
    Least fixpoint of ground world-view rules

    A bare body atom holds when it was derived already or is true in every
    world view; operator literals are evaluated with `evaluate`.

    Args:
        view_rules: Ground view rules
        wvs: World views of the program

    Returns:
        Derived head atoms
    """
    derived: Set[Atom] = set()
    cache: Dict[Query, bool] = {}

    def holds(q: Query) -> bool:
        if q.op == QueryOp.PLAIN and q.atom in derived:
            return True
        key = Query(QueryOp.K_W, q.atom) if q.op == QueryOp.PLAIN else q
        if key not in cache:
            cache[key] = bool(wvs) and evaluate(wvs, key).value
        return cache[key]

    changed = True
    while changed:
        changed = False
        for r in view_rules:
            if r.head not in derived and all(holds(q) for q in r.body):
                derived.add(r.head)
                changed = True
    logger.debug("derived view atoms: %s", format_atom_set(derived))
    return frozenset(derived)


def load_view_rules(path: str, constants: Iterable[str]) -> List[ViewRule]:
    """Read a `.views` file and ground it over the program's constants"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ElpError(f"cannot read {path}: {exc.strerror or exc}") from None
    return ground_view_rules(parse_view_rules(text), constants)
