"""
Epistemic Components
Epistemic reduct, candidate and maximal world views, the simplified version,
epistemic scenarios, query-based guess checking and the multi-view program
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from components.as_engine import Interpretation, answer_sets_as
from components.ras_engine import answer_sets_ras, holds_in_all, holds_in_some, is_consistent
from components.syntax import (
    Atom,
    Form,
    GroundProgram,
    Literal,
    Rule,
    fresh_atom,
    ground,
    parse_program,
)
from utils.config import get_settings
from utils.errors import CapacityError, InvalidGuessError, PreconditionError
from utils.helpers import format_atom_set, format_family, set_key

logger = logging.getLogger(__name__)


class ReductMode(str, Enum):
    SHEN_EITER = "shen-eiter"
    FRESH_ATOM = "fresh"


class Semantics(str, Enum):
    AS = "as"
    RAS = "ras"


def answer_sets_for(semantics: Semantics) -> Callable[[GroundProgram], Set[Interpretation]]:
    return answer_sets_ras if Semantics(semantics) == Semantics.RAS else answer_sets_as


def project(m: Iterable[Atom]) -> Interpretation:
    """Drop reserved fresh atoms"""
    return frozenset(a for a in m if not a.is_fresh)


# ==================== TYPES ====================

@dataclass(frozen=True, order=True)
class EpistemicLiteral:
    """`enot A` (negated=False) or `enot not A` (negated=True)"""

    atom: Atom
    negated: bool = False

    @classmethod
    def of(cls, lit: Literal) -> "EpistemicLiteral":
        if not lit.is_epistemic:
            raise ValueError(f"'{lit}' is not epistemic")
        return cls(lit.atom, lit.form.enot_of_naf)

    @property
    def inner(self) -> Literal:
        return Literal(self.atom, Form.NAF if self.negated else Form.POS)

    def true_in(self, family: Iterable[Interpretation]) -> bool:
        """enot F holds when F is false in some member"""
        if self.negated:
            return any(self.atom in m for m in family)
        return any(self.atom not in m for m in family)

    def __str__(self) -> str:
        return f"enot {self.inner}"


@dataclass(frozen=True)
class Guess:
    assumed: FrozenSet[EpistemicLiteral] = frozenset()

    def __contains__(self, item: EpistemicLiteral) -> bool:
        return item in self.assumed

    def __len__(self) -> int:
        return len(self.assumed)

    def __lt__(self, other: "Guess") -> bool:
        return self.assumed < other.assumed

    def sorted_literals(self) -> List[EpistemicLiteral]:
        return sorted(self.assumed)

    def __str__(self) -> str:
        return format_atom_set(self.assumed)


def guess_order(g: Guess) -> Tuple[int, Tuple[str, ...]]:
    """Larger guesses first, then lexicographic"""
    return (-len(g), set_key(g.assumed))


@dataclass(frozen=True)
class Scenario:
    positive: FrozenSet[EpistemicLiteral]
    negative: FrozenSet[EpistemicLiteral] = frozenset()

    @property
    def guess(self) -> Guess:
        return Guess(self.positive)

    def __str__(self) -> str:
        neg = ", ".join(f"not {el}" for el in sorted(self.negative))
        return format_atom_set(self.positive) + (f" / {{{neg}}}" if neg else "")


@dataclass(frozen=True)
class WorldView:
    answer_sets: FrozenSet[Interpretation]
    guess: Guess
    index: int = field(default=0, compare=False)

    def sorted_sets(self) -> List[List[Atom]]:
        return [sorted(m) for m in sorted(self.answer_sets, key=set_key)]

    def __str__(self) -> str:
        return f"WV {self.index} (guess: {self.guess}): {format_family(self.answer_sets)}"


def finalize_world_views(views: Iterable[WorldView]) -> List[WorldView]:
    """Deduplicate, sort deterministically and number from 1"""
    distinct = {(wv.answer_sets, wv.guess): wv for wv in views}.values()
    ordered = sorted(
        distinct,
        key=lambda wv: ([set_key(m) for m in sorted(wv.answer_sets, key=set_key)], guess_order(wv.guess)),
    )
    return [WorldView(wv.answer_sets, wv.guess, i) for i, wv in enumerate(ordered, 1)]


# ==================== EP AND REDUCT ====================

def epistemic_literals(gp: GroundProgram) -> FrozenSet[EpistemicLiteral]:
    """EP(gp): every enot F occurring in gp, K/M/NOT included"""
    return frozenset(EpistemicLiteral.of(l) for r in gp.all_rules for l in r.body if l.is_epistemic)


def _check_guess(gp: GroundProgram, phi: Guess) -> FrozenSet[EpistemicLiteral]:
    ep = epistemic_literals(gp)
    outside = phi.assumed - ep
    if outside:
        raise InvalidGuessError(f"guess literals not in the program: {format_atom_set(outside)}")
    return ep


def _resolve(lit: Literal, phi: Guess, mode: ReductMode, extra: Dict[Atom, Rule]) -> Optional[List[Literal]]:
    """Replacement literals for an epistemic literal, or None when the rule dies"""
    el = EpistemicLiteral.of(lit)
    if el in phi:
        # enot F is true; `not enot F` is then false
        return None if lit.form.negated_enot else []

    a = lit.atom
    if mode == ReductMode.FRESH_ATOM:
        marker = fresh_atom("xn" if el.negated else "x", a)
        return [Literal(marker, Form.NAF if lit.form.negated_enot else Form.POS)]

    if lit.form == Form.EPI or lit.form == Form.NAF_EPI_NAF:
        return [Literal(a, Form.NAF)]
    # not not A: true iff A, through an auxiliary atom defined as `not A`
    nn = fresh_atom("nn", a)
    extra.setdefault(nn, Rule(nn, (Literal(a, Form.NAF),)))
    return [Literal(nn, Form.NAF)]


def epistemic_reduct(gp: GroundProgram, phi: Guess, mode: ReductMode = ReductMode.SHEN_EITER) -> GroundProgram:
    """
    Epistemic reduct of gp with respect to a guess

    Args:
        gp: Normalized ground program
        phi: Guess, a subset of EP(gp)
        mode: SHEN_EITER replaces enot F outside phi by `not F`;
              FRESH_ATOM replaces it by an undefined fresh atom

    Returns:
        Epistemic-free ground program
    """
    _check_guess(gp, phi)
    mode = ReductMode(mode)
    extra: Dict[Atom, Rule] = {}
    rules, constraints = [], []
    for r in gp.all_rules:
        body: List[Literal] = []
        alive = True
        for lit in r.body:
            if not lit.is_epistemic:
                body.append(lit)
                continue
            replacement = _resolve(lit, phi, mode, extra)
            if replacement is None:
                alive = False
                break
            body.extend(replacement)
        if alive:
            (constraints if r.is_constraint else rules).append(Rule(r.head, tuple(dict.fromkeys(body))))
    rules.extend(extra[a] for a in sorted(extra))
    return GroundProgram(tuple(rules), tuple(constraints), gp.constants)


# ==================== CANDIDATES AND THE ORACLE ====================

def candidate_world_view(
    gp: GroundProgram,
    phi: Guess,
    mode: ReductMode = ReductMode.SHEN_EITER,
    semantics: Semantics = Semantics.AS,
) -> Optional[WorldView]:
    """
    Candidate world view produced by a guess, if the guess complies

    Args:
        gp: Normalized ground program
        phi: Guess
        mode: Reduct mode
        semantics: AS or RAS for the reduct's answer sets

    Returns:
        WorldView when the family is nonempty and every enot F is true exactly
        when assumed; otherwise None
    """
    ep = _check_guess(gp, phi)
    reduct = epistemic_reduct(gp, phi, mode)
    family = frozenset(project(m) for m in answer_sets_for(semantics)(reduct))
    if not family:
        return None
    for el in ep:
        if el.true_in(family) != (el in phi):
            return None
    return WorldView(family, phi)


def world_views_oracle(
    gp: GroundProgram,
    mode: ReductMode = ReductMode.SHEN_EITER,
    semantics: Semantics = Semantics.AS,
    cap: Optional[int] = None,
) -> List[WorldView]:
    """
    Brute-force world views: every guess, keeping candidates with a maximal guess

    Args:
        gp: Normalized ground program
        mode: Reduct mode
        semantics: AS or RAS
        cap: Max |EP| (default: settings.oracle_cap)

    Returns:
        World views sorted and numbered
    """
    cap = get_settings().oracle_cap if cap is None else cap
    ep = sorted(epistemic_literals(gp))
    if len(ep) > cap:
        raise CapacityError("world view oracle guess space", len(ep), cap)

    candidates: List[WorldView] = []
    for size in range(len(ep) + 1):
        for combo in itertools.combinations(ep, size):
            wv = candidate_world_view(gp, Guess(frozenset(combo)), mode, semantics)
            if wv is not None:
                candidates.append(wv)
    logger.debug("oracle: %d candidates over %d guesses", len(candidates), 2 ** len(ep))
    return finalize_world_views(
        wv for wv in candidates if not any(wv.guess < other.guess for other in candidates)
    )


# ==================== SIMPLIFIED VERSION ====================

class Occurrence(str, Enum):
    CYCLIC = "cyclic"
    INDEPENDENT = "independent"


@dataclass(frozen=True)
class SimplifiedVersion:
    """
    The simplified program plus how to read its answer sets back

    `decoding` maps each EP literal to (CYCLIC, X): assumed when X is false,
    or to (INDEPENDENT, NX): assumed when NX is true.
    """

    program: GroundProgram
    decoding: Dict[EpistemicLiteral, Tuple[Occurrence, Atom]]
    negated_enots: FrozenSet[EpistemicLiteral]

    @property
    def head_count(self) -> int:
        return len(self.program.head_atoms())

    def scenario_of(self, m: Interpretation) -> Scenario:
        positive = set()
        for el, (kind, atom) in self.decoding.items():
            if (kind == Occurrence.CYCLIC) == (atom not in m):
                positive.add(el)
        return Scenario(frozenset(positive), frozenset(self.negated_enots - positive))


def _even_cycle(x: Atom, y: Atom) -> List[Rule]:
    return [Rule(x, (Literal(y, Form.NAF),)), Rule(y, (Literal(x, Form.NAF),))]


def simplified_version(gp: GroundProgram) -> SimplifiedVersion:
    """
    Program exposing the cycles among epistemic literals

    `enot not A` stands for `enot A'` with A' fresh; rules without epistemic
    literals go away; each remaining non-epistemic conjunction becomes a free
    fresh atom; epistemic literals over atoms that head a remaining rule become
    `not X`, the others a free fresh atom NX.

    Args:
        gp: Normalized ground program with epistemic literals

    Returns:
        SimplifiedVersion
    """
    ep = epistemic_literals(gp)
    if not ep:
        raise PreconditionError("program has no epistemic literals; it has a unique world view")

    def carrier(el: EpistemicLiteral) -> Atom:
        return fresh_atom("p", el.atom) if el.negated else el.atom

    negated_enots = frozenset(
        EpistemicLiteral.of(l) for r in gp.all_rules for l in r.body if l.form.negated_enot
    )
    epistemic_rules = [r for r in gp.rules if r.has_epistemic]
    heads = {r.head for r in epistemic_rules}

    decoding: Dict[EpistemicLiteral, Tuple[Occurrence, Atom]] = {}
    out: List[Rule] = []
    for el in sorted(ep):
        x = carrier(el)
        if x in heads and el not in negated_enots:
            decoding[el] = (Occurrence.CYCLIC, x)
        else:
            nx = fresh_atom("np" if el.negated else "n", el.atom)
            decoding[el] = (Occurrence.INDEPENDENT, nx)
            free = x if x not in heads else fresh_atom("h", x)
            out.extend(_even_cycle(free, nx))

    def rewrite(lit: Literal) -> Literal:
        kind, atom = decoding[EpistemicLiteral.of(lit)]
        if kind == Occurrence.CYCLIC:
            return Literal(atom, Form.NAF)
        return Literal(atom, Form.NAF if lit.form.negated_enot else Form.POS)

    def conjunction_atom(k: int) -> Atom:
        a_rho, no_a_rho = fresh_atom(f"r{k}"), fresh_atom(f"nor{k}")
        out.extend(_even_cycle(a_rho, no_a_rho))
        return a_rho

    counter = itertools.count(1)
    for r in epistemic_rules:
        body = [rewrite(l) for l in r.body if l.is_epistemic]
        if any(not l.is_epistemic for l in r.body):
            body.append(Literal(conjunction_atom(next(counter))))
        out.append(Rule(r.head, tuple(dict.fromkeys(body))))

    cyclic_heads = {atom for kind, atom in decoding.values() if kind == Occurrence.CYCLIC}
    for r in gp.rules:
        if r.has_epistemic or r.head not in cyclic_heads:
            continue
        body = (Literal(conjunction_atom(next(counter))),) if r.body else ()
        out.append(Rule(r.head, body))

    program = GroundProgram(tuple(dict.fromkeys(out)), (), gp.constants)
    logger.debug("simplified version: %d rules, %d heads", len(program.rules), len(program.head_atoms()))
    return SimplifiedVersion(program, decoding, negated_enots)


# ==================== SCENARIOS ====================

def epistemic_scenarios(gp: GroundProgram) -> List[Scenario]:
    """
    One scenario per answer set of the simplified version, deduplicated

    Args:
        gp: Normalized ground program with epistemic literals

    Returns:
        Scenarios, larger positive parts first
    """
    sv = simplified_version(gp)
    seen: Dict[FrozenSet[EpistemicLiteral], Scenario] = {}
    for m in answer_sets_as(sv.program):
        scenario = sv.scenario_of(m)
        seen.setdefault(scenario.positive, scenario)
    return sorted(seen.values(), key=lambda s: guess_order(s.guess))


def maximal_scenarios(scenarios: Iterable[Scenario]) -> List[Scenario]:
    """Scenarios whose positive part is ⊆-maximal"""
    items = list(scenarios)
    return [s for s in items if not any(s.positive < o.positive for o in items)]


# ==================== GUESS CHECKING ====================

def rascgk_check(gp: GroundProgram, phi: Guess) -> bool:
    """
    Query-based check that a guess yields a candidate world view under RAS

    The fresh-atom reduct must be consistent; then `?not A` must succeed for
    exactly the assumed `enot A`, `?A` for exactly the assumed `enot not A`,
    and the K / NOT queries behind `not enot` literals must agree.

    Args:
        gp: Normalized ground program
        phi: Guess

    Returns:
        True when every query about an assumed literal succeeds and all others fail
    """
    ep = _check_guess(gp, phi)
    reduct = epistemic_reduct(gp, phi, ReductMode.FRESH_ATOM)
    if not is_consistent(reduct):
        logger.debug("rascgk %s: reduct inconsistent", phi)
        return False

    for el in sorted(ep):
        query = Literal(el.atom, Form.POS if el.negated else Form.NAF)
        if holds_in_some(reduct, query) != (el in phi):
            logger.debug("rascgk %s: ?%s disagrees", phi, query)
            return False

    for r in gp.all_rules:
        for lit in r.body:
            if not lit.form.negated_enot:
                continue
            el = EpistemicLiteral.of(lit)
            if lit.form == Form.NAF_EPI:
                succeeded = holds_in_all(reduct, lit.atom)
            else:
                succeeded = not holds_in_some(reduct, Literal(lit.atom))
            if succeeded != (el not in phi):
                logger.debug("rascgk %s: '%s' disagrees", phi, lit)
                return False
    return True


def is_candidate(gp: GroundProgram, phi: Guess, mode: ReductMode, semantics: Semantics) -> bool:
    if Semantics(semantics) == Semantics.RAS and ReductMode(mode) == ReductMode.FRESH_ATOM:
        return rascgk_check(gp, phi)
    return candidate_world_view(gp, phi, mode, semantics) is not None


def valid_guesses(
    gp: GroundProgram,
    mode: ReductMode = ReductMode.SHEN_EITER,
    semantics: Semantics = Semantics.AS,
) -> List[Guess]:
    """
    Valid guesses found among the epistemic scenarios

    Scenario positive parts are tried from the largest down; a part contained
    in an already confirmed candidate is skipped.

    Args:
        gp: Normalized ground program
        mode: Reduct mode
        semantics: AS or RAS

    Returns:
        Valid guesses (an antichain), larger first
    """
    if not epistemic_literals(gp):
        empty = Guess()
        return [empty] if is_candidate(gp, empty, mode, semantics) else []

    confirmed: List[Guess] = []
    for scenario in epistemic_scenarios(gp):
        g = scenario.guess
        if any(g < c for c in confirmed):
            continue
        if is_candidate(gp, g, mode, semantics):
            confirmed.append(g)
    logger.debug("valid guesses: %s", ", ".join(str(g) for g in confirmed) or "none")
    return [g for g in confirmed if not any(g < c for c in confirmed)]


def world_views(
    gp: GroundProgram,
    mode: ReductMode = ReductMode.SHEN_EITER,
    semantics: Semantics = Semantics.AS,
) -> List[WorldView]:
    """
    World views through scenario-driven guess search

    Args:
        gp: Normalized ground program
        mode: Reduct mode
        semantics: AS or RAS

    Returns:
        World views sorted and numbered
    """
    views = []
    for g in valid_guesses(gp, mode, semantics):
        wv = candidate_world_view(gp, g, mode, semantics)
        if wv is not None:
            views.append(wv)
    return finalize_world_views(views)


# ==================== BOUND ====================

@dataclass(frozen=True)
class BoundReport:
    n_hat: int
    bound: float
    n_heads: int
    n_epistemic_atoms: int
    scenario_count: Optional[int] = None
    simplified_answer_sets: Optional[int] = None

    @property
    def bound_by_heads(self) -> float:
        return 3 ** (self.n_heads / 3)

    @property
    def bound_by_epistemic_atoms(self) -> float:
        return 3 ** (self.n_epistemic_atoms / 3)


def guess_count_bound(gp: GroundProgram, with_counts: bool = False) -> BoundReport:
    """
    Size quantities behind the valid-guess bound 3^(n̂/3)

    Args:
        gp: Normalized ground program
        with_counts: Also enumerate the simplified version's answer sets and scenarios

    Returns:
        BoundReport (n̂ = heads of the simplified version; 0 and bound 1 without epistemic literals)
    """
    n_heads = len(gp.head_atoms())
    ep = epistemic_literals(gp)
    n_epi = len({el.atom for el in ep})
    if not ep:
        return BoundReport(0, 1.0, n_heads, 0, 1 if with_counts else None, None)

    sv = simplified_version(gp)
    n_hat = sv.head_count
    scenario_count = answer_count = None
    if with_counts:
        answers = answer_sets_as(sv.program)
        answer_count = len(answers)
        scenario_count = len({sv.scenario_of(m).positive for m in answers})
    return BoundReport(n_hat, math.pow(3, n_hat / 3), n_heads, n_epi, scenario_count, answer_count)


# ==================== GUESS-TAILORED PROGRAMS ====================

def tailor(gp: GroundProgram, phi: Guess) -> GroundProgram:
    """
    Set the assumed epistemic literals to true and all others to false

    Args:
        gp: Normalized ground program
        phi: Guess

    Returns:
        Epistemic-free program; rules with a false literal are dropped
    """
    _check_guess(gp, phi)
    rules, constraints = [], []
    for r in gp.all_rules:
        body: List[Literal] = []
        alive = True
        for lit in r.body:
            if not lit.is_epistemic:
                body.append(lit)
                continue
            assumed = EpistemicLiteral.of(lit) in phi
            if assumed == lit.form.negated_enot:
                alive = False
                break
        if alive:
            (constraints if r.is_constraint else rules).append(Rule(r.head, tuple(body)))
    return GroundProgram(tuple(rules), tuple(constraints), gp.constants)


@dataclass(frozen=True)
class MultiViewProgram:
    """Renamed, guess-tailored copies of one program, one per guess"""

    program: GroundProgram
    guesses: Tuple[Guess, ...]
    origin: Dict[Atom, Tuple[int, Atom]]

    def copy_atom(self, index: int, atom: Atom) -> Atom:
        return fresh_atom(f"w{index}", atom)

    def copies(self) -> range:
        return range(1, len(self.guesses) + 1)


def build_multiview_program(
    gp: GroundProgram, guesses: Sequence[Guess], checked: bool = False
) -> MultiViewProgram:
    """
    Union of k standardized-apart copies, copy i tailored to guesses[i-1]

    Args:
        gp: Normalized ground program
        guesses: Valid guesses, each a subset of EP(gp)
        checked: Skip re-running the candidate check on each guess

    Returns:
        MultiViewProgram with atom A of copy i renamed to `__f_w<i>_A`
    """
    rules, constraints = [], []
    origin: Dict[Atom, Tuple[int, Atom]] = {}

    for i, phi in enumerate(guesses, 1):
        if not checked and not rascgk_check(gp, phi):
            raise InvalidGuessError(f"guess {phi} does not yield a world view")

        def rename(a: Atom) -> Atom:
            renamed = fresh_atom(f"w{i}", a)
            origin[renamed] = (i, a)
            return renamed

        for r in tailor(gp, phi).all_rules:
            head = rename(r.head) if r.head is not None else None
            renamed = Rule(head, tuple(Literal(rename(l.atom), l.form) for l in r.body))
            (constraints if r.is_constraint else rules).append(renamed)

    program = GroundProgram(tuple(rules), tuple(constraints), gp.constants)
    return MultiViewProgram(program, tuple(guesses), origin)


# ==================== GUESS PARSING ====================

def parse_guess(text: str) -> Guess:
    """
    Parse a comma-separated list of `enot A` / `enot not A` / `M A` literals

    Args:
        text: e.g. "enot guilty(john), enot not reliable(witness1,john)"

    Returns:
        Guess
    """
    text = text.strip().strip("{}").strip()
    if not text:
        return Guess()
    program = ground(parse_program(f"guess :- {text}."))
    literals = set()
    for lit in program.rules[0].body:
        if lit.form not in (Form.EPI, Form.EPI_NAF):
            raise InvalidGuessError(f"'{lit}' is not an epistemic literal enot F")
        literals.add(EpistemicLiteral.of(lit))
    return Guess(frozenset(literals))


def compute_world_views(
    gp: GroundProgram,
    method: str = "scenario",
    mode: ReductMode = ReductMode.SHEN_EITER,
    semantics: Semantics = Semantics.AS,
) -> List[WorldView]:
    """World views by scenario search or by the brute-force oracle"""
    if method == "oracle":
        return world_views_oracle(gp, mode, semantics)
    if method != "scenario":
        raise PreconditionError(f"unknown world view method '{method}'")
    return world_views(gp, mode, semantics)
