"""
Resource-based Answer Set Engine
Consistent support, maximal consistently supported sets, relevance and query primitives
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Set

from components.analysis import build_dependency_graph
from components.as_engine import (
    Interpretation,
    gamma,
    literal_holds,
    localize,
    check_partials,
    program_layers,
    require_plain,
    subsets,
    violates_constraints,
)
from components.syntax import Atom, Form, GroundProgram, Literal, Rule
from utils.config import get_settings
from utils.errors import PreconditionError
from utils.helpers import maximal_sets

logger = logging.getLogger(__name__)


class QueryMode(str, Enum):
    CONTEXTUAL = "contextual"
    INDEPENDENT = "independent"


# ==================== CONSISTENT SUPPORT ====================

@dataclass
class SupportCertificate:
    """For each supported atom, the rule that first derives it inside the set"""

    support: Dict[Atom, Rule] = field(default_factory=dict)

    def rules_for(self, atom: Atom) -> List[Rule]:
        """The support set S of atom: its rule plus, recursively, those of its positive body"""
        seen: Set[Atom] = set()
        stack = [atom]
        rules = []
        while stack:
            a = stack.pop()
            if a in seen or a not in self.support:
                continue
            seen.add(a)
            rule = self.support[a]
            rules.append(rule)
            stack.extend(rule.body_atoms(Form.POS))
        return rules


def _support_closure(rules: Sequence[Rule], m: Set[Atom]) -> SupportCertificate:
    cert = SupportCertificate()
    changed = True
    while changed:
        changed = False
        for r in rules:
            if r.head not in m or r.head in cert.support:
                continue
            if any(l.form == Form.NAF and l.atom in m for l in r.body):
                continue
            if all(a in cert.support for a in r.body_atoms(Form.POS)):
                cert.support[r.head] = r
                changed = True
    return cert


def support_certificate(gp: GroundProgram, m: Set[Atom]) -> Optional[SupportCertificate]:
    """
    Certificate that every atom of m has an acyclic derivation inside m

    Args:
        gp: Epistemic-free ground program
        m: Candidate set

    Returns:
        The certificate, or None when some atom of m is not consistently supported
    """
    require_plain(gp)
    cert = _support_closure(gp.rules, m)
    return cert if set(cert.support) == set(m) else None


def is_consistently_supported(gp: GroundProgram, m: Set[Atom]) -> bool:
    return support_certificate(gp, m) is not None


# ==================== WELL-FOUNDED MODEL ====================

@dataclass(frozen=True)
class WellFoundedModel:
    true: Interpretation
    false: Interpretation
    undefined: Interpretation


def well_founded_model(gp: GroundProgram) -> WellFoundedModel:
    """
    Alternating fixpoint: true = lfp(Γ²), false = atoms outside Γ(true)

    Args:
        gp: Epistemic-free ground program

    Returns:
        WellFoundedModel over the atoms of gp
    """
    require_plain(gp)
    true: Interpretation = frozenset()
    while True:
        possible = gamma(gp, true)
        nxt = gamma(gp, possible)
        if nxt == true:
            break
        true = nxt
    atoms = gp.atoms()
    return WellFoundedModel(true, frozenset(atoms - possible), frozenset(possible - true))


# ==================== ENUMERATION ====================

def _layer_answer_sets(layer_heads, local: List[Rule]) -> List[FrozenSet[Atom]]:
    wfm = well_founded_model(GroundProgram(tuple(local)))
    free = [a for a in layer_heads if a not in wfm.true and a not in wfm.false]
    supported = []
    for extra in subsets(free):
        candidate = wfm.true | extra
        if set(_support_closure(local, candidate).support) == candidate:
            supported.append(candidate)
    return maximal_sets(supported)


def answer_sets_ras(gp: GroundProgram, cap: Optional[int] = None) -> Set[Interpretation]:
    """
    Enumerate resource-based answer sets

    Each component layer, given the atoms fixed below it, contributes its
    ⊆-maximal consistently supported sets that agree with the layer's
    well-founded model; constraints filter the assembled sets afterwards.

    Args:
        gp: Normalized, epistemic-free ground program
        cap: Max head atoms per component layer; at most 2**cap partial
            answer sets are kept (default: settings.as_cap)

    Returns:
        Set of RAS answer sets
    """
    require_plain(gp)
    cap = get_settings().as_cap if cap is None else cap
    partials: List[FrozenSet[Atom]] = [frozenset()]
    for layer_heads, layer_rules in program_layers(gp, cap):
        layer = set(layer_heads)
        extended = []
        for lower in partials:
            local = localize(layer_rules, layer, lower)
            extended.extend(lower | s for s in _layer_answer_sets(layer_heads, local))
        check_partials(extended, cap)
        partials = extended

    result = {m for m in partials if not violates_constraints(gp, m)}
    logger.debug("RAS: %d answer sets (%d before constraints)", len(result), len(partials))
    return result


def is_consistent(gp: GroundProgram) -> bool:
    """True when some RAS answer set survives the constraints"""
    return bool(answer_sets_ras(gp))


# ==================== RELEVANCE ====================

def relevant_subprogram(gp: GroundProgram, a: Atom) -> GroundProgram:
    """
    Rules a depends on, directly or indirectly, positively or negatively

    Args:
        gp: Normalized ground program
        a: Query atom

    Returns:
        Sub-program with those rules and the constraints over retained atoms only
    """
    closure = build_dependency_graph(gp).reachable({a})
    rules = [r for r in gp.rules if r.head in closure]
    constraints = [c for c in gp.constraints if set(c.body_atoms()) <= closure]
    return GroundProgram(tuple(rules), tuple(constraints), gp.constants)


def query_scope(gp: GroundProgram, a: Atom) -> GroundProgram:
    """
    Relevant subprogram of a, widened with every constraint and its dependencies

    Constraints can eliminate answer sets anywhere, so every one of them stays in scope.
    """
    if not gp.constraints:
        return relevant_subprogram(gp, a)
    starts = {a}
    for c in gp.constraints:
        starts.update(c.body_atoms())
    closure = build_dependency_graph(gp).reachable(starts)
    rules = [r for r in gp.rules if r.head in closure]
    return GroundProgram(tuple(rules), gp.constraints, gp.constants)


def _check_query_literal(lit: Literal) -> None:
    if lit.form not in (Form.POS, Form.NAF):
        raise PreconditionError(f"query literal '{lit}' must be an atom or 'not' atom")


def holds_in_some(gp: GroundProgram, lit: Literal) -> bool:
    """
    ?A / ?not A: does some RAS answer set contain (or lack) the atom

    Args:
        gp: Normalized, epistemic-free ground program
        lit: POS or NAF literal

    Returns:
        Verdict computed on the atom's relevant subprogram only
    """
    _check_query_literal(lit)
    scope = query_scope(gp, lit.atom)
    verdict = any(literal_holds(lit, m) for m in answer_sets_ras(scope))
    logger.debug("?%s on %d rules -> %s", lit, len(scope.rules), verdict)
    return verdict


def holds_in_all(gp: GroundProgram, a: Atom) -> bool:
    """A is true in every RAS answer set (and there is at least one)"""
    return holds_in_some(gp, Literal(a)) and not holds_in_some(gp, Literal(a, Form.NAF))


# ==================== QUERY SEQUENCES ====================

class QuerySession:
    """
    Sequence of ?A / ?not A queries against one program

    In CONTEXTUAL mode each succeeding query narrows the answer sets the
    following queries are asked against.
    """

    def __init__(self, gp: GroundProgram, mode: QueryMode = QueryMode.CONTEXTUAL):
        self.gp = gp
        self.mode = QueryMode(mode)
        self._answer_sets: Optional[List[Interpretation]] = None
        self.context: Optional[List[Interpretation]] = None

    @property
    def answer_sets(self) -> List[Interpretation]:
        if self._answer_sets is None:
            self._answer_sets = sorted(answer_sets_ras(self.gp), key=lambda m: sorted(map(str, m)))
        return self._answer_sets

    def reset(self) -> None:
        self.context = None

    def ask(self, lit: Literal) -> bool:
        _check_query_literal(lit)
        if self.mode == QueryMode.INDEPENDENT:
            return holds_in_some(self.gp, lit)

        current = self.answer_sets if self.context is None else self.context
        narrowed = [m for m in current if literal_holds(lit, m)]
        if not narrowed:
            return False
        self.context = narrowed
        return True


def eval_query_sequence(gp: GroundProgram, queries: Sequence[Literal], mode: QueryMode) -> List[bool]:
    """
    Evaluate a query sequence contextually or independently

    Args:
        gp: Normalized, epistemic-free ground program
        queries: POS/NAF literals
        mode: QueryMode

    Returns:
        One verdict per query
    """
    session = QuerySession(gp, mode)
    return [session.ask(q) for q in queries]
