"""
Answer Set Engine
Gelfond-Lifschitz reduct, least models, the Γ operator and answer-set enumeration
"""

import itertools
import logging
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Sized, Tuple

from components.analysis import build_dependency_graph, strongly_connected_components
from components.syntax import Atom, Form, GroundProgram, Literal, Rule
from utils.config import get_settings
from utils.errors import CapacityError, EpistemicLiteralError, PreconditionError

logger = logging.getLogger(__name__)

Interpretation = FrozenSet[Atom]
# A GroundProgram whose bodies hold POS literals only
PositiveProgram = GroundProgram


# ==================== BASIC CHECKS ====================

def require_plain(gp: GroundProgram) -> None:
    """Raise EpistemicLiteralError unless gp is epistemic-free"""
    for r in gp.all_rules:
        if r.has_epistemic:
            raise EpistemicLiteralError(f"epistemic literal in '{r}'; apply the epistemic reduct first")


def literal_holds(lit: Literal, i: Set[Atom]) -> bool:
    if lit.form == Form.POS:
        return lit.atom in i
    if lit.form == Form.NAF:
        return lit.atom not in i
    raise EpistemicLiteralError(f"cannot evaluate epistemic literal '{lit}' in one interpretation")


def body_holds(body: Iterable[Literal], i: Set[Atom]) -> bool:
    return all(literal_holds(l, i) for l in body)


def violates_constraints(gp: GroundProgram, i: Set[Atom]) -> bool:
    return any(body_holds(c.body, i) for c in gp.constraints)


def is_model(gp: GroundProgram, i: Set[Atom]) -> bool:
    """No rule has a true body and a false head, and no constraint body is true"""
    for r in gp.rules:
        if r.head not in i and body_holds(r.body, i):
            return False
    return not violates_constraints(gp, i)


def is_supported(gp: GroundProgram, i: Set[Atom]) -> bool:
    """Every atom of i heads a rule whose body is true in i"""
    return all(any(body_holds(r.body, i) for r in gp.rules_for(a)) for a in i)


# ==================== REDUCT AND FIXPOINT ====================

def gl_reduct(gp: GroundProgram, i: Set[Atom]) -> PositiveProgram:
    """
    Gelfond-Lifschitz reduct of the rules of gp with respect to i

    Args:
        gp: Epistemic-free ground program
        i: Interpretation

    Returns:
        Positive program: rules with `not A`, A in i, removed; remaining NAF literals stripped
    """
    require_plain(gp)
    reduced = []
    for r in gp.rules:
        if any(l.form == Form.NAF and l.atom in i for l in r.body):
            continue
        reduced.append(Rule(r.head, tuple(l for l in r.body if l.form == Form.POS)))
    return GroundProgram(tuple(reduced), (), gp.constants)


def least_model(pp: PositiveProgram) -> Interpretation:
    """
    Least fixpoint of the immediate consequence operator

    Args:
        pp: Positive program

    Returns:
        The least Herbrand model
    """
    if any(l.form != Form.POS for r in pp.rules for l in r.body):
        raise PreconditionError("least_model expects a positive program")
    model: Set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for r in pp.rules:
            if r.head not in model and all(l.atom in model for l in r.body):
                model.add(r.head)
                changed = True
    return frozenset(model)


def gamma(gp: GroundProgram, i: Set[Atom]) -> Interpretation:
    """Γ(i): least model of the reduct of gp with respect to i"""
    return least_model(gl_reduct(gp, i))


# ==================== LAYERED ENUMERATION ====================

Layer = Tuple[Tuple[Atom, ...], Tuple[Rule, ...]]


def program_layers(gp: GroundProgram, cap: Optional[int] = None) -> List[Layer]:
    """
    Split the rules of gp along strongly connected components

    Args:
        gp: Epistemic-free ground program
        cap: Max head atoms per layer (default: settings.as_cap)

    Returns:
        (head atoms, rules) per component, lower layers first
    """
    cap = get_settings().as_cap if cap is None else cap
    heads = gp.head_atoms()
    layers: List[Layer] = []
    for component in strongly_connected_components(build_dependency_graph(gp)):
        layer_heads = tuple(sorted(component & heads))
        if not layer_heads:
            continue
        if len(layer_heads) > cap:
            raise CapacityError("answer set enumeration layer", len(layer_heads), cap)
        layer_rules = tuple(r for r in gp.rules if r.head in component)
        layers.append((layer_heads, layer_rules))
    logger.debug("program split into %d layers", len(layers))
    return layers


def localize(rules: Sequence[Rule], layer: Set[Atom], lower: Set[Atom]) -> List[Rule]:
    """
    Evaluate the literals over atoms outside the layer against the lower assignment

    Returns:
        Rules whose body mentions layer atoms only; rules with a false lower literal are dropped
    """
    local = []
    for r in rules:
        body = []
        alive = True
        for lit in r.body:
            if lit.atom in layer:
                body.append(lit)
            elif not literal_holds(lit, lower):
                alive = False
                break
        if alive:
            local.append(Rule(r.head, tuple(body)))
    return local


def subsets(atoms: Sequence[Atom]) -> Iterator[FrozenSet[Atom]]:
    for size in range(len(atoms) + 1):
        for combo in itertools.combinations(atoms, size):
            yield frozenset(combo)


def _stable_in_layer(local: Sequence[Rule], candidate: FrozenSet[Atom]) -> bool:
    reduced = [
        Rule(r.head, tuple(l for l in r.body if l.form == Form.POS))
        for r in local
        if not any(l.form == Form.NAF and l.atom in candidate for l in r.body)
    ]
    return least_model(GroundProgram(tuple(reduced))) == candidate


def check_partials(partials: Sized, cap: int) -> None:
    """At most 2**cap partial answer sets, the space of a whole-program search over cap head atoms"""
    if len(partials) > 2 ** cap:
        raise CapacityError("partial answer sets", len(partials), 2 ** cap)


def answer_sets_as(gp: GroundProgram, cap: Optional[int] = None) -> Set[Interpretation]:
    """
    Enumerate the answer sets of an epistemic-free program

    Args:
        gp: Normalized, epistemic-free ground program
        cap: Max head atoms per component layer; at most 2**cap partial
            answer sets are kept (default: settings.as_cap)

    Returns:
        All I with Γ(I) = I that violate no constraint
    """
    require_plain(gp)
    cap = get_settings().as_cap if cap is None else cap
    partials: List[FrozenSet[Atom]] = [frozenset()]
    for layer_heads, layer_rules in program_layers(gp, cap):
        layer = set(layer_heads)
        extended = []
        for lower in partials:
            local = localize(layer_rules, layer, lower)
            for candidate in subsets(layer_heads):
                if _stable_in_layer(local, candidate):
                    extended.append(lower | candidate)
        check_partials(extended, cap)
        partials = extended
        if not partials:
            break

    result = {m for m in partials if not violates_constraints(gp, m)}
    logger.debug("AS: %d answer sets (%d before constraints)", len(result), len(partials))
    return result
