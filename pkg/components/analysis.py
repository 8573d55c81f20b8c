"""
Analysis Components
Dependency graphs, odd cycles, handles and the AS/RAS coincidence conditions
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

import networkx as nx

from components.syntax import Atom, Form, GroundProgram, Literal, Rule
from utils.config import get_settings

logger = logging.getLogger(__name__)


class Sign(str, Enum):
    POS = "POS"
    NEG = "NEG"


class Parity(str, Enum):
    EVEN = "EVEN"
    ODD = "ODD"


class HandleKind(str, Enum):
    IN_CYCLE_RULE = "IN_CYCLE_RULE"
    EXTERNAL_RULE = "EXTERNAL_RULE"


Edge = Tuple[Atom, Atom, Sign]


# ==================== DEPENDENCY GRAPH ====================

@dataclass(frozen=True)
class DependencyGraph:
    """Head-to-body dependency edges; epistemic literals contribute none"""

    nodes: FrozenSet[Atom]
    edges: FrozenSet[Edge]
    program: GroundProgram = field(default_factory=GroundProgram, compare=False, repr=False)

    @cached_property
    def digraph(self) -> nx.DiGraph:
        """networkx view; parallel POS/NEG edges share one arc with a `signs` attribute"""
        g = nx.DiGraph()
        g.add_nodes_from(sorted(self.nodes))
        signs: Dict[Tuple[Atom, Atom], Set[Sign]] = {}
        for a, b, s in self.edges:
            signs.setdefault((a, b), set()).add(s)
        for (a, b), found in sorted(signs.items()):
            g.add_edge(a, b, signs=tuple(sorted(found)))
        return g

    def successors(self, atom: Atom) -> List[Tuple[Atom, Sign]]:
        return sorted((b, s) for a, b, s in self.edges if a == atom)

    def adjacency(self) -> Dict[Atom, List[Tuple[Atom, Sign]]]:
        adj: Dict[Atom, List[Tuple[Atom, Sign]]] = {n: [] for n in self.nodes}
        for a, b, s in self.edges:
            adj[a].append((b, s))
        for targets in adj.values():
            targets.sort()
        return adj

    def reachable(self, starts: Iterable[Atom]) -> Set[Atom]:
        """Atoms reachable from starts (starts included)"""
        seen: Set[Atom] = set()
        for a in starts:
            if a in self.digraph and a not in seen:
                seen.add(a)
                seen |= nx.descendants(self.digraph, a)
        return seen


def build_dependency_graph(gp: GroundProgram) -> DependencyGraph:
    """
    Build the signed atom dependency graph of a ground program

    Args:
        gp: Normalized ground program

    Returns:
        DependencyGraph with an edge head -> B (POS) or head -> B (NEG) per body literal
    """
    nodes: Set[Atom] = set()
    edges: Set[Edge] = set()
    for r in gp.all_rules:
        if r.head is not None:
            nodes.add(r.head)
        for lit in r.body:
            if lit.is_epistemic:
                continue
            nodes.add(lit.atom)
            if r.head is not None:
                sign = Sign.POS if lit.form == Form.POS else Sign.NEG
                edges.add((r.head, lit.atom, sign))
    return DependencyGraph(frozenset(nodes), frozenset(edges), gp)


def strongly_connected_components(g: DependencyGraph) -> List[FrozenSet[Atom]]:
    """
    Strongly connected components of the dependency graph

    Returns:
        Components ordered so that every component comes after the ones it depends on
    """
    condensed = nx.condensation(g.digraph)
    # arcs run from a head to its body atoms, so dependencies are topologically last
    order = reversed(list(nx.topological_sort(condensed)))
    return [frozenset(condensed.nodes[c]["members"]) for c in order]


# ==================== CYCLES AND HANDLES ====================

@dataclass(frozen=True)
class Cycle:
    """Simple cycle; signs[i] labels the edge atoms[i] -> atoms[i+1] (wrapping)"""

    atoms: Tuple[Atom, ...]
    signs: Tuple[Sign, ...]

    @property
    def parity(self) -> Parity:
        negatives = sum(1 for s in self.signs if s == Sign.NEG)
        return Parity.ODD if negatives % 2 else Parity.EVEN

    @property
    def is_odd(self) -> bool:
        return self.parity == Parity.ODD

    def edges(self) -> List[Edge]:
        n = len(self.atoms)
        return [(self.atoms[i], self.atoms[(i + 1) % n], self.signs[i]) for i in range(n)]

    def rotated(self, k: int) -> "Cycle":
        k %= len(self.atoms)
        return Cycle(self.atoms[k:] + self.atoms[:k], self.signs[k:] + self.signs[:k])

    def __str__(self) -> str:
        return "[" + ", ".join(str(a) for a in self.atoms) + f"] ({self.parity.value})"


@dataclass(frozen=True)
class Handle:
    """Literals that can switch an odd cycle off"""

    kind: HandleKind
    rule: Rule
    literals: Tuple[Literal, ...]

    @property
    def atoms(self) -> FrozenSet[Atom]:
        return frozenset(l.atom for l in self.literals)


@dataclass
class CycleReport:
    cycles: List[Cycle] = field(default_factory=list)
    handles: Dict[Cycle, List[Handle]] = field(default_factory=dict)
    truncated: bool = False

    @property
    def odd_cycles(self) -> List[Cycle]:
        return [c for c in self.cycles if c.is_odd]

    @property
    def even_cycles(self) -> List[Cycle]:
        return [c for c in self.cycles if not c.is_odd]

    def handle_atoms(self, cycle: Cycle) -> Set[Atom]:
        found: Set[Atom] = set()
        for h in self.handles.get(cycle, []):
            found |= h.atoms
        return found


def _signed_cycles(g: DependencyGraph, atoms: List[Atom]) -> Iterator[Cycle]:
    """One Cycle per choice of sign on each arc of a node cycle, starting from its least atom"""
    k = atoms.index(min(atoms))
    atoms = atoms[k:] + atoms[:k]
    n = len(atoms)
    arcs = [g.digraph.edges[atoms[i], atoms[(i + 1) % n]]["signs"] for i in range(n)]
    for signs in itertools.product(*arcs):
        yield Cycle(tuple(atoms), tuple(signs))


def _enumerate_cycles(g: DependencyGraph, limit: int) -> Tuple[List[Cycle], bool]:
    """Simple cycles up to limit; the flag reports whether more were left"""
    cycles: List[Cycle] = []
    for atoms in nx.simple_cycles(g.digraph):
        for cycle in _signed_cycles(g, atoms):
            if len(cycles) >= limit:
                logger.warning("cycle enumeration stopped after %d cycles", limit)
                return sorted(cycles, key=_cycle_key), True
            cycles.append(cycle)
    return sorted(cycles, key=_cycle_key), False


def _cycle_key(c: Cycle) -> Tuple[int, Tuple[str, ...], Tuple[str, ...]]:
    return (len(c.atoms), tuple(map(str, c.atoms)), tuple(s.value for s in c.signs))


def _handles_for(cycle: Cycle, rules: Iterable[Rule]) -> List[Handle]:
    members = set(cycle.atoms)
    handles: List[Handle] = []
    for head, target, sign in cycle.edges():
        edge_lit = Literal(target, Form.POS if sign == Sign.POS else Form.NAF)
        for r in rules:
            if r.head != head or edge_lit not in r.body:
                continue
            rest = tuple(l for l in r.body if l != edge_lit and not l.is_epistemic)
            if rest:
                handles.append(Handle(HandleKind.IN_CYCLE_RULE, r, rest))
    for r in rules:
        if r.head not in members:
            continue
        plain = tuple(l for l in r.body if not l.is_epistemic)
        if not any(l.atom in members for l in plain):
            handles.append(Handle(HandleKind.EXTERNAL_RULE, r, plain))
    return list(dict.fromkeys(handles))


def find_cycles(g: DependencyGraph, limit: Optional[int] = None) -> CycleReport:
    """
    Enumerate simple cycles and the handles of the odd ones

    Args:
        g: Dependency graph
        limit: Max cycles to enumerate (default: settings.cycle_limit)

    Returns:
        CycleReport; `truncated` is set when the limit cut enumeration short
    """
    limit = get_settings().cycle_limit if limit is None else limit
    cycles, truncated = _enumerate_cycles(g, limit)
    report = CycleReport(cycles=cycles, truncated=truncated)
    for c in report.odd_cycles:
        report.handles[c] = _handles_for(c, g.program.rules)
    logger.debug("found %d cycles (%d odd)", len(cycles), len(report.odd_cycles))
    return report


# ==================== COINCIDENCE CONDITIONS ====================

@dataclass
class CoincidenceReport:
    call_consistent: bool
    condition1: bool
    condition2: bool
    witnesses: List[str] = field(default_factory=list)
    cycles: Optional[CycleReport] = field(default=None, repr=False)

    @property
    def coincidence_guaranteed(self) -> bool:
        return self.call_consistent or self.condition1 or self.condition2


def is_call_consistent(g: DependencyGraph) -> bool:
    """
    Exact odd-cycle test by parity labelling inside each component

    A component admits a labelling with NEG edges flipping the label and POS
    edges keeping it iff all its cycles are even.
    """
    adj = g.adjacency()
    for component in strongly_connected_components(g):
        root = min(component)
        label: Dict[Atom, int] = {root: 0}
        stack = [root]
        while stack:
            node = stack.pop()
            for succ, sign in adj[node]:
                if succ not in component:
                    continue
                expected = label[node] ^ (1 if sign == Sign.NEG else 0)
                if succ not in label:
                    label[succ] = expected
                    stack.append(succ)
                elif label[succ] != expected:
                    return False
    return True


def _condition1(g: DependencyGraph, report: CycleReport, witnesses: List[str]) -> bool:
    holds = True
    for cycle in report.odd_cycles:
        reach = g.reachable(report.handle_atoms(cycle))
        for other in report.cycles:
            if other == cycle:
                continue
            shared = reach & set(other.atoms)
            if shared:
                holds = False
                witnesses.append(
                    f"condition1: handle of {cycle} reaches {', '.join(sorted(map(str, shared)))} in cycle {other}"
                )
            if other.is_odd:
                shared = reach & report.handle_atoms(other)
                if shared:
                    holds = False
                    witnesses.append(
                        f"condition1: handle of {cycle} reaches handle atoms "
                        f"{', '.join(sorted(map(str, shared)))} of {other}"
                    )
    return holds


def _condition2(gp: GroundProgram, report: CycleReport, witnesses: List[str]) -> bool:
    holds = True
    for cycle in report.odd_cycles:
        members = set(cycle.atoms)
        for atom in sorted(report.handle_atoms(cycle)):
            places = []
            for r in gp.rules:
                if r.head not in members and atom in r.body_atoms():
                    places.append(f"body of '{r}'")
                if r.head == atom and r.body:
                    places.append(f"head of '{r}'")
            places.extend(f"constraint '{c}'" for c in gp.constraints if atom in c.body_atoms())
            if places:
                holds = False
                witnesses.append(f"condition2: handle atom {atom} of {cycle} occurs in {places[0]}")
    return holds


def check_coincidence(gp: GroundProgram, limit: Optional[int] = None) -> CoincidenceReport:
    """
    Evaluate the sufficient syntactic conditions for AS and RAS to coincide

    Args:
        gp: Normalized ground program
        limit: Cycle enumeration limit (default: settings.cycle_limit)

    Returns:
        CoincidenceReport (advisory: the conditions are sufficient, not necessary)
    """
    g = build_dependency_graph(gp)
    report = find_cycles(g, limit)
    call_consistent = is_call_consistent(g)
    witnesses: List[str] = []

    if call_consistent:
        return CoincidenceReport(True, True, True, witnesses, report)

    if report.truncated:
        witnesses.append("cycle enumeration truncated; conditions not evaluated")
        return CoincidenceReport(False, False, False, witnesses, report)

    for cycle in report.odd_cycles:
        witnesses.append(f"odd cycle {cycle}")
    condition1 = _condition1(g, report, witnesses)
    condition2 = _condition2(gp, report, witnesses)
    return CoincidenceReport(False, condition1, condition2, witnesses, report)
