"""
Syntax Components
AST, parsing, printing, grounding and normalization of epistemic logic programs
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from utils.errors import ElpError, GroundingError, ProgramSyntaxError
from utils.helpers import FRESH_PREFIX

logger = logging.getLogger(__name__)


# ==================== AST ====================

def is_variable(term: str) -> bool:
    """Variables begin with an uppercase letter"""
    return term[:1].isupper()


@dataclass(frozen=True, order=True)
class Atom:
    """Predicate applied to constants and variables"""

    predicate: str
    args: Tuple[str, ...] = ()

    @property
    def is_ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    @property
    def variables(self) -> FrozenSet[str]:
        return frozenset(a for a in self.args if is_variable(a))

    @property
    def is_fresh(self) -> bool:
        return self.predicate.startswith(FRESH_PREFIX)

    def substitute(self, binding: Dict[str, str]) -> "Atom":
        return Atom(self.predicate, tuple(binding.get(a, a) for a in self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(self.args)})"


class Form(str, Enum):
    """The six literal forms; prefix strings compose n=not, e=enot"""

    POS = ""
    NAF = "n"
    EPI = "e"
    EPI_NAF = "en"
    NAF_EPI = "ne"
    NAF_EPI_NAF = "nen"

    @property
    def is_epistemic(self) -> bool:
        return "e" in self.value

    @property
    def enot_of_naf(self) -> bool:
        """True when the inner enot applies to `not A` (M and NOT forms)"""
        return self.value.endswith("en")

    @property
    def negated_enot(self) -> bool:
        """True when the enot literal sits under an outer `not` (K and NOT forms)"""
        return self.value.startswith("ne")


PREFIX_CODES = {"not": "n", "enot": "e", "K": "ne", "M": "en", "NOT": "nen"}

# Printing re-sugars the nested forms
_SUGAR = {
    Form.POS: "",
    Form.NAF: "not ",
    Form.EPI: "enot ",
    Form.EPI_NAF: "M ",
    Form.NAF_EPI: "K ",
    Form.NAF_EPI_NAF: "NOT ",
}


@dataclass(frozen=True, order=True)
class Literal:
    """An atom under one of the six literal forms"""

    atom: Atom
    form: Form = Form.POS

    @property
    def is_epistemic(self) -> bool:
        return self.form.is_epistemic

    def substitute(self, binding: Dict[str, str]) -> "Literal":
        return Literal(self.atom.substitute(binding), self.form)

    def __str__(self) -> str:
        return f"{_SUGAR[self.form]}{self.atom}"


@dataclass(frozen=True)
class Rule:
    """`head :- body.`; a missing head makes the rule a constraint"""

    head: Optional[Atom]
    body: Tuple[Literal, ...] = ()

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.body

    @property
    def is_ground(self) -> bool:
        return not self.variables

    @property
    def variables(self) -> FrozenSet[str]:
        found: Set[str] = set(self.head.variables) if self.head else set()
        for lit in self.body:
            found |= lit.atom.variables
        return frozenset(found)

    @property
    def has_epistemic(self) -> bool:
        return any(l.is_epistemic for l in self.body)

    def body_atoms(self, *forms: Form) -> List[Atom]:
        """Atoms of body literals, optionally restricted to the given forms"""
        return [l.atom for l in self.body if not forms or l.form in forms]

    def substitute(self, binding: Dict[str, str]) -> "Rule":
        head = self.head.substitute(binding) if self.head else None
        return Rule(head, tuple(l.substitute(binding) for l in self.body))

    def __str__(self) -> str:
        body = ", ".join(str(l) for l in self.body)
        if self.head is None:
            return f":- {body}."
        if not body:
            return f"{self.head}."
        return f"{self.head} :- {body}."


@dataclass(frozen=True)
class Program:
    """Rules with heads, constraints kept as a separate layer, and the constants seen"""

    rules: Tuple[Rule, ...] = ()
    constraints: Tuple[Rule, ...] = ()
    constants: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if any(r.is_constraint for r in self.rules):
            raise ValueError("headless rule stored among rules")
        if any(not c.is_constraint for c in self.constraints):
            raise ValueError("rule with head stored among constraints")

    @property
    def all_rules(self) -> Tuple[Rule, ...]:
        return self.rules + self.constraints

    @property
    def is_ground(self) -> bool:
        return all(r.is_ground for r in self.all_rules)

    def head_atoms(self) -> FrozenSet[Atom]:
        return frozenset(r.head for r in self.rules)

    def atoms(self) -> FrozenSet[Atom]:
        found: Set[Atom] = set(self.head_atoms())
        for r in self.all_rules:
            found.update(l.atom for l in r.body)
        return frozenset(found)

    def has_epistemic(self) -> bool:
        return any(r.has_epistemic for r in self.all_rules)

    def rules_for(self, atom: Atom) -> List[Rule]:
        return [r for r in self.rules if r.head == atom]

    def same_rules(self, other: "Program") -> bool:
        """Equality up to rule order"""
        return set(self.rules) == set(other.rules) and set(self.constraints) == set(other.constraints)

    def with_rules(self, rules: Iterable[Rule], constraints: Optional[Iterable[Rule]] = None) -> "Program":
        """Same kind of program with new rules; constants are kept"""
        return type(self)(
            tuple(rules),
            tuple(self.constraints if constraints is None else constraints),
            self.constants,
        )


@dataclass(frozen=True)
class GroundProgram(Program):
    """A variable-free program; every engine consumes this form"""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_ground:
            raise ValueError("GroundProgram contains variables")


def fresh_atom(tag: str, base: Optional[Atom] = None) -> Atom:
    """
    Build a reserved atom that user syntax can never produce

    Args:
        tag: Short purpose tag (e.g., "n", "r3")
        base: Atom the fresh atom stands for, if any

    Returns:
        Atom named `__f_<tag>` or `__f_<tag>_<predicate>` keeping base's args
    """
    if base is None:
        return Atom(f"{FRESH_PREFIX}{tag}")
    return Atom(f"{FRESH_PREFIX}{tag}_{base.predicate}", base.args)


# ==================== PARSING ====================

ATOM_GRAMMAR = r"""
    atom: IDENT "(" terms ")"
        | IDENT
    terms: term ("," term)*
    ?term: IDENT -> const
         | VARIABLE -> var

    IDENT: /[a-z][A-Za-z0-9_]*/
    VARIABLE: /[A-Z][A-Za-z0-9_]*/
    COMMENT: /%[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

PROGRAM_GRAMMAR = r"""
    start: statement*
    ?statement: rule | constraint
    rule: atom ":-" body "."
        | atom "."
    constraint: ":-" body "."
    body: literal ("," literal)*
    literal: prefix* atom
    prefix: NAF | ENOT | KOP | MOP | NOTOP

    NAF: "not"
    ENOT: "enot"
    KOP: "K"
    MOP: "M"
    NOTOP: "NOT"
""" + ATOM_GRAMMAR


class AtomBuilder(Transformer):
    """Shared transformer callbacks for atoms and terms"""

    def const(self, children):
        return str(children[0])

    def var(self, children):
        return str(children[0])

    def terms(self, children):
        return tuple(children)

    def atom(self, children):
        args = children[1] if len(children) > 1 else ()
        return Atom(str(children[0]), tuple(args))


class ProgramBuilder(AtomBuilder):
    """Turns the parse tree into a Program, desugaring K/M/NOT"""

    def prefix(self, children):
        return children[0]

    def literal(self, children):
        *prefixes, atom = children
        code = "".join(PREFIX_CODES[str(p)] for p in prefixes)
        try:
            form = Form(code)
        except ValueError:
            token: Token = prefixes[0]
            raise ProgramSyntaxError(
                f"unsupported nesting '{' '.join(str(p) for p in prefixes)} {atom}'",
                token.line,
                token.column,
            ) from None
        return Literal(atom, form)

    def body(self, children):
        return tuple(children)

    def rule(self, children):
        body = children[1] if len(children) > 1 else ()
        return Rule(children[0], body)

    def constraint(self, children):
        return Rule(None, children[0])

    def start(self, children):
        rules = tuple(r for r in children if not r.is_constraint)
        constraints = tuple(r for r in children if r.is_constraint)
        constants = set()
        for r in children:
            atoms = ([r.head] if r.head else []) + [l.atom for l in r.body]
            for a in atoms:
                constants.update(t for t in a.args if not is_variable(t))
        return Program(rules, constraints, frozenset(constants))


_program_parser = Lark(PROGRAM_GRAMMAR, parser="lalr", start="start")


def run_parser(parser: Lark, builder: Transformer, text: str, error_cls=ProgramSyntaxError):
    """
    Parse text and transform it, mapping lark failures to toolkit errors

    Args:
        parser: Compiled lark parser
        builder: Transformer producing the AST
        text: Source text
        error_cls: ProgramSyntaxError subclass to raise

    Returns:
        The transformed AST
    """
    try:
        tree = parser.parse(text)
    except UnexpectedEOF as exc:
        lines = text.splitlines() or [""]
        raise error_cls("unexpected end of input", len(lines), len(lines[-1]) + 1) from None
    except UnexpectedInput as exc:
        raise error_cls(f"unexpected input {exc.get_context(text).strip()!r}", exc.line, exc.column) from None

    try:
        return builder.transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, ElpError):
            raise exc.orig_exc from None
        raise


def parse_program(text: str) -> Program:
    """
    Parse program text into an AST

    Args:
        text: Rules, one per `.`, with `%` comments

    Returns:
        Program with K/M/NOT desugared into the six literal forms
    """
    program = run_parser(_program_parser, ProgramBuilder(), text)
    logger.debug("parsed %d rules and %d constraints", len(program.rules), len(program.constraints))
    return program


# ==================== PRINTING ====================

def print_program(gp: Program) -> str:
    """
    Print a program in canonical surface syntax

    Args:
        gp: Program to print

    Returns:
        One rule per line, constraints last; "" for the empty program
    """
    lines = [str(r) for r in gp.all_rules]
    return "\n".join(lines) + ("\n" if lines else "")


# ==================== GROUNDING ====================

def _possible_atoms(instances: Sequence[Rule]) -> Set[Atom]:
    """Atoms derivable when every negative or epistemic condition is ignored"""
    possible: Set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for r in instances:
            if r.head in possible:
                continue
            if all(a in possible for a in r.body_atoms(Form.POS)):
                possible.add(r.head)
                changed = True
    return possible


def ground(p: Program) -> GroundProgram:
    """
    Instantiate every rule with every substitution of its variables by constants

    Instances of non-ground rules whose positive body mentions an atom no rule
    can derive are discarded; ground rules pass through unchanged.

    Args:
        p: Program, possibly with variables

    Returns:
        The ground program
    """
    if isinstance(p, GroundProgram):
        return p

    constants = sorted(p.constants)
    instances: List[Tuple[Rule, bool]] = []
    for r in p.all_rules:
        variables = sorted(r.variables)
        if not variables:
            instances.append((r, False))
            continue
        if not constants:
            raise GroundingError(f"rule '{r}' has variables but the program has no constants")
        for values in itertools.product(constants, repeat=len(variables)):
            instances.append((r.substitute(dict(zip(variables, values))), True))

    possible = _possible_atoms([r for r, _ in instances if not r.is_constraint])
    kept = [
        r for r, generated in instances
        if not generated or all(a in possible for a in r.body_atoms(Form.POS))
    ]
    kept = list(dict.fromkeys(kept))
    logger.debug("grounding produced %d instances, kept %d", len(instances), len(kept))

    return GroundProgram(
        tuple(r for r in kept if not r.is_constraint),
        tuple(r for r in kept if r.is_constraint),
        p.constants,
    )


# ==================== NORMALIZATION ====================

def _normalize_body(body: Tuple[Literal, ...], heads: FrozenSet[Atom]) -> Optional[Tuple[Literal, ...]]:
    """Normalized body, or None when the rule can never fire"""
    naf_atoms = {l.atom for l in body if l.form == Form.NAF}
    out: List[Literal] = []
    for lit in dict.fromkeys(body):
        if lit.form == Form.EPI and lit.atom in naf_atoms:
            continue
        if lit.is_epistemic and lit.atom not in heads:
            # K A and M A are false when A heads no rule; enot A and NOT A are true
            if lit.form in (Form.NAF_EPI, Form.EPI_NAF):
                return None
            continue
        out.append(lit)
    return tuple(out)


def normalize(gp: GroundProgram) -> GroundProgram:
    """
    Apply the enot/not exclusivity and the no-head simplifications to a fixpoint

    Args:
        gp: Ground program

    Returns:
        Normalized ground program (never more rules than gp)
    """
    current = gp
    while True:
        heads = current.head_atoms()
        rules, constraints = [], []
        for r in current.all_rules:
            body = _normalize_body(r.body, heads)
            if body is None:
                continue
            (constraints if r.is_constraint else rules).append(Rule(r.head, body))
        result = current.with_rules(rules, constraints)
        if result == current:
            return result
        current = result


# ==================== LOADING ====================

def load_program(path: str) -> GroundProgram:
    """
    Read, ground and normalize a program file

    Args:
        path: Program file (UTF-8)

    Returns:
        Normalized ground program
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ElpError(f"cannot read {path}: {exc.strerror or exc}") from None
    gp = normalize(ground(parse_program(text)))
    logger.info("loaded %s: %d rules, %d constraints", path, len(gp.rules), len(gp.constraints))
    return gp
