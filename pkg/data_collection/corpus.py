"""
data_collection/corpus.py
Bundled example programs and seeded random program generators
"""

import logging
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from components.syntax import GroundProgram, ground, load_program, normalize, parse_program
from utils.errors import ElpError

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

ATOM_POOL = ("a", "b", "c", "d", "e", "f", "g", "h", "i", "j")

# epistemic prefixes over `enot A` and over `enot not A`
_PLAIN_ENOT_PREFIXES = ("enot", "K")
_NEGATED_ENOT_PREFIXES = ("M", "NOT")


# ==================== BUNDLED PROGRAMS ====================

def bundled_path(name: str, suffix: str = ".lp") -> Path:
    """Path of a bundled file in data/ (name without suffix)"""
    path = DATA_DIR / f"{name}{suffix}"
    if not path.exists():
        raise ElpError(f"no bundled file '{path.name}' (available: {', '.join(bundled_names())})")
    return path


def bundled_names() -> List[str]:
    return sorted(p.stem for p in DATA_DIR.glob("*.lp"))


def load_bundled(name: str) -> GroundProgram:
    """
    Load a bundled program, ready for the engines

    Args:
        name: File stem, e.g. "pi2" or "witnesses"

    Returns:
        Normalized ground program
    """
    return load_program(str(bundled_path(name)))


# ==================== RANDOM PROGRAMS ====================

def _pick(rng: np.random.Generator, items: Sequence[str]) -> str:
    return items[int(rng.integers(len(items)))]


def _body_literal(
    rng: np.random.Generator,
    body_pool: Sequence[str],
    ep_pool: Sequence[Tuple[str, bool]],
    epistemic_rate: float,
) -> str:
    if ep_pool and rng.random() < epistemic_rate:
        atom, negated = ep_pool[int(rng.integers(len(ep_pool)))]
        prefix = _pick(rng, _NEGATED_ENOT_PREFIXES if negated else _PLAIN_ENOT_PREFIXES)
        return f"{prefix} {atom}"
    atom = _pick(rng, body_pool)
    return atom if rng.random() < 0.4 else f"not {atom}"


def random_program_text(
    rng: np.random.Generator,
    max_heads: int = 8,
    max_epistemic: int = 4,
    max_rules: int = 10,
    max_body: int = 3,
    epistemic_rate: float = 0.35,
    max_constraints: int = 0,
) -> str:
    """
    Program text with propositional atoms, default negation and epistemic literals

    Args:
        rng: numpy Generator
        max_heads: Head atoms drawn from the first max_heads atoms of the pool
        max_epistemic: Max distinct epistemic literals `enot A` / `enot not A`
        max_rules: Max rules (at least one)
        max_body: Max body literals per rule
        epistemic_rate: Chance that a body literal is epistemic
        max_constraints: Max constraints, each with 1..max_body literals

    Returns:
        Program text
    """
    n_heads = int(rng.integers(1, max_heads + 1))
    heads = ATOM_POOL[:n_heads]
    # a body atom may head no rule, which exercises normalization
    body_pool = ATOM_POOL[: min(len(ATOM_POOL), n_heads + 1)]

    n_ep = int(rng.integers(0, max_epistemic + 1))
    ep_pool = sorted({(_pick(rng, body_pool), bool(rng.integers(2))) for _ in range(n_ep)})

    lines = []
    for _ in range(int(rng.integers(1, max_rules + 1))):
        head = _pick(rng, heads)
        size = int(rng.integers(0, max_body + 1))
        body = [_body_literal(rng, body_pool, ep_pool, epistemic_rate) for _ in range(size)]
        lines.append(f"{head} :- {', '.join(body)}." if body else f"{head}.")
    if max_constraints:
        for _ in range(int(rng.integers(0, max_constraints + 1))):
            size = int(rng.integers(1, max_body + 1))
            body = [_body_literal(rng, body_pool, ep_pool, epistemic_rate) for _ in range(size)]
            lines.append(f":- {', '.join(body)}.")
    return "\n".join(lines) + "\n"


def random_program(seed: int, **limits) -> GroundProgram:
    """Normalized random program; `limits` are passed to random_program_text"""
    text = random_program_text(np.random.default_rng(seed), **limits)
    return normalize(ground(parse_program(text)))


def call_consistent_program_text(rng: np.random.Generator, max_heads: int = 10, max_rules: int = 12) -> str:
    """
    Epistemic-free program without odd cycles

    Every atom gets a parity label; a body literal is positive when its atom
    shares the head's label and negated otherwise, so every cycle crosses an
    even number of negative edges.

    Args:
        rng: numpy Generator
        max_heads: Max head atoms
        max_rules: Max rules

    Returns:
        Program text
    """
    n_heads = int(rng.integers(1, max_heads + 1))
    atoms = ATOM_POOL[:n_heads]
    labels = {a: int(rng.integers(2)) for a in atoms}

    lines = []
    for _ in range(int(rng.integers(1, max_rules + 1))):
        head = _pick(rng, atoms)
        body = []
        for _ in range(int(rng.integers(0, 3))):
            atom = _pick(rng, atoms)
            body.append(atom if labels[atom] == labels[head] else f"not {atom}")
        lines.append(f"{head} :- {', '.join(body)}." if body else f"{head}.")
    return "\n".join(lines) + "\n"


def call_consistent_program(seed: int, **limits) -> GroundProgram:
    text = call_consistent_program_text(np.random.default_rng(seed), **limits)
    return normalize(ground(parse_program(text)))


def random_corpus(count: int, base_seed: int = 0, epistemic_only: bool = False, **limits) -> Iterator[Tuple[int, GroundProgram]]:
    """
    Deterministic stream of random programs

    Args:
        count: Number of programs
        base_seed: Seed of the first program; program k uses base_seed + k
        epistemic_only: Skip programs that lost all epistemic literals

    Yields:
        (seed, normalized ground program) pairs
    """
    produced = 0
    seed = base_seed
    while produced < count:
        gp = random_program(seed, **limits)
        seed += 1
        if epistemic_only and not gp.has_epistemic():
            continue
        produced += 1
        yield seed - 1, gp
    logger.debug("random corpus: %d programs from seeds %d..%d", count, base_seed, seed - 1)


def describe(gp: GroundProgram, seed: Optional[int] = None) -> str:
    """One-line description for assertion messages"""
    rules = " ".join(str(r) for r in gp.all_rules)
    return f"seed={seed}: {rules}" if seed is not None else rules
