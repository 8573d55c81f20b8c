"""
Helper functions for the ELP toolkit
Generic utilities for formatting, ordering and logging setup
"""

import logging
from typing import Any, Iterable, List, Optional, Sequence, Tuple


# ==================== ORDERING FUNCTIONS ====================

def atom_key(item: Any) -> str:
    """Sort key for a ground atom (its printed form)"""
    return str(item)


def sorted_atoms(items: Iterable[Any]) -> List[Any]:
    """
    Sort atoms lexicographically by printed form

    Args:
        items: Atoms (anything with a stable str())

    Returns:
        New sorted list
    """
    return sorted(items, key=atom_key)


def set_key(items: Iterable[Any]) -> Tuple[str, ...]:
    """Sort key for a set of atoms: the tuple of its sorted printed atoms"""
    return tuple(sorted(atom_key(i) for i in items))


def sorted_sets(families: Iterable[Iterable[Any]]) -> List[List[Any]]:
    """
    Sort a family of atom sets deterministically

    Args:
        families: Iterable of atom collections

    Returns:
        List of sorted atom lists, ordered lexicographically
    """
    normalized = [sorted_atoms(f) for f in families]
    return sorted(normalized, key=set_key)


# ==================== FORMATTING FUNCTIONS ====================

def format_atom_set(items: Iterable[Any], separator: str = ", ") -> str:
    """
    Format a set of atoms

    Args:
        items: Atoms to print
        separator: Text between atoms

    Returns:
        Formatted string (e.g., "{a, b}" or "{}")
    """
    return "{" + separator.join(atom_key(i) for i in sorted_atoms(items)) + "}"


def format_family(families: Iterable[Iterable[Any]]) -> str:
    """
    Format a set of atom sets compactly

    Returns:
        Formatted string (e.g., "{{a,b},{a,d}}")
    """
    inner = ",".join(format_atom_set(f, separator=",") for f in sorted_sets(families))
    return "{" + inner + "}"


def format_bool(value: bool) -> str:
    """Lowercase truth value as printed by the CLI"""
    return "true" if value else "false"


def truncate_text(text: str, max_length: int = 80, suffix: str = "...") -> str:
    """
    Truncate text to specified length

    Args:
        text: Text to truncate
        max_length: Maximum length
        suffix: Suffix to add if truncated

    Returns:
        Truncated text
    """
    if len(text) <= max_length:
        return text
    return text[:max_length - len(suffix)] + suffix


# ==================== SET FUNCTIONS ====================

def maximal_sets(families: Sequence[frozenset]) -> List[frozenset]:
    """
    Keep the ⊆-maximal members of a family

    Args:
        families: Candidate sets (duplicates allowed)

    Returns:
        Distinct maximal members, in first-seen order
    """
    distinct = list(dict.fromkeys(families))
    return [s for s in distinct if not any(s < other for other in distinct)]


# ==================== LOGGING ====================

def configure_logging(level: Optional[str] = None, verbose: bool = False) -> None:
    """
    Configure root logging once for command-line use

    Args:
        level: Level name from settings (e.g., "WARNING")
        verbose: Force DEBUG
    """
    chosen = logging.DEBUG if verbose else getattr(logging, (level or "WARNING").upper(), logging.WARNING)
    logging.basicConfig(
        level=chosen,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger().setLevel(chosen)


# ==================== CONSTANTS ====================

FRESH_PREFIX = "__f_"

SEMANTICS_CHOICES = ("as", "ras")
REDUCT_CHOICES = ("shen-eiter", "fresh")
METHOD_CHOICES = ("scenario", "oracle")
MODE_CHOICES = ("contextual", "independent")
