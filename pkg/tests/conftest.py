"""
Shared fixtures
Program builders, bundled programs and answer-set name helpers
"""

import re
from typing import Callable, FrozenSet, Iterable, Set

import pytest

from components.syntax import GroundProgram, ground, normalize, parse_program
from data_collection.corpus import load_bundled


def _prog(text: str) -> GroundProgram:
    return normalize(ground(parse_program(text)))


def _names(family: Iterable[Iterable]) -> Set[FrozenSet[str]]:
    return {frozenset(str(a) for a in m) for m in family}


_ATOM = re.compile(r"[^,()]+(?:\([^)]*\))?")


def _family(*members: str) -> Set[FrozenSet[str]]:
    """_family("b", "a,d") -> {{b}, {a, d}}; "" is the empty set"""
    return {frozenset(x.strip() for x in _ATOM.findall(m) if x.strip()) for m in members}


@pytest.fixture
def prog() -> Callable[[str], GroundProgram]:
    """Parse, ground and normalize program text"""
    return _prog


@pytest.fixture
def names() -> Callable[[Iterable[Iterable]], Set[FrozenSet[str]]]:
    """Answer sets as sets of atom strings"""
    return _names


@pytest.fixture
def family() -> Callable[..., Set[FrozenSet[str]]]:
    return _family


@pytest.fixture
def bundled() -> Callable[[str], GroundProgram]:
    return load_bundled


@pytest.fixture
def witnesses() -> GroundProgram:
    return load_bundled("witnesses")
