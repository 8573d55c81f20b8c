""" test the two-witness investigation program end to end """

import pytest

from components.epistemic import ReductMode, Semantics, compute_world_views
from components.queries import derive_view_atoms, evaluate, load_view_rules, parse_query
from components.syntax import Atom
from data_collection.corpus import bundled_path

GUILTY_VIEW = (
    "disagree_w1_w2(john), guilty(john), reliable(witness1,john), suspect(john), "
    "witness1_recognizes(john), witness_recognizes(john)"
)
INNOCENT_VIEW = (
    "disagree_w1_w2(john), innocent(john), reliable(witness2,john), suspect(john), "
    "witness1_recognizes(john)"
)

SETTINGS = [
    ("scenario", ReductMode.SHEN_EITER, Semantics.AS),
    ("oracle", ReductMode.SHEN_EITER, Semantics.AS),
    ("scenario", ReductMode.FRESH_ATOM, Semantics.RAS),
    ("oracle", ReductMode.FRESH_ATOM, Semantics.RAS),
]


@pytest.fixture
def views(witnesses):
    return compute_world_views(witnesses)


@pytest.mark.parametrize("method, mode, semantics", SETTINGS)
def test_two_world_views(witnesses, names, family, method, mode, semantics):
    found = compute_world_views(witnesses, method, mode, semantics)
    assert [names(wv.answer_sets) for wv in found] == [family(GUILTY_VIEW), family(INNOCENT_VIEW)]


def test_guesses(views):
    assert [str(wv.guess) for wv in views] == [
        "{enot not reliable(witness1,john)}",
        "{enot guilty(john), enot not reliable(witness2,john)}",
    ]


@pytest.mark.parametrize(
    "text, expected",
    [
        ("KW guilty(john)", False),
        ("MWsome guilty(john)", True),
        ("MWall guilty(john)", False),
        ("ENOTW guilty(john)", True),
        ("NOTW guilty(john)", False),
        ("KW suspect(john)", True),
        ("MWsome innocent(john)", True),
    ],
)
def test_world_level_queries(views, text, expected):
    assert evaluate(views, parse_query(text)).value is expected


def test_view_rules(witnesses, views):
    rules = load_view_rules(str(bundled_path("witnesses", ".views")), witnesses.constants)
    derived = derive_view_atoms(rules, views)
    assert Atom("presumed_innocent", ("john",)) in derived
    assert Atom("provably_innocent", ("john",)) not in derived
    assert Atom("innocent", ("john",)) in derived
