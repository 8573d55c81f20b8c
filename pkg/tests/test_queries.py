""" test query parsing, per-view and world-level operators, sessions and view rules """

import pytest

from components.epistemic import (
    EpistemicLiteral,
    Guess,
    build_multiview_program,
    world_views,
)
from components.queries import (
    Query,
    QueryOp,
    WorldViewSession,
    derive_view_atoms,
    eval_on_multiview,
    eval_on_world_view,
    eval_over_world_views,
    evaluate,
    ground_view_rules,
    guess_tailored_eval,
    load_view_rules,
    parse_queries,
    parse_query,
    parse_view_rules,
)
from components.ras_engine import QueryMode
from components.syntax import Atom
from utils.errors import ElpError, InvalidGuessError, PreconditionError, QuerySyntaxError

A, B = Atom("a"), Atom("b")


def q(text: str) -> Query:
    return parse_query(text)


# ==================== PARSING ====================

@pytest.mark.parametrize(
    "text, op",
    [
        ("a", QueryOp.PLAIN),
        ("not a", QueryOp.NAF),
        ("enot a", QueryOp.ENOT),
        ("ENOT a", QueryOp.ENOT),
        ("M a", QueryOp.M),
        ("K a", QueryOp.K),
        ("NOT a", QueryOp.NOT),
        ("KW a", QueryOp.K_W),
        ("MWsome a", QueryOp.M_W_SOME),
        ("MWall a", QueryOp.M_W_ALL),
        ("ENOTW a", QueryOp.ENOT_W),
        ("NOTW a", QueryOp.NOT_W),
    ],
)
def test_query_operators(text, op):
    assert q(text) == Query(op, A)


def test_conjunction_with_prompt_and_period():
    queries = parse_queries("?- KW guilty(john), MWsome reliable(witness1,john).")
    assert queries == [
        Query(QueryOp.K_W, Atom("guilty", ("john",))),
        Query(QueryOp.M_W_SOME, Atom("reliable", ("witness1", "john"))),
    ]
    assert str(queries[0]) == "KW guilty(john)"


@pytest.mark.parametrize("text", ["KW", "K a b", "a :- b", "p(X)"])
def test_malformed_queries(text):
    with pytest.raises(QuerySyntaxError):
        parse_queries(text)


def test_parse_query_expects_one():
    with pytest.raises(QuerySyntaxError):
        parse_query("a, b")


def test_view_rules_ground_over_constants():
    rules = parse_view_rules("ok(X) :- suspect(X), NOTW guilty(X).\nfixed.\n")
    assert str(rules[0]) == "ok(X) :- suspect(X), NOTW guilty(X)."
    assert str(rules[1]) == "fixed."
    grounded = ground_view_rules(rules, {"john", "mary"})
    assert [str(r) for r in grounded] == [
        "ok(john) :- suspect(john), NOTW guilty(john).",
        "ok(mary) :- suspect(mary), NOTW guilty(mary).",
        "fixed.",
    ]


def test_missing_view_file(tmp_path):
    with pytest.raises(ElpError, match="cannot read"):
        load_view_rules(str(tmp_path / "none.views"), set())


# ==================== ONE WORLD VIEW ====================

@pytest.mark.parametrize(
    "text, expected",
    [
        ("a", True),
        ("M a", True),
        ("K a", False),
        ("K b", False),
        ("not a", True),
        ("ENOT a", True),
        ("NOT c", True),
        ("NOT a", False),
        ("K c", False),
    ],
)
def test_eval_on_world_view(bundled, text, expected):
    (wv,) = world_views(bundled("pi1"))
    assert eval_on_world_view(wv, q(text)).value is expected


def test_duality_on_a_world_view(bundled):
    (wv,) = world_views(bundled("pi2"))
    for atom in "abd":
        assert eval_on_world_view(wv, q(f"NOT {atom}")).value != eval_on_world_view(wv, q(f"M {atom}")).value
        assert eval_on_world_view(wv, q(f"ENOT {atom}")).value != eval_on_world_view(wv, q(f"K {atom}")).value


def test_witness_refutes_universal(bundled, names, family):
    (wv,) = world_views(bundled("pi1"))
    result = eval_on_world_view(wv, q("K d"))
    assert not result
    ((index, member),) = result.witnesses
    assert index == 1 and names([member]) == family("b")


def test_world_level_query_rejected_on_one_view(bundled):
    (wv,) = world_views(bundled("pi1"))
    with pytest.raises(PreconditionError):
        eval_on_world_view(wv, q("KW a"))


# ==================== ALL WORLD VIEWS ====================

@pytest.mark.parametrize(
    "text, expected",
    [
        ("KW a", False),
        ("MWsome a", True),
        ("MWall a", False),
        ("ENOTW a", True),
        ("NOTW a", False),
        ("NOTW c", True),
        ("KW c", False),
    ],
)
def test_eval_over_world_views(bundled, text, expected):
    views = world_views(bundled("conflict"))
    assert eval_over_world_views(views, q(text)).value is expected


def test_existential_witnesses(bundled, names, family):
    views = world_views(bundled("conflict"))
    result = eval_over_world_views(views, q("MWsome a"))
    assert [(i, names([m]).pop()) for i, m in result.witnesses] == [(1, frozenset({"a"}))]


def test_plain_operator_rejected_over_world_views(bundled):
    with pytest.raises(PreconditionError):
        eval_over_world_views(world_views(bundled("conflict")), q("K a"))


def test_per_view_query_must_hold_in_every_view(bundled):
    views = world_views(bundled("conflict"))
    assert not evaluate(views, q("K a"))
    assert evaluate(views, q("NOT c"))
    assert not evaluate([], q("NOT c"))


# ==================== TAILORED AND MULTI-VIEW ====================

def test_guess_tailored_eval(bundled):
    gp = bundled("conflict")
    phi = Guess(frozenset({EpistemicLiteral(B)}))
    assert guess_tailored_eval(gp, phi, q("K a")).value
    assert not guess_tailored_eval(gp, phi, q("M b")).value
    assert guess_tailored_eval(gp, phi, q("NOT b")).value


def test_guess_tailored_eval_rejects_invalid_guess(bundled):
    gp = bundled("conflict")
    with pytest.raises(InvalidGuessError):
        guess_tailored_eval(gp, Guess(frozenset({EpistemicLiteral(A), EpistemicLiteral(B)})), q("K a"))


@pytest.mark.parametrize("text", ["KW a", "MWsome a", "MWall a", "ENOTW a", "NOTW a", "NOTW c"])
def test_multiview_matches_world_views(bundled, text):
    gp = bundled("conflict")
    views = world_views(gp)
    mv = build_multiview_program(gp, [wv.guess for wv in views])
    assert eval_on_multiview(mv, q(text)).value == eval_over_world_views(views, q(text)).value


# ==================== SESSIONS ====================

def test_contextual_session_narrows(bundled):
    session = WorldViewSession(world_views(bundled("pi1")))
    assert session.ask(q("a"))
    assert session.ask(q("K d"))
    session.reset()
    assert not session.ask(q("K d"))


def test_independent_session(bundled):
    session = WorldViewSession(world_views(bundled("pi1")), QueryMode.INDEPENDENT)
    results = session.ask_all(parse_queries("a, K d"))
    assert [r.value for r in results] == [True, False]


def test_mode_switch_resets_context(bundled):
    session = WorldViewSession(world_views(bundled("pi1")))
    session.ask(q("not a"))
    assert session.ask(q("K b"))
    session.set_mode(QueryMode.CONTEXTUAL)
    assert not session.ask(q("K b"))


def test_session_without_world_views():
    assert not WorldViewSession([]).ask(q("a"))


# ==================== VIEW RULES ====================

def test_derive_view_atoms(bundled):
    views = world_views(bundled("conflict"))
    rules = parse_view_rules(
        """
        some_a :- MWsome a.
        both :- some_a, MWsome b.
        never :- KW a.
        chained :- never.
        """
    )
    assert derive_view_atoms(rules, views) == {Atom("some_a"), Atom("both")}


def test_bare_atom_true_in_every_view(bundled):
    rules = parse_view_rules("sure :- a.\nunsure :- b.\n")
    derived = derive_view_atoms(rules, world_views(bundled("pi2")))
    assert derived == {Atom("sure")}


@pytest.mark.parametrize(
    "text, expected",
    [("K a", True), ("K b", False), ("M b", True), ("NOT b", False)],
)
def test_eval_on_pi2_world_view(bundled, text, expected):
    (wv,) = world_views(bundled("pi2"))
    assert eval_on_world_view(wv, q(text)).value is expected


@pytest.mark.parametrize(
    "text, expected",
    [("K a", True), ("ENOT b", True), ("NOT d", False)],
)
def test_guess_tailored_eval_on_pi2(bundled, text, expected):
    phi = Guess(frozenset({EpistemicLiteral(B)}))
    assert guess_tailored_eval(bundled("pi2"), phi, q(text)).value is expected
