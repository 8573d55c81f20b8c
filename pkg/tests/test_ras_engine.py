""" test consistent support, RAS answer sets, relevance and queries """

import pytest

from components.ras_engine import (
    QueryMode,
    QuerySession,
    answer_sets_ras,
    eval_query_sequence,
    holds_in_all,
    holds_in_some,
    is_consistent,
    is_consistently_supported,
    query_scope,
    relevant_subprogram,
    support_certificate,
    well_founded_model,
)
from components.as_engine import answer_sets_as
from components.syntax import Atom, Form, Literal
from utils.errors import CapacityError, EpistemicLiteralError, PreconditionError

A, B, C, D, E, P = (Atom(x) for x in "abcdep")


@pytest.mark.parametrize(
    "name, expected",
    [
        ("odd3", ["a", "b", "c"]),
        ("unary_odd", [""]),
        ("mixed", ["a", "b"]),
        ("pi1", ["b", "a,d"]),
    ],
)
def test_bundled_answer_sets(bundled, names, family, name, expected):
    assert names(answer_sets_ras(bundled(name))) == family(*expected)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("", [""]),
        ("a :- a.", [""]),
        ("a. b :- not a. c :- not c.", ["a"]),
        ("p :- not p, q. q.", ["q"]),
        ("a :- not b. b :- not a. :- a.", ["b"]),
        ("p :- not p. :- not p.", []),
    ],
)
def test_answer_sets(prog, names, family, text, expected):
    assert names(answer_sets_ras(prog(text))) == family(*expected)


def test_every_answer_set_is_a_ras_answer_set(prog):
    gp = prog("a :- not b. b :- not a. c :- a, not d. d :- not c. e :- not e, b.")
    assert answer_sets_as(gp) <= answer_sets_ras(gp)


def test_consistent_support(prog):
    gp = prog("a :- not b. b :- not a. c :- c. d :- a.")
    assert is_consistently_supported(gp, {A, D})
    assert not is_consistently_supported(gp, {A, B})
    assert not is_consistently_supported(gp, {C})
    assert is_consistently_supported(gp, set())


def test_support_certificate(prog):
    gp = prog("a. b :- a. c :- b, not d.")
    cert = support_certificate(gp, {A, B, C})
    assert cert is not None
    assert [str(r) for r in cert.rules_for(C)] == ["c :- b, not d.", "b :- a.", "a."]
    assert support_certificate(gp, {A, C}) is None


def test_well_founded_model(prog):
    wfm = well_founded_model(prog("a. b :- not a. c :- not c."))
    assert wfm.true == {A}
    assert wfm.false == {B}
    assert wfm.undefined == {C}


def test_epistemic_program_rejected(bundled):
    with pytest.raises(EpistemicLiteralError):
        answer_sets_ras(bundled("pi2"))


def test_relevant_subprogram(prog):
    gp = prog("a :- not b. b :- c. c. d :- not a. e :- not e.")
    sub = relevant_subprogram(gp, A)
    assert sub.head_atoms() == {A, B, C}


def test_query_scope_keeps_constraints(prog):
    gp = prog("a :- not b. b :- not a. e :- not f. f :- not e. :- e.")
    assert relevant_subprogram(gp, A).constraints == ()
    scope = query_scope(gp, A)
    assert scope.constraints == gp.constraints
    assert scope.head_atoms() == {A, B, E, Atom("f")}


def test_queries_ignore_irrelevant_odd_cycles(bundled):
    gp = bundled("mixed")
    assert holds_in_some(gp, Literal(A))
    assert holds_in_some(gp, Literal(B))
    assert not holds_in_some(gp, Literal(P))
    assert holds_in_some(gp, Literal(P, Form.NAF))


def test_queries_respect_constraints(prog):
    gp = prog("a :- not b. b :- not a. :- a.")
    assert not holds_in_some(gp, Literal(A))
    assert holds_in_all(gp, B)


def test_inconsistent_program(prog):
    gp = prog("p :- not p. :- not p.")
    assert not is_consistent(gp)
    assert not holds_in_some(gp, Literal(P, Form.NAF))
    assert not holds_in_all(gp, P)


def test_holds_in_all(prog):
    gp = prog("a. b :- not c. c :- not b.")
    assert holds_in_all(gp, A)
    assert not holds_in_all(gp, B)


def test_query_literal_must_be_plain(bundled):
    with pytest.raises(PreconditionError):
        holds_in_some(bundled("pi1"), Literal(A, Form.EPI))


@pytest.mark.parametrize(
    "queries, mode, expected",
    [
        ([Literal(A), Literal(B)], QueryMode.CONTEXTUAL, [True, False]),
        ([Literal(A), Literal(B)], QueryMode.INDEPENDENT, [True, True]),
        ([Literal(A, Form.NAF), Literal(B)], QueryMode.CONTEXTUAL, [True, True]),
        ([Literal(A), Literal(D), Literal(B, Form.NAF)], QueryMode.CONTEXTUAL, [True, True, True]),
    ],
)
def test_query_sequences(bundled, queries, mode, expected):
    assert eval_query_sequence(bundled("pi1"), queries, mode) == expected


def test_failed_query_keeps_context(bundled):
    session = QuerySession(bundled("pi1"))
    assert session.ask(Literal(A))
    assert not session.ask(Literal(B))
    assert session.ask(Literal(D))
    session.reset()
    assert session.ask(Literal(B))


def test_total_cap_bounds_partial_answer_sets(prog):
    gp = prog(" ".join(f"a{i} :- not b{i}. b{i} :- not a{i}." for i in range(13)))
    with pytest.raises(CapacityError, match="partial answer sets"):
        answer_sets_ras(gp, cap=12)
    assert len(answer_sets_ras(gp, cap=13)) == 8192
