""" property checks over seeded random programs """

import itertools
import logging

import pytest

from components.analysis import check_coincidence
from components.as_engine import answer_sets_as
from components.epistemic import (
    Guess,
    ReductMode,
    Semantics,
    build_multiview_program,
    candidate_world_view,
    epistemic_literals,
    epistemic_scenarios,
    guess_count_bound,
    rascgk_check,
    simplified_version,
    valid_guesses,
    world_views,
    world_views_oracle,
)
from components.queries import (
    Query,
    QueryOp,
    eval_on_multiview,
    eval_on_world_view,
    eval_over_world_views,
    guess_tailored_eval,
)
from components.ras_engine import answer_sets_ras
from components.syntax import Atom
from data_collection.corpus import call_consistent_program, describe, random_corpus

logger = logging.getLogger(__name__)

SE_AS = (ReductMode.SHEN_EITER, Semantics.AS)
FRESH_RAS = (ReductMode.FRESH_ATOM, Semantics.RAS)

PER_VIEW_OPS = (QueryOp.PLAIN, QueryOp.NAF, QueryOp.ENOT, QueryOp.M, QueryOp.K, QueryOp.NOT)
WORLD_OPS = (QueryOp.K_W, QueryOp.M_W_SOME, QueryOp.M_W_ALL, QueryOp.ENOT_W, QueryOp.NOT_W)

# corpora without and with constraints
CORPORA = [pytest.param({}, id="rules"), pytest.param({"max_constraints": 2}, id="constraints")]


def query_atoms(gp):
    # "j" never occurs in a random program
    return sorted(gp.head_atoms() | {Atom("j")})


def guesses_of(gp):
    ep = sorted(epistemic_literals(gp))
    for size in range(len(ep) + 1):
        for combo in itertools.combinations(ep, size):
            yield Guess(frozenset(combo))


# ==================== WORLD VIEWS ====================

@pytest.mark.parametrize("limits", CORPORA)
@pytest.mark.parametrize("mode, semantics", [SE_AS, FRESH_RAS])
def test_scenario_search_matches_oracle(mode, semantics, limits):
    for seed, gp in random_corpus(200, base_seed=1000, **limits):
        assert world_views(gp, mode, semantics) == world_views_oracle(gp, mode, semantics), describe(gp, seed)


@pytest.mark.parametrize("limits", CORPORA)
@pytest.mark.parametrize("mode, semantics", [SE_AS, FRESH_RAS])
def test_world_view_guesses_are_scenarios(mode, semantics, limits):
    for seed, gp in random_corpus(150, base_seed=5000, epistemic_only=True, **limits):
        positives = {s.positive for s in epistemic_scenarios(gp)}
        for wv in world_views_oracle(gp, mode, semantics):
            assert wv.guess.assumed in positives, describe(gp, seed)


def test_counting_chain():
    for seed, gp in random_corpus(150, base_seed=9000, epistemic_only=True):
        sv = simplified_version(gp)
        scenarios = epistemic_scenarios(gp)
        valid = valid_guesses(gp)
        assert len(valid) <= len(scenarios) <= len(answer_sets_as(sv.program)), describe(gp, seed)

        report = guess_count_bound(gp, with_counts=True)
        assert report.n_hat == sv.head_count
        assert report.scenario_count == len(scenarios)


@pytest.mark.parametrize("limits", CORPORA)
def test_rascgk_agrees_with_candidate_check(limits):
    for seed, gp in random_corpus(120, base_seed=13000, epistemic_only=True, **limits):
        for phi in guesses_of(gp):
            expected = candidate_world_view(gp, phi, *FRESH_RAS) is not None
            assert rascgk_check(gp, phi) is expected, f"{describe(gp, seed)} guess={phi}"


def test_reduct_modes_compared():
    disagreements = 0
    for seed, gp in random_corpus(100, base_seed=17000, epistemic_only=True):
        se = world_views(gp, ReductMode.SHEN_EITER)
        fresh = world_views(gp, ReductMode.FRESH_ATOM)
        if se != fresh:
            disagreements += 1
            logger.info("reduct modes disagree: %s", describe(gp, seed))
    logger.info("%d of 100 programs have mode-dependent world views", disagreements)


# ==================== QUERIES ====================

@pytest.mark.parametrize("limits", CORPORA)
def test_tailored_queries_match_world_views(limits):
    for seed, gp in random_corpus(100, base_seed=21000, epistemic_only=True, **limits):
        for wv in world_views(gp, *FRESH_RAS):
            for atom, op in itertools.product(query_atoms(gp), PER_VIEW_OPS):
                q = Query(op, atom)
                expected = eval_on_world_view(wv, q).value
                assert guess_tailored_eval(gp, wv.guess, q, checked=True).value is expected, (
                    f"{describe(gp, seed)} {wv} {q}"
                )


@pytest.mark.parametrize("limits", CORPORA)
def test_multiview_matches_world_views(limits):
    for seed, gp in random_corpus(100, base_seed=25000, epistemic_only=True, **limits):
        views = world_views(gp, *FRESH_RAS)
        if not views:
            continue
        mv = build_multiview_program(gp, [wv.guess for wv in views], checked=True)
        for atom, op in itertools.product(query_atoms(gp), WORLD_OPS):
            q = Query(op, atom)
            assert eval_on_multiview(mv, q).value is eval_over_world_views(views, q).value, (
                f"{describe(gp, seed)} {q}"
            )


# ==================== AS AND RAS ====================

@pytest.mark.parametrize("limits", CORPORA)
def test_answer_sets_are_ras_answer_sets(limits):
    for seed, gp in random_corpus(200, base_seed=30000, max_epistemic=0, **limits):
        assert answer_sets_as(gp) <= answer_sets_ras(gp), describe(gp, seed)


def test_call_consistent_programs_coincide():
    for seed in range(100):
        gp = call_consistent_program(seed)
        report = check_coincidence(gp)
        assert report.call_consistent, describe(gp, seed)
        assert answer_sets_as(gp) == answer_sets_ras(gp), describe(gp, seed)


def test_coincidence_conditions():
    checked = 0
    for seed, gp in random_corpus(300, base_seed=40000, max_epistemic=0):
        report = check_coincidence(gp)
        as_sets = answer_sets_as(gp)
        if report.coincidence_guaranteed and as_sets:
            checked += 1
            assert as_sets == answer_sets_ras(gp), describe(gp, seed)
    assert checked > 0


def test_constrained_corpus_keeps_constraints():
    kept = [gp for _, gp in random_corpus(50, base_seed=45000, max_constraints=2) if gp.constraints]
    assert kept
    assert all(c.is_constraint for gp in kept for c in gp.constraints)
