#!/usr/bin/env python3
import math
import pytest

import mdtas.consts

from logging import Logger
from mdtas_test import consts as test_consts
from mdtas_test.models import MDTASTestLogger
from mdtas.constructions import CONSTRUCTIONS, asymptotic_ratio, build, verify
from mdtas.core import derive_tas
from mdtas.evaluation import (
    check_mc_winner_conditions,
    cost,
    distortion,
    evaluate_corpus,
    interval_winner_check,
    optimal_alternative,
    proven_bound,
)
from mdtas.models import ConstructionParams, MechanismId, Objective, SearchConfig
from mdtas.search import hill_climb, random_corpus

log: Logger = MDTASTestLogger().logger # type: ignore

SC = Objective.SOCIAL_COST
MC = Objective.MAX_COST
GOLDEN = test_consts.GOLDEN
SLACK = test_consts.BOUND_SLACK


@pytest.fixture(scope='module')
def general_corpus():
    return random_corpus(mdtas.consts.GENERAL, test_consts.CORPUS_SIZE, (1, 8), (1, 6), test_consts.CORPUS_SEED)


@pytest.fixture(scope='module')
def line_corpus():
    return random_corpus(mdtas.consts.LINE, test_consts.CORPUS_SIZE, (1, 8), (1, 6), test_consts.CORPUS_SEED)


def _violations(rows):
    return [(row.instance_id, str(row.mechanism), row.objective.value, row.ratio, row.bound) for row in rows if row.violates(SLACK)]


def test_general_metric_upper_bounds(general_corpus):
    mechanisms = [
        MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN),
        MechanismId(mdtas.consts.MOST_COMPACT_SET, GOLDEN),
        MechanismId(mdtas.consts.TOP_CHOICE_DICTATOR),
        MechanismId(mdtas.consts.OMNISCIENT),
    ] + [MechanismId(mdtas.consts.ANY_APPROVED, alpha) for alpha in test_consts.ANY_APPROVED_ALPHAS]

    rows = evaluate_corpus(general_corpus, mechanisms, [SC, MC])

    assert _violations(rows) == []
    assert all(row.ratio == 1.0 for row in rows if row.mechanism.name == mdtas.consts.OMNISCIENT)

    minisum = [row.ratio for row in rows if row.mechanism.name == mdtas.consts.MINISUM_TAS and row.objective is SC]
    log.info(f'Minisum SC over {len(minisum)} general instances: worst ratio {max(minisum):.12g}')
    assert len(minisum) == test_consts.CORPUS_SIZE
    assert max(minisum) <= 1 + math.sqrt(2) + SLACK


def test_line_upper_bounds(line_corpus):
    mechanisms = [
        MechanismId(mdtas.consts.MINISUM_TAS, 2.0),
        MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN),
        MechanismId(mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY, GOLDEN),
        MechanismId(mdtas.consts.MAX_TAS_LEFTMOST, GOLDEN),
        MechanismId(mdtas.consts.MINIMAX_TAS, GOLDEN),
        MechanismId(mdtas.consts.TOP_CHOICE_DICTATOR),
        MechanismId(mdtas.consts.OMNISCIENT),
    ]

    rows = evaluate_corpus(line_corpus, mechanisms, [SC, MC])

    assert _violations(rows) == []
    assert all(row.ratio == 1.0 for row in rows if row.mechanism.name == mdtas.consts.OMNISCIENT)

    ewm = [row.ratio for row in rows if row.mechanism.name == mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY and row.objective is SC]
    log.info(f'EliminationWeightedMajority SC over the line corpus: worst ratio {max(ewm):.12g}')
    assert max(ewm) <= 2 * math.sqrt(2) - 1 + SLACK

    for name in (mdtas.consts.MINISUM_TAS, mdtas.consts.MINIMAX_TAS):
        golden_mc = [row.ratio for row in rows if row.mechanism == MechanismId(name, GOLDEN) and row.objective is MC]
        assert max(golden_mc) <= 1 + math.sqrt(2) + SLACK

    # the leftmost tie-break has no bound; pin the worst case the corpus holds
    leftmost = [row for row in rows if row.mechanism.name == mdtas.consts.MAX_TAS_LEFTMOST and row.objective is MC]
    worst = max(leftmost, key=lambda row: row.ratio)
    log.info(f'MaxTASLeftmost MC over the line corpus: worst ratio {worst.ratio:.12g} on {worst.instance_id}')

    assert all(row.bound is None for row in leftmost)
    assert worst.instance_id == 'line-20240601-02004'
    assert worst.ratio == pytest.approx(2.49152524, rel=1e-6)
    assert worst.ratio > 1 + math.sqrt(2)


def test_lower_bounds_at_scale():
    n, small = 1000, 1e-6

    def ratio(construction_id: str, alpha: float) -> float:
        output = build(construction_id, ConstructionParams(n=n, alpha=alpha, epsilon=small, delta=small))
        return cost(output.instance, output.adversarial_winner, output.objective) / cost(output.instance, output.reference, output.objective)

    assert ratio(mdtas.consts.CYCLIC_SYMMETRIC, 3.0) >= 2.97
    assert ratio(mdtas.consts.SC_DIST_TAS, GOLDEN) == pytest.approx(2 + 1 / GOLDEN, rel=1e-2)
    assert ratio(mdtas.consts.SC_ALL_THREE, 1.9) == pytest.approx(1 + 2 / 1.9, rel=1e-2)
    assert ratio(mdtas.consts.MC_GENERAL_I1, GOLDEN) == pytest.approx(1 + math.sqrt(2), abs=1e-3)
    assert ratio(mdtas.consts.MC_TAS_ONLY, 2.0) == pytest.approx(3.0, abs=1e-3)

    for construction_id, alpha in [
        (mdtas.consts.SC_ORD_TAS, GOLDEN),
        (mdtas.consts.LINE_SC_ORDINAL_1, 2.0),
        (mdtas.consts.LINE_SC_ORDINAL_2, 2.0),
        (mdtas.consts.LINE_SC_DIST_1, 2.0),
        (mdtas.consts.LINE_SC_DIST_2, 2.0),
        (mdtas.consts.MC_GENERAL_I2, 2.0),
    ]:
        expected = asymptotic_ratio(construction_id, alpha, n)
        assert ratio(construction_id, alpha) == pytest.approx(expected, rel=1e-2), construction_id

    tas_only = build(mdtas.consts.TAS_ONLY_LINE, ConstructionParams(n=n, epsilon=small))
    _, best = optimal_alternative(tas_only.instance, SC)
    assert cost(tas_only.instance, tas_only.adversarial_winner, SC) / best >= 990


def test_every_construction_verifies():
    for construction_id, construction in CONSTRUCTIONS.items():
        alpha = 1.5 if construction_id == mdtas.consts.SC_ALL_THREE else GOLDEN

        for target in range(construction.targets(5)):
            output = build(construction_id, ConstructionParams(n=5, alpha=alpha, target=target))
            report = verify(output)
            assert report.passed, f'{construction_id} target {target}: {report.diffs}'


@pytest.mark.parametrize('space', mdtas.consts.SPACES)
def test_max_cost_winner_conditions(space):
    corpus = random_corpus(space, test_consts.CONDITION_CORPUS_SIZE, (1, 8), (1, 6), test_consts.CORPUS_SEED + 1)

    for _, instance in corpus:
        _, best = optimal_alternative(instance, MC)

        for alpha in test_consts.CONDITION_ALPHAS:
            tas = derive_tas(instance, alpha)

            for winner in range(instance.n_alternatives):
                conditions = check_mc_winner_conditions(instance, tas, winner)
                winner_cost = cost(instance, winner, MC)

                if conditions.cond1:
                    assert winner_cost <= alpha * best + SLACK
                if conditions.cond2:
                    assert winner_cost <= (2 + 1 / alpha) * best + SLACK

        if space == mdtas.consts.LINE:
            for winner in range(instance.n_alternatives):
                if interval_winner_check(instance, winner):
                    assert cost(instance, winner, MC) <= 2 * best + SLACK


@pytest.mark.parametrize('n', [10, 50, 100])
def test_dictator_on_tas_only_line(n):
    output = build(mdtas.consts.TAS_ONLY_LINE, ConstructionParams(n=n, epsilon=1e-7))
    report = distortion(output.instance, MechanismId(mdtas.consts.TOP_CHOICE_DICTATOR), SC)

    assert report.winner == output.adversarial_winner
    assert report.ratio == pytest.approx(n - 1, abs=1e-3)


@pytest.mark.parametrize('mechanism, objective, space', [
    (MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN), SC, mdtas.consts.GENERAL),
    (MechanismId(mdtas.consts.MOST_COMPACT_SET, GOLDEN), MC, mdtas.consts.GENERAL),
    (MechanismId(mdtas.consts.MINIMAX_TAS, GOLDEN), MC, mdtas.consts.LINE),
    (MechanismId(mdtas.consts.MINISUM_TAS, 2.0), SC, mdtas.consts.LINE),
])
def test_search_never_beats_proven_bound(mechanism, objective, space):
    config = SearchConfig(mechanism, objective, space=space, n_range=(2, 4), m_range=(2, 4), restarts=10, steps=100, seed=test_consts.CORPUS_SEED)
    result = hill_climb(config)

    assert result.best_ratio <= proven_bound(mechanism, objective, space, result.best_instance.n_agents) + SLACK


def test_search_finds_bad_instances_for_weighted_majority():
    mechanism = MechanismId(mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY, GOLDEN)
    config = SearchConfig(mechanism, SC, space=mdtas.consts.LINE, n_range=(2, 2), m_range=(2, 2), restarts=200, steps=500, seed=0)
    result = hill_climb(config)
    log.info(f'Search for {mechanism}: best ratio {result.best_ratio:.12g} at restart {result.best_restart}')

    assert result.best_ratio >= 1.7
    assert result.best_ratio <= proven_bound(mechanism, SC, mdtas.consts.LINE) + SLACK
