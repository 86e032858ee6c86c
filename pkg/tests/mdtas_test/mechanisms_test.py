#!/usr/bin/env python3
import pytest
import numpy as np

import mdtas.consts

from logging import Logger
from mdtas_test import consts as test_consts
from mdtas_test.models import MDTASTestLogger
from mdtas.core import LineOrdering, derive_bundle, derive_tas
from mdtas.evaluation import distortion
from mdtas.exceptions import InvariantError, MissingViewError, ParameterError, UnsupportedError
from mdtas.mechanisms import (
    MECHANISMS,
    any_approved,
    elimination_weighted_majority,
    get_mechanism,
    max_tas_leftmost,
    minimax_tas_distance,
    minisum_tas_distance,
    most_compact_set,
    run_mechanism,
    set_distances,
    top_choice_dictator,
)
from mdtas.models import AltDistances, ElicitationBundle, LineInstance, MechanismId, Objective, Provenance, TASProfile
from mdtas.search import random_corpus

log: Logger = MDTASTestLogger().logger # type: ignore

ALTERNATIVE = mdtas.consts.ALTERNATIVE


def _alternatives_in_order(*order: int) -> LineOrdering:
    return LineOrdering(tuple((ALTERNATIVE, x) for x in order))


def _three_points() -> AltDistances:
    return AltDistances(LineInstance([0.0], [0.0, 1.0, 2.0]).alt_alt)


def test_set_distances_closest_member():
    tas = TASProfile.from_sets(2.0, [[0], [0, 2]], 3)
    assert set_distances(_three_points(), tas).tolist() == [[0.0, 1.0, 2.0], [0.0, 1.0, 0.0]]


def test_minisum_scores_and_lowest_index_tie():
    result = minisum_tas_distance(_three_points(), TASProfile.from_sets(2.0, [[0], [2]], 3))

    assert result.trace['scores'].tolist() == [2.0, 2.0, 2.0]
    assert result.winner == 0


def test_minisum_unanimous_approval_wins():
    result = minisum_tas_distance(_three_points(), TASProfile.from_sets(2.0, [[1], [1], [1, 2]], 3))
    assert result.winner == 1


def test_minimax_scores():
    result = minimax_tas_distance(_three_points(), TASProfile.from_sets(2.0, [[0], [2]], 3))

    assert result.trace['scores'].tolist() == [2.0, 1.0, 2.0]
    assert result.winner == 1


def test_minimax_equals_minisum_for_one_agent():
    alt_dist = AltDistances(LineInstance([0.0], [0.0, 0.3, 0.9, 0.4]).alt_alt)
    tas = TASProfile.from_sets(1.5, [[1, 3]], 4)

    assert minimax_tas_distance(alt_dist, tas).winner == minisum_tas_distance(alt_dist, tas).winner


def test_empty_approval_set_is_an_invariant_error():
    with pytest.raises(InvariantError):
        minisum_tas_distance(_three_points(), TASProfile(1.0, [[False, False, False]]))

    with pytest.raises(InvariantError):
        any_approved(TASProfile(1.0, [[False, False]]))


def test_elimination_weighted_majority_keeps_median_choice():
    bundle = derive_bundle(LineInstance([0.9, 1.0, 1.1], [0.0, 1.0, 2.0]), test_consts.GOLDEN)
    result = run_mechanism(MechanismId(mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY, test_consts.GOLDEN), bundle)

    assert result.winner == 1
    assert result.trace['median_agent'] == 1
    assert result.trace['x'] == 1
    assert result.trace['y'] == 2
    assert result.trace['n_left'] == 0
    assert result.trace['n_right'] == 0


def test_elimination_weighted_majority_single_alternative():
    bundle = derive_bundle(LineInstance([0.2, 0.5], [0.3]), test_consts.GOLDEN)
    result = run_mechanism(MechanismId(mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY, test_consts.GOLDEN), bundle)

    assert result.winner == 0
    assert 'y' not in result.trace


def test_elimination_weighted_majority_tie_goes_to_median_choice():
    bundle = derive_bundle(LineInstance([0.0, 1.0], [0.0, 1.0]), 2.0)
    result = run_mechanism(MechanismId(mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY, 2.0), bundle)

    assert result.trace['v_x'] == pytest.approx(3.0)
    assert result.trace['v_y'] == pytest.approx(3.0)
    assert result.winner == 0


def test_elimination_weighted_majority_heavier_voters_win():
    # agent 2 does not approve both alternatives, so its vote counts (alpha+1)/(alpha-1) = 3
    bundle = derive_bundle(LineInstance([0.4, 0.45, 1.0], [0.0, 1.0]), 2.0)
    result = run_mechanism(MechanismId(mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY, 2.0), bundle)

    assert result.trace['x'] == 0
    assert result.trace['v_x'] == pytest.approx(2.0)
    assert result.trace['v_y'] == pytest.approx(3.0)
    assert result.winner == 1


def test_elimination_weighted_majority_needs_alpha_above_one():
    bundle = derive_bundle(LineInstance([0.0, 1.0], [0.0, 1.0]), 1.0)

    with pytest.raises(ParameterError):
        elimination_weighted_majority(LineOrdering(()), bundle.ordinal, bundle.tas)

    with pytest.raises(ParameterError):
        MechanismId(mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY, 1.0)


def test_line_mechanisms_reject_general_bundles():
    general = LineInstance([0.0, 1.0], [0.0, 1.0]).to_general()
    bundle = derive_bundle(general, test_consts.GOLDEN)

    with pytest.raises(UnsupportedError):
        run_mechanism(MechanismId(mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY, test_consts.GOLDEN), bundle)

    with pytest.raises(UnsupportedError):
        run_mechanism(MechanismId(mdtas.consts.MAX_TAS_LEFTMOST, test_consts.GOLDEN), bundle)


def test_most_compact_set_returns_common_alternative():
    tas = TASProfile.from_sets(2.0, [[0, 1], [1, 2]], 3)
    result = most_compact_set([0, 2], _three_points(), tas)

    assert result.winner == 1
    assert result.trace['common']


def test_most_compact_set_smallest_radius():
    alt_dist = AltDistances(LineInstance([0.0], [0.0, 1.0, 5.0]).alt_alt)
    tas = TASProfile.from_sets(2.0, [[0, 1], [2]], 3)
    result = most_compact_set([0, 2], alt_dist, tas)

    assert result.trace['radii'].tolist() == [1.0, 0.0]
    assert result.winner == 2


def test_max_tas_leftmost_counts():
    tas = TASProfile.from_sets(2.0, [[0, 1], [1, 2], [2]], 3)
    result = max_tas_leftmost(_alternatives_in_order(0, 1, 2), tas)

    assert result.trace['counts'].tolist() == [1, 2, 2]
    assert result.winner == 1


def test_max_tas_leftmost_identical_sets_pick_leftmost():
    tas = TASProfile.from_sets(2.0, [[0, 1, 2], [0, 1, 2]], 3)
    assert max_tas_leftmost(_alternatives_in_order(2, 0, 1), tas).winner == 2


def test_any_approved_lowest_index_of_agent_zero():
    tas = TASProfile.from_sets(3.0, [[2, 4], [0]], 5)
    assert any_approved(tas).winner == 2


def test_top_choice_dictator_requires_alpha_one():
    with pytest.raises(ParameterError):
        top_choice_dictator(TASProfile.from_sets(2.0, [[0]], 2))

    with pytest.raises(ParameterError):
        MechanismId(mdtas.consts.TOP_CHOICE_DICTATOR, 2.0)


def test_top_choice_dictator_colocated_alternatives():
    bundle = derive_bundle(LineInstance([0.0], [0.0, 0.0]), 1.0)

    assert bundle.tas.sets == [frozenset({0, 1})]
    assert run_mechanism(MechanismId(mdtas.consts.TOP_CHOICE_DICTATOR, 1.0), bundle).winner == 0


def test_run_mechanism_reads_only_declared_views():
    full = derive_bundle(LineInstance([0.1, 0.6, 0.8], [0.0, 0.5, 1.0]), test_consts.GOLDEN)

    for name, mechanism in MECHANISMS.items():
        alpha = 1.0 if name == mdtas.consts.TOP_CHOICE_DICTATOR else test_consts.GOLDEN
        mechanism_id = MechanismId(name, alpha)
        bundle = full if alpha == test_consts.GOLDEN else derive_bundle(LineInstance([0.1, 0.6, 0.8], [0.0, 0.5, 1.0]), alpha)
        minimal = ElicitationBundle(
            bundle.provenance,
            ordinal=bundle.ordinal if mdtas.consts.ORDINAL in mechanism.views else None,
            alt_distances=bundle.alt_distances if mdtas.consts.DISTANCES in mechanism.views else None,
            tas=bundle.tas if mdtas.consts.TAS in mechanism.views else None,
        )

        assert run_mechanism(mechanism_id, minimal).winner == run_mechanism(mechanism_id, bundle).winner


def test_run_mechanism_missing_view():
    bundle = ElicitationBundle(Provenance('hand-made'), tas=TASProfile.from_sets(test_consts.GOLDEN, [[0]], 2))

    with pytest.raises(MissingViewError) as error:
        run_mechanism(MechanismId(mdtas.consts.MINISUM_TAS, test_consts.GOLDEN), bundle)

    assert error.value.missing == [mdtas.consts.DISTANCES]


def test_run_mechanism_alpha_mismatch():
    bundle = derive_bundle(LineInstance([0.0], [0.0, 1.0]), 2.0)

    with pytest.raises(ParameterError):
        run_mechanism(MechanismId(mdtas.consts.MINISUM_TAS, 3.0), bundle)


def test_run_mechanism_rejects_omniscient():
    bundle = derive_bundle(LineInstance([0.0], [0.0, 1.0]))

    with pytest.raises(UnsupportedError):
        run_mechanism(MechanismId(mdtas.consts.OMNISCIENT), bundle)


def test_unknown_mechanism():
    with pytest.raises(UnsupportedError):
        get_mechanism('Borda')

    with pytest.raises(UnsupportedError):
        MechanismId('Borda')


def test_winner_in_range_for_every_mechanism():
    rng = np.random.default_rng(test_consts.CORPUS_SEED)

    for _ in range(25):
        instance = LineInstance(rng.uniform(size=4), rng.uniform(size=3))

        for name in MECHANISMS:
            alpha = 1.0 if name == mdtas.consts.TOP_CHOICE_DICTATOR else test_consts.GOLDEN
            winner = run_mechanism(MechanismId(name, alpha), derive_bundle(instance, alpha)).winner
            assert 0 <= winner < instance.n_alternatives


def test_max_tas_leftmost_can_exceed_golden_max_cost_bound():
    instance = LineInstance([0.3374, 0.7116, 0.3294, 0.9418], [0.5402, 0.1542, 0.4446, 0.1140, 0.9411, 0.6617])
    mechanism = MechanismId(mdtas.consts.MAX_TAS_LEFTMOST, test_consts.GOLDEN)

    assert derive_tas(instance, test_consts.GOLDEN).sets == [{0, 1, 2, 3}, {5}, {0, 1, 2, 3}, {4}]

    # alternative 3 is the leftmost of the four most approved, left of every agent
    report = distortion(instance, mechanism, Objective.MAX_COST)

    assert report.winner == 3
    assert report.optimal == 5
    assert report.ratio == pytest.approx((0.9418 - 0.1140) / (0.6617 - 0.3294))
    assert report.ratio > test_consts.GOLDEN


@pytest.fixture(scope='module')
def line_bundles():
    corpus = random_corpus(mdtas.consts.LINE, 500, (1, 8), (1, 6), test_consts.CORPUS_SEED + 2)
    return [(instance, derive_bundle(instance, test_consts.GOLDEN, source=instance_id)) for instance_id, instance in corpus]


def test_elimination_weighted_majority_winner_and_weights(line_bundles):
    alpha = test_consts.GOLDEN
    heavy = (alpha + 1) / (alpha - 1)

    for _, bundle in line_bundles:
        result = run_mechanism(MechanismId(mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY, alpha), bundle)
        trace = result.trace
        assert result.winner in {trace['x'], trace.get('y')}

        if 'y' not in trace:
            assert result.winner == trace['x']
            continue

        weights = np.asarray(trace['weights'])
        assert weights.shape == (bundle.n_agents,)
        assert np.all(np.isclose(weights, 1.0) | np.isclose(weights, heavy))

        approves_both = bundle.tas.approvals[:, trace['x']] & bundle.tas.approvals[:, trace['y']]
        np.testing.assert_allclose(weights[approves_both], 1.0)
        np.testing.assert_allclose(weights[~approves_both], heavy)


@pytest.mark.parametrize('name, combine', [
    (mdtas.consts.MINISUM_TAS, sum),
    (mdtas.consts.MINIMAX_TAS, max),
])
def test_tas_distance_scores_match_direct_computation(line_bundles, name, combine):
    tolerance = mdtas.consts.DEFAULT_TOLERANCE

    for _, bundle in line_bundles:
        matrix = bundle.alt_distances.matrix
        scores = [
            combine(min(matrix[j, x] for j in approved) for approved in bundle.tas.sets)
            for x in range(bundle.n_alternatives)
        ]
        result = run_mechanism(MechanismId(name, test_consts.GOLDEN), bundle)

        np.testing.assert_allclose(result.trace['scores'], scores)
        assert result.winner == next(x for x, score in enumerate(scores) if score <= min(scores) + tolerance)


def test_every_mechanism_is_deterministic(line_bundles):
    for instance, bundle in line_bundles[:100]:
        for name in MECHANISMS:
            alpha = 1.0 if name == mdtas.consts.TOP_CHOICE_DICTATOR else test_consts.GOLDEN
            mechanism = MechanismId(name, alpha)
            shared = bundle if alpha == test_consts.GOLDEN else derive_bundle(instance, alpha)

            first = run_mechanism(mechanism, shared)
            second = run_mechanism(mechanism, shared)
            fresh = run_mechanism(mechanism, derive_bundle(instance, alpha))

            assert first.serialize() == second.serialize()
            assert first.serialize() == fresh.serialize()
