#!/usr/bin/env python3
import math
import pytest
import numpy as np

import mdtas.consts
import mdtas.search

from logging import Logger
from mdtas_test import consts as test_consts
from mdtas_test.models import MDTASTestLogger
from mdtas.core import validate_metric
from mdtas.evaluation import distortion, proven_bound
from mdtas.exceptions import ParameterError, UnsupportedError
from mdtas.mechanisms import MECHANISMS
from mdtas.models import GeneralInstance, LineInstance, MechanismId, Objective, SearchConfig
from mdtas.search import hill_climb, random_corpus, random_instance

log: Logger = MDTASTestLogger().logger # type: ignore

SC = Objective.SOCIAL_COST
MC = Objective.MAX_COST
GOLDEN = test_consts.GOLDEN


def test_random_instance_is_reproducible():
    first = random_instance(mdtas.consts.LINE, 4, 3, seed=7)
    second = random_instance(mdtas.consts.LINE, 4, 3, seed=7)

    np.testing.assert_array_equal(first.agent_positions, second.agent_positions)
    np.testing.assert_array_equal(first.alternative_positions, second.alternative_positions)


def test_random_instance_shapes_and_ranges():
    line = random_instance(mdtas.consts.LINE, 5, 2, seed=1)
    general = random_instance(mdtas.consts.GENERAL, 3, 4, seed=1)

    assert isinstance(line, LineInstance)
    assert (line.n_agents, line.n_alternatives) == (5, 2)
    assert np.all((line.agent_positions >= 0) & (line.agent_positions <= 1))

    assert isinstance(general, GeneralInstance)
    assert (general.n_agents, general.n_alternatives) == (3, 4)
    assert validate_metric(general.dist).ok


def test_random_instance_rejects_bad_input():
    with pytest.raises(ParameterError):
        random_instance(mdtas.consts.LINE, 0, 2)

    with pytest.raises(UnsupportedError):
        random_instance('torus', 2, 2)


def test_single_agent_single_alternative_has_ratio_one():
    instance = random_instance(mdtas.consts.LINE, 1, 1, seed=3)

    for name in MECHANISMS:
        alpha = 1.0 if name == mdtas.consts.TOP_CHOICE_DICTATOR else GOLDEN

        for objective in (SC, MC):
            assert distortion(instance, MechanismId(name, alpha), objective).ratio == 1.0


def test_random_corpus_is_deterministic():
    first = random_corpus(mdtas.consts.GENERAL, 20, (1, 4), (2, 3), seed=11)
    second = random_corpus(mdtas.consts.GENERAL, 20, (1, 4), (2, 3), seed=11)

    assert [instance_id for instance_id, _ in first] == [instance_id for instance_id, _ in second]

    for (_, a), (_, b) in zip(first, second):
        np.testing.assert_array_equal(a.dist, b.dist)


def test_random_corpus_sizes_and_ids():
    corpus = random_corpus(mdtas.consts.LINE, 50, (1, 3), (2, 5), seed=5)

    assert len(corpus) == 50
    assert corpus[0][0] == 'line-5-00000'
    assert len({instance_id for instance_id, _ in corpus}) == 50

    for _, instance in corpus:
        assert 1 <= instance.n_agents <= 3
        assert 2 <= instance.n_alternatives <= 5


def test_random_corpus_rejects_bad_ranges():
    with pytest.raises(ParameterError):
        random_corpus(mdtas.consts.LINE, 5, (3, 2), (1, 1))


def test_hill_climb_omniscient_stays_at_one():
    config = SearchConfig(MechanismId(mdtas.consts.OMNISCIENT), SC, restarts=3, steps=20, seed=2)
    assert hill_climb(config).best_ratio == 1.0


def test_hill_climb_is_reproducible():
    config = SearchConfig(MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN), SC, n_range=(2, 3), m_range=(2, 3), restarts=4, steps=40, seed=9)
    first, second = hill_climb(config), hill_climb(config)

    assert first.best_ratio == second.best_ratio
    assert first.best_restart == second.best_restart
    assert first.history == second.history


def test_hill_climb_history_increases_within_restart():
    config = SearchConfig(MechanismId(mdtas.consts.MINIMAX_TAS, GOLDEN), MC, restarts=3, steps=60, seed=4)
    result = hill_climb(config)

    for restart in range(config.restarts):
        ratios = [entry.ratio for entry in result.history if entry.restart == restart]
        assert all(later > earlier for earlier, later in zip(ratios, ratios[1:]))

    assert result.best_ratio == max(entry.ratio for entry in result.history)


def test_hill_climb_best_instance_reproduces_best_ratio():
    config = SearchConfig(MechanismId(mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY, GOLDEN), SC, restarts=3, steps=80, seed=6)
    result = hill_climb(config)
    report = distortion(result.best_instance, config.mechanism, config.objective)

    assert report.ratio == pytest.approx(result.best_ratio)


def test_hill_climb_respects_proven_bound_on_general_metrics():
    mechanism = MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN)
    config = SearchConfig(mechanism, SC, space=mdtas.consts.GENERAL, n_range=(2, 3), m_range=(2, 3), restarts=3, steps=60, seed=8)
    result = hill_climb(config)

    assert result.best_ratio <= proven_bound(mechanism, SC, mdtas.consts.GENERAL) + test_consts.BOUND_SLACK


def test_hill_climb_line_mechanism_on_general_space():
    config = SearchConfig(MechanismId(mdtas.consts.MAX_TAS_LEFTMOST, GOLDEN), MC, space=mdtas.consts.GENERAL, restarts=1, steps=1)

    with pytest.raises(UnsupportedError):
        hill_climb(config)


def test_search_config_validation():
    with pytest.raises(ParameterError):
        SearchConfig(MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN), SC, restarts=0)

    with pytest.raises(ParameterError):
        SearchConfig(MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN), SC, step_size=0.0)

    with pytest.raises(ParameterError):
        SearchConfig(MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN), SC, n_range=(3, 1))

    with pytest.raises(UnsupportedError):
        SearchConfig(MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN), SC, space='torus')


def test_search_result_serialization():
    config = SearchConfig(MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN), SC, restarts=2, steps=5, seed=1)
    data = hill_climb(config).serialize()

    assert data['seed'] == 1
    assert not math.isinf(float(data['best_ratio']))


def test_hill_climb_skips_degenerate_first_restart(monkeypatch):
    score = mdtas.search._score
    calls = []

    def first_degenerate(config, instance, tolerance):
        calls.append(instance)
        return -math.inf if len(calls) == 1 else score(config, instance, tolerance)

    monkeypatch.setattr(mdtas.search, '_score', first_degenerate)
    config = SearchConfig(MechanismId(mdtas.consts.OMNISCIENT), SC, restarts=3, steps=0, seed=5)
    result = hill_climb(config)

    assert result.best_restart == 1
    assert result.best_instance is calls[1]
    assert distortion(result.best_instance, config.mechanism, config.objective).ratio == result.best_ratio


def test_hill_climb_all_degenerate_falls_back_to_ratio_one(monkeypatch):
    monkeypatch.setattr(mdtas.search, '_score', lambda config, instance, tolerance: -math.inf)
    config = SearchConfig(MechanismId(mdtas.consts.MINISUM_TAS, GOLDEN), SC, restarts=2, steps=3, seed=5)
    result = hill_climb(config)

    assert result.best_ratio == 1.0
    assert result.best_restart == 0
    assert result.history == ()


@pytest.mark.parametrize('seed', [11, 12, 13, 14])
def test_hill_climb_best_ratio_is_a_measured_ratio(seed):
    config = SearchConfig(MechanismId(mdtas.consts.MINIMAX_TAS, GOLDEN), MC, n_range=(1, 3), m_range=(1, 3), restarts=3, steps=10, seed=seed)
    result = hill_climb(config)
    report = distortion(result.best_instance, config.mechanism, config.objective)

    assert not report.degenerate
    assert report.ratio == pytest.approx(result.best_ratio)
