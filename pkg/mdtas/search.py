#!/usr/bin/env python3
import math
import numpy as np
import mdtas.consts
import mdtas.utils

from logging import Logger
from typing import List, Optional, Tuple

from mdtas.evaluation import distortion
from mdtas.exceptions import ParameterError, UnsupportedError
from mdtas.mechanisms import get_mechanism
from mdtas.models import (
    GeneralInstance,
    HistoryEntry,
    Instance,
    LineInstance,
    SearchConfig,
    SearchResult,
)

log: Logger = mdtas.utils.log

# general instances live in the unit square
PLANE_DIMENSIONS: int = 2


def _reflect(values: np.ndarray) -> np.ndarray:
    # folds the real line onto [0, 1] so perturbed coordinates stay in range
    return 1 - np.abs(np.mod(values, 2) - 1)


class _Embedding():
    '''
    Coordinates of every agent and alternative, agents first. Line instances
    use one coordinate per point, general instances a point in the plane, so
    every perturbation still yields a metric.
    '''

    def __init__(self, space: str, n_agents: int, coordinates: np.ndarray) -> None:
        self.space = space
        self.n_agents = n_agents
        self.coordinates = coordinates

    @classmethod
    def draw(cls, space: str, n: int, m: int, rng: np.random.Generator) -> '_Embedding':
        if space == mdtas.consts.LINE:
            return cls(space, n, rng.uniform(0.0, 1.0, size=n + m))
        return cls(space, n, rng.uniform(0.0, 1.0, size=(n + m, PLANE_DIMENSIONS)))

    def perturbed(self, rng: np.random.Generator, step_size: float) -> '_Embedding':
        flat = self.coordinates.ravel().copy()
        index = int(rng.integers(flat.size))
        flat[index] = _reflect(flat[index] + rng.normal(0.0, step_size))
        return _Embedding(self.space, self.n_agents, flat.reshape(self.coordinates.shape))

    def to_instance(self) -> Instance:
        agents, alternatives = self.coordinates[:self.n_agents], self.coordinates[self.n_agents:]

        if self.space == mdtas.consts.LINE:
            return LineInstance(agents, alternatives)
        return GeneralInstance.from_points(agents, alternatives)


def _check_space(space: str) -> None:
    if space not in mdtas.consts.SPACES:
        raise UnsupportedError(f'Unknown space "{space}", expected one of {", ".join(mdtas.consts.SPACES)}')


def random_instance(space: str, n: int, m: int, seed: Optional[int] = None) -> Instance:
    '''
    Draws a random instance: uniform positions in [0, 1] on the line, or
    uniform points in the unit square with Euclidean distances.

    Parameters:
        space (str): 'line' or 'general'
        n (int): number of agents
        m (int): number of alternatives
        seed (Optional[int]): seed of the generator

    Returns:
        Instance
    '''
    _check_space(space)

    if n < 1 or m < 1:
        raise ParameterError('size', 'n >= 1 and m >= 1', (n, m))

    return _Embedding.draw(space, n, m, np.random.default_rng(seed)).to_instance()


def random_corpus(
    space: str,
    count: int,
    n_range: Tuple[int, int],
    m_range: Tuple[int, int],
    seed: int = mdtas.consts.DEFAULT_SEED) -> List[Tuple[str, Instance]]:
    '''
    A deterministic corpus of `count` random instances whose sizes are drawn
    uniformly from the inclusive ranges

    Returns:
        List[Tuple[str, Instance]]: (instance id, instance) pairs
    '''
    _check_space(space)

    for name, (low, high) in (('n_range', n_range), ('m_range', m_range)):
        if not 1 <= low <= high:
            raise ParameterError(name, '1 <= low <= high', (low, high))

    rng = np.random.default_rng(seed)
    corpus: List[Tuple[str, Instance]] = []

    for index in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        m = int(rng.integers(m_range[0], m_range[1] + 1))
        corpus.append((f'{space}-{seed}-{index:05d}', _Embedding.draw(space, n, m, rng).to_instance()))

    log.info(f'Drew {count} {space} instance(s) with seed {seed}')
    return corpus


def _score(config: SearchConfig, instance: Instance, tolerance: float) -> float:
    report = distortion(instance, config.mechanism, config.objective, tolerance)

    # a zero optimum says nothing about the worst case
    if report.degenerate or math.isinf(report.ratio):
        return -math.inf
    return report.ratio


def hill_climb(config: SearchConfig, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> SearchResult:
    '''
    Looks for instances on which a mechanism has high distortion. Each restart
    draws a fresh instance, then perturbs one coordinate at a time and keeps
    the move only if the ratio strictly increases. Restarts get independent
    generators spawned from the configured seed, so the result depends on the
    seed alone.

    Parameters:
        config (SearchConfig): mechanism, objective, space, sizes, budget and seed
        tolerance (float): comparison slack

    Returns:
        SearchResult: the best instance found, its ratio, and every accepted improvement.
        When every restart stays degenerate the first draw is reported at ratio 1.
    '''
    if config.mechanism.name != mdtas.consts.OMNISCIENT:
        mechanism = get_mechanism(config.mechanism.name)

        if mechanism.needs_line and config.space != mdtas.consts.LINE:
            raise UnsupportedError(f'{mechanism.name} is only defined on the line, not on {config.space} instances')

    history: List[HistoryEntry] = []
    best: Optional[Tuple[float, int, Instance]] = None
    fallback: Optional[Tuple[float, int, Instance]] = None
    streams = np.random.SeedSequence(config.seed).spawn(config.restarts)

    for restart, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        n = int(rng.integers(config.n_range[0], config.n_range[1] + 1))
        m = int(rng.integers(config.m_range[0], config.m_range[1] + 1))

        current = _Embedding.draw(config.space, n, m, rng)
        current_instance = current.to_instance()
        current_ratio = _score(config, current_instance, tolerance)

        if best is None and math.isfinite(current_ratio):
            best = (current_ratio, restart, current_instance)

        if math.isfinite(current_ratio):
            history.append(HistoryEntry(restart, 0, current_ratio))

        for step in range(1, config.steps + 1):
            candidate = current.perturbed(rng, config.step_size)
            candidate_instance = candidate.to_instance()
            ratio = _score(config, candidate_instance, tolerance)

            if ratio > current_ratio:
                current, current_instance, current_ratio = candidate, candidate_instance, ratio
                history.append(HistoryEntry(restart, step, ratio))

        log.debug(f'Restart {restart} of {config.mechanism}: ratio {current_ratio}')

        if math.isfinite(current_ratio) and (best is None or current_ratio > best[0]):
            best = (current_ratio, restart, current_instance)

        if fallback is None:
            fallback = (1.0, restart, current_instance)

    # every restart stayed degenerate: report the first instance at ratio 1
    best_ratio, best_restart, best_instance = best if best is not None else fallback  # type: ignore
    log.info(f'Search for {config.mechanism} {config.objective} on {config.space}: best ratio {best_ratio:.12g} at restart {best_restart}')

    return SearchResult(
        config=config,
        best_instance=best_instance,
        best_ratio=best_ratio,
        best_restart=best_restart,
        history=tuple(history),
        seed=config.seed,
    )
