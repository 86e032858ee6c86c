#!/usr/bin/env python3
import os
import mdtas.consts

from math import sqrt
from typing import List

MDTAS_TEST_LOG_DIR: str = mdtas.consts.MDTAS_LOG_DIR
MDTAS_TEST_LOG_FILE: str = os.path.join(MDTAS_TEST_LOG_DIR, 'mdtas-test.log')

TOLERANCE: float = 1e-9
GOLDEN: float = 1.0 + sqrt(2.0)

# every ratio checked against a proven bound may exceed it by at most this much
BOUND_SLACK: float = 1e-9

CORPUS_SEED: int = 20240601
CORPUS_SIZE: int = 10_000
CONDITION_CORPUS_SIZE: int = 2_000

ANY_APPROVED_ALPHAS: List[float] = [1.0, 1.5, 2.0, 3.0]
CONDITION_ALPHAS: List[float] = [1.0, 1.5, GOLDEN, 3.0]

# path metric on three points with d(0,2) broken
BROKEN_TRIANGLE: List[List[float]] = [
    [0.0, 1.0, 5.0],
    [1.0, 0.0, 1.0],
    [5.0, 1.0, 0.0],
]

PATH_METRIC: List[List[float]] = [
    [0.0, 1.0, 2.0],
    [1.0, 0.0, 1.0],
    [2.0, 1.0, 0.0],
]

# one agent, two alternatives, d(agent, a1) edited on one side only
ASYMMETRIC_INSTANCE: dict = {
    'kind': 'general',
    'n_agents': 1,
    'n_alternatives': 2,
    'dist': [
        [0.0, 1.0, 2.0],
        [1.0, 0.0, 1.5],
        [2.5, 1.5, 0.0],
    ],
}

LINE_INSTANCE: dict = {
    'kind': 'line',
    'n_agents': 3,
    'n_alternatives': 3,
    'agent_positions': [0.9, 1.0, 1.1],
    'alternative_positions': [0.0, 1.0, 2.0],
}
