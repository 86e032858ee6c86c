#!/usr/bin/env python3
import os
import mdtas.color

from math import sqrt
from os.path import join, expanduser, normpath
from typing import List

MDTAS: str = 'mdtas'

AGENT: str = 'agent'
ALTERNATIVE: str = 'alternative'

GENERAL: str = 'general'
LINE: str = 'line'
SPACES: List[str] = [LINE, GENERAL]

# elicitation views
ORDINAL: str = 'ordinal'
DISTANCES: str = 'distances'
TAS: str = 'tas'
ALL_VIEWS: frozenset = frozenset({ORDINAL, DISTANCES, TAS})

SOCIAL_COST: str = 'SC'
MAX_COST: str = 'MC'

MINISUM_TAS: str = 'MinisumTAS'
ELIMINATION_WEIGHTED_MAJORITY: str = 'EliminationWeightedMajority'
MOST_COMPACT_SET: str = 'MostCompactSet'
MAX_TAS_LEFTMOST: str = 'MaxTASLeftmost'
MINIMAX_TAS: str = 'MinimaxTAS'
ANY_APPROVED: str = 'AnyApproved'
TOP_CHOICE_DICTATOR: str = 'TopChoiceDictator'
OMNISCIENT: str = 'Omniscient'

CYCLIC_SYMMETRIC: str = 'CyclicSymmetric'
SC_ALL_THREE: str = 'SCAllThree'
SC_DIST_TAS: str = 'SCDistTAS'
SC_ORD_TAS: str = 'SCOrdTAS'
TAS_ONLY_LINE: str = 'TASOnlyLine'
LINE_SC_ORDINAL_1: str = 'LineSCOrdinal1'
LINE_SC_ORDINAL_2: str = 'LineSCOrdinal2'
LINE_SC_DIST_1: str = 'LineSCDist1'
LINE_SC_DIST_2: str = 'LineSCDist2'
MC_GENERAL_I1: str = 'MCGeneral_I1'
MC_GENERAL_I2: str = 'MCGeneral_I2'
MC_TAS_ONLY: str = 'MCTASOnly'

GOLDEN_ALPHA: float = 1.0 + sqrt(2.0)
DEFAULT_TOLERANCE: float = 1e-9
DEFAULT_EPSILON: float = 1e-6
DEFAULT_DELTA: float = 1e-6
SIGNIFICANT_DIGITS: int = 12

# predicted construction costs are compared at ten times the base tolerance
PREDICTION_TOLERANCE_FACTOR: float = 10.0

DEFAULT_RESTARTS: int = 20
DEFAULT_STEPS: int = 200
DEFAULT_STEP_SIZE: float = 0.05
DEFAULT_SEED: int = 0

EXIT_OK: int = 0
EXIT_VIOLATION: int = 1
EXIT_FATAL: int = 127

JSON: str = 'json'
CSV: str = 'csv'
OUTPUT_FORMATS: List[str] = [JSON, CSV]

BATCH_CSV_COLUMNS: List[str] = ['instance_id', 'mechanism', 'alpha', 'objective', 'winner', 'ratio']
SWEEP_CSV_COLUMNS: List[str] = ['mechanism', 'alpha', 'objective', 'space', 'instances', 'max_ratio', 'bound', 'status']

GREEN_CHECK_MARK: str = mdtas.color.N_GREEN + u'✓' + mdtas.color.RESET
RED_X: str = mdtas.color.N_RED + u'✘' + mdtas.color.RESET

HOME_DIR: str = expanduser("~")

MDTAS_TOLERANCE_ENV: str = 'MDTAS_TOLERANCE'
MDTAS_LOG_DIR_ENV: str = 'MDTAS_LOG_DIR'

MDTAS_CONFIG_DIR: str = normpath(join(HOME_DIR, '.config', MDTAS))
MDTAS_LOG_DIR: str = normpath(os.environ.get(MDTAS_LOG_DIR_ENV, join(MDTAS_CONFIG_DIR, 'log')))
MDTAS_CLI_LOG_FILE: str = join(MDTAS_LOG_DIR, 'mdtas-cli.log')
