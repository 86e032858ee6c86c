#!/usr/bin/env python3
import math
import logging
import logging.handlers
import pathlib
import numpy as np
import mdtas.consts

from enum import Enum
from functools import cached_property
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union
from scipy.spatial.distance import cdist

from mdtas.exceptions import ParameterError, StructuralError, UnsupportedError


class MDTASLogger():
    '''
    Object used for logging while mdtas is executing.
    Log files can be found in ~/.config/mdtas/log, or in $MDTAS_LOG_DIR when set
    '''

    def __init__(self):
        self.log_file: str = mdtas.consts.MDTAS_CLI_LOG_FILE

        pathlib.Path(mdtas.consts.MDTAS_LOG_DIR).mkdir(parents=True, exist_ok=True)
        pathlib.Path(self.log_file).touch(exist_ok=True)

        self.log_format: str = '%(asctime)s.%(msecs)03d %(levelname)s %(module)s - %(funcName)s: %(message)s'
        logging.basicConfig(filename=self.log_file, format=self.log_format)
        logger: logging.Logger = logging.getLogger()
        logger.setLevel(logging.INFO)

        self.handler = logging.handlers.RotatingFileHandler(
            self.log_file,
            mode='a',
            maxBytes=1024*1024,
            backupCount=2,
            encoding=None,
            delay=False
        )

        logger.addHandler(self.handler)
        self.logger = logger


def significant(value: float, digits: int = mdtas.consts.SIGNIFICANT_DIGITS) -> Union[float, str]:
    '''
    Rounds a float to a fixed number of significant digits so serialized
    reports are stable across runs. Infinite values become the strings
    "inf"/"-inf", which JSON cannot otherwise carry.

    Parameters:
        value (float): the number to round
        digits (int): significant digits to keep

    Returns:
        Union[float, str]: the rounded value
    '''
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return float(f'{value:.{digits}g}')


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _as_matrix(values, name: str) -> np.ndarray:
    matrix = np.array(values, dtype=float)

    if matrix.ndim != 2:
        raise StructuralError(f'{name} must be a two dimensional matrix, got shape {matrix.shape}')

    if not np.all(np.isfinite(matrix)):
        raise StructuralError(f'{name} contains non-finite entries')

    return matrix


class Objective(Enum):
    '''
    Social cost sums the agent distances to an alternative, max cost takes the
    largest of them.
    '''
    SOCIAL_COST = mdtas.consts.SOCIAL_COST
    MAX_COST = mdtas.consts.MAX_COST

    @classmethod
    def parse(cls, text: str) -> 'Objective':
        for objective in cls:
            if text.upper() in (objective.value, objective.name):
                return objective
        raise UnsupportedError(f'Unknown objective "{text}", expected one of {", ".join(o.value for o in cls)}')

    def __str__(self) -> str:
        return self.value


class GeneralInstance():
    '''
    A finite metric over agents and alternatives. The joint matrix orders
    agents first, so point k < n_agents is agent k and point n_agents + x is
    alternative x.

    The agent-agent block may be left out, in which case it is filled with the
    shortest route through one alternative. That equals the metric closure of
    the other two blocks whenever they are themselves consistent.
    '''
    kind: str = mdtas.consts.GENERAL

    def __init__(self, agent_alt, alt_alt, agent_agent=None) -> None:
        agent_alt = _as_matrix(agent_alt, 'agent-alternative block')
        alt_alt = _as_matrix(alt_alt, 'alternative-alternative block')
        n_agents, n_alternatives = agent_alt.shape

        if n_agents < 1 or n_alternatives < 1:
            raise StructuralError('an instance needs at least one agent and one alternative')

        if alt_alt.shape != (n_alternatives, n_alternatives):
            raise StructuralError(f'alternative block has shape {alt_alt.shape}, expected {(n_alternatives, n_alternatives)}')

        if agent_agent is not None:
            agent_agent = _as_matrix(agent_agent, 'agent-agent block')

            if agent_agent.shape != (n_agents, n_agents):
                raise StructuralError(f'agent block has shape {agent_agent.shape}, expected {(n_agents, n_agents)}')

            agent_agent = _readonly(agent_agent)

        self.agent_alt: np.ndarray = _readonly(agent_alt)
        self.alt_alt: np.ndarray = _readonly(alt_alt)
        self._agent_agent: Optional[np.ndarray] = agent_agent

    @classmethod
    def from_matrix(cls, dist, n_agents: int) -> 'GeneralInstance':
        '''
        Splits a joint (n+m)x(n+m) matrix into its blocks.

        Parameters:
            dist (array-like): the joint matrix, agents first
            n_agents (int): number of leading rows that belong to agents

        Returns:
            GeneralInstance
        '''
        matrix = _as_matrix(dist, 'distance matrix')

        if matrix.shape[0] != matrix.shape[1]:
            raise StructuralError(f'distance matrix must be square, got shape {matrix.shape}')

        if not 1 <= n_agents < matrix.shape[0]:
            raise StructuralError(f'n_agents={n_agents} does not fit a matrix of size {matrix.shape[0]}')

        return cls(
            agent_alt=matrix[:n_agents, n_agents:],
            alt_alt=matrix[n_agents:, n_agents:],
            agent_agent=matrix[:n_agents, :n_agents],
        )

    @classmethod
    def from_blocks(cls, agent_alt, alt_alt) -> 'GeneralInstance':
        return cls(agent_alt=agent_alt, alt_alt=alt_alt)

    @classmethod
    def from_points(cls, agent_points, alternative_points) -> 'GeneralInstance':
        '''
        Euclidean instance from point coordinates (one row per point).
        '''
        agents = np.atleast_2d(np.asarray(agent_points, dtype=float))
        alternatives = np.atleast_2d(np.asarray(alternative_points, dtype=float))
        return cls(
            agent_alt=cdist(agents, alternatives),
            alt_alt=cdist(alternatives, alternatives),
            agent_agent=cdist(agents, agents),
        )

    @property
    def n_agents(self) -> int:
        return int(self.agent_alt.shape[0])

    @property
    def n_alternatives(self) -> int:
        return int(self.agent_alt.shape[1])

    @cached_property
    def agent_agent(self) -> np.ndarray:
        if self._agent_agent is not None:
            return self._agent_agent

        through = np.array([np.min(row + self.agent_alt, axis=1) for row in self.agent_alt])
        np.fill_diagonal(through, 0.0)
        return _readonly(through)

    @cached_property
    def dist(self) -> np.ndarray:
        top = np.hstack([self.agent_agent, self.agent_alt])
        bottom = np.hstack([self.agent_alt.T, self.alt_alt])
        return _readonly(np.vstack([top, bottom]))

    def to_general(self) -> 'GeneralInstance':
        return self

    def with_alt_distance(self, x: int, y: int, value: float) -> 'GeneralInstance':
        '''
        Copy of the instance with d(x, y) = d(y, x) = value for two alternatives
        '''
        alt_alt = np.array(self.alt_alt)
        alt_alt[x, y] = alt_alt[y, x] = value
        return GeneralInstance(self.agent_alt.copy(), alt_alt, self._agent_agent)

    def serialize(self) -> dict:
        return {
            'kind': self.kind,
            'n_agents': self.n_agents,
            'n_alternatives': self.n_alternatives,
            'dist': self.dist.tolist(),
        }

    def __repr__(self) -> str:
        return f'GeneralInstance(n_agents={self.n_agents}, n_alternatives={self.n_alternatives})'


class LineInstance():
    '''
    Agents and alternatives at explicit positions on the real line, with
    d(p, q) = |p - q|.
    '''
    kind: str = mdtas.consts.LINE

    def __init__(self, agent_positions: Sequence[float], alternative_positions: Sequence[float]) -> None:
        agents = np.array(agent_positions, dtype=float).ravel()
        alternatives = np.array(alternative_positions, dtype=float).ravel()

        if agents.size < 1 or alternatives.size < 1:
            raise StructuralError('a line instance needs at least one agent and one alternative')

        if not (np.all(np.isfinite(agents)) and np.all(np.isfinite(alternatives))):
            raise StructuralError('line positions must be finite')

        self.agent_positions: np.ndarray = _readonly(agents)
        self.alternative_positions: np.ndarray = _readonly(alternatives)
        self.agent_alt: np.ndarray = _readonly(np.abs(agents[:, None] - alternatives[None, :]))
        self.alt_alt: np.ndarray = _readonly(np.abs(alternatives[:, None] - alternatives[None, :]))

    @property
    def n_agents(self) -> int:
        return int(self.agent_positions.size)

    @property
    def n_alternatives(self) -> int:
        return int(self.alternative_positions.size)

    @cached_property
    def agent_agent(self) -> np.ndarray:
        return _readonly(np.abs(self.agent_positions[:, None] - self.agent_positions[None, :]))

    @cached_property
    def dist(self) -> np.ndarray:
        points = np.concatenate([self.agent_positions, self.alternative_positions])
        return _readonly(np.abs(points[:, None] - points[None, :]))

    def to_general(self) -> GeneralInstance:
        return GeneralInstance.from_matrix(self.dist, self.n_agents)

    def serialize(self) -> dict:
        return {
            'kind': self.kind,
            'n_agents': self.n_agents,
            'n_alternatives': self.n_alternatives,
            'agent_positions': self.agent_positions.tolist(),
            'alternative_positions': self.alternative_positions.tolist(),
        }

    def __repr__(self) -> str:
        return f'LineInstance(agent_positions={self.agent_positions.tolist()}, alternative_positions={self.alternative_positions.tolist()})'


Instance = Union[GeneralInstance, LineInstance]


def instance_from_dict(data: dict) -> Instance:
    '''
    Inverse of GeneralInstance.serialize / LineInstance.serialize

    Parameters:
        data (dict): the decoded JSON object

    Returns:
        Instance: the instance it describes
    '''
    kind = data.get('kind')

    if kind == mdtas.consts.LINE:
        instance: Instance = LineInstance(data['agent_positions'], data['alternative_positions'])
    elif kind == mdtas.consts.GENERAL:
        instance = GeneralInstance.from_matrix(data['dist'], int(data['n_agents']))
    else:
        raise StructuralError(f'unknown instance kind "{kind}"')

    for key, actual in (('n_agents', instance.n_agents), ('n_alternatives', instance.n_alternatives)):
        if key in data and int(data[key]) != actual:
            raise StructuralError(f'{key}={data[key]} disagrees with the {actual} found in the data')

    return instance


class OrdinalProfile():
    '''
    Per agent, a ranking of all alternatives (most preferred first)
    '''

    def __init__(self, rankings) -> None:
        rankings = np.array(rankings, dtype=int)

        if rankings.ndim != 2:
            raise StructuralError(f'rankings must be a matrix, got shape {rankings.shape}')

        expected = np.arange(rankings.shape[1])

        for agent, ranking in enumerate(rankings):
            if not np.array_equal(np.sort(ranking), expected):
                raise StructuralError(f'ranking of agent {agent} is not a permutation of 0..{rankings.shape[1] - 1}')

        self.rankings: np.ndarray = _readonly(rankings)

    @property
    def n_agents(self) -> int:
        return int(self.rankings.shape[0])

    @property
    def n_alternatives(self) -> int:
        return int(self.rankings.shape[1])

    @property
    def top_choices(self) -> np.ndarray:
        return self.rankings[:, 0]

    @cached_property
    def positions(self) -> np.ndarray:
        ''' positions[i, x] is the rank of alternative x for agent i (0 = top) '''
        ranks = np.empty_like(self.rankings)
        rows = np.arange(self.n_agents)[:, None]
        ranks[rows, self.rankings] = np.arange(self.n_alternatives)[None, :]
        return _readonly(ranks)

    def prefers(self, x: int, y: int) -> np.ndarray:
        ''' boolean mask of agents ranking x strictly before y '''
        return self.positions[:, x] < self.positions[:, y]

    def serialize(self) -> List[List[int]]:
        return self.rankings.tolist()

    def __eq__(self, other) -> bool:
        return isinstance(other, OrdinalProfile) and np.array_equal(self.rankings, other.rankings)


class TASProfile():
    '''
    The alpha-threshold approval sets, stored as a boolean agents x alternatives
    matrix
    '''

    def __init__(self, alpha: float, approvals) -> None:
        approvals = np.array(approvals, dtype=bool)

        if alpha < 1:
            raise ParameterError('alpha', 'alpha >= 1', alpha)

        if approvals.ndim != 2:
            raise StructuralError(f'approvals must be a matrix, got shape {approvals.shape}')

        self.alpha: float = float(alpha)
        self.approvals: np.ndarray = _readonly(approvals)

    @classmethod
    def from_sets(cls, alpha: float, sets: Sequence[Sequence[int]], n_alternatives: int) -> 'TASProfile':
        approvals = np.zeros((len(sets), n_alternatives), dtype=bool)

        for agent, approved in enumerate(sets):
            for alternative in approved:
                if not 0 <= int(alternative) < n_alternatives:
                    raise StructuralError(f'agent {agent} approves unknown alternative {alternative}')
                approvals[agent, int(alternative)] = True

        return cls(alpha, approvals)

    @property
    def n_agents(self) -> int:
        return int(self.approvals.shape[0])

    @property
    def n_alternatives(self) -> int:
        return int(self.approvals.shape[1])

    @property
    def sets(self) -> List[FrozenSet[int]]:
        return [frozenset(int(x) for x in np.flatnonzero(row)) for row in self.approvals]

    def serialize(self) -> List[List[int]]:
        return [sorted(approved) for approved in self.sets]

    def __eq__(self, other) -> bool:
        return isinstance(other, TASProfile) and self.alpha == other.alpha and np.array_equal(self.approvals, other.approvals)


class AltDistances():
    ''' distances between alternatives only '''

    def __init__(self, matrix) -> None:
        matrix = _as_matrix(matrix, 'alternative distances')

        if matrix.shape[0] != matrix.shape[1]:
            raise StructuralError(f'alternative distances must be square, got shape {matrix.shape}')

        self.matrix: np.ndarray = _readonly(matrix)

    @property
    def n_alternatives(self) -> int:
        return int(self.matrix.shape[0])

    def serialize(self) -> List[List[float]]:
        return self.matrix.tolist()


@dataclass(frozen=True)
class Provenance:
    '''
    Names the instance a bundle was derived from. Line sources carry their
    positions so line-ordering mechanisms can read the left-to-right order.
    '''
    source: str
    agent_positions: Optional[Tuple[float, ...]] = None
    alternative_positions: Optional[Tuple[float, ...]] = None

    @property
    def is_line(self) -> bool:
        return self.agent_positions is not None and self.alternative_positions is not None

    def serialize(self) -> dict:
        data: dict = {'source': self.source}

        if self.is_line:
            data['agent_positions'] = list(self.agent_positions)
            data['alternative_positions'] = list(self.alternative_positions)

        return data


class ElicitationBundle():
    '''
    The views a mechanism is allowed to see: any nonempty subset of the ordinal
    profile, the alternative distances and the TAS profile.
    '''

    def __init__(
        self,
        provenance: Provenance,
        ordinal: Optional[OrdinalProfile] = None,
        alt_distances: Optional[AltDistances] = None,
        tas: Optional[TASProfile] = None) -> None:

        if ordinal is None and alt_distances is None and tas is None:
            raise StructuralError('an elicitation bundle needs at least one view')

        counts = {view.n_alternatives for view in (ordinal, alt_distances, tas) if view is not None}
        agents = {view.n_agents for view in (ordinal, tas) if view is not None}

        if len(counts) > 1 or len(agents) > 1:
            raise StructuralError('bundle views disagree on the number of agents or alternatives')

        self.provenance = provenance
        self.ordinal = ordinal
        self.alt_distances = alt_distances
        self.tas = tas

    @property
    def views(self) -> FrozenSet[str]:
        present = {
            mdtas.consts.ORDINAL: self.ordinal,
            mdtas.consts.DISTANCES: self.alt_distances,
            mdtas.consts.TAS: self.tas,
        }
        return frozenset(name for name, view in present.items() if view is not None)

    @property
    def n_alternatives(self) -> int:
        for view in (self.ordinal, self.alt_distances, self.tas):
            if view is not None:
                return view.n_alternatives
        return 0

    @property
    def n_agents(self) -> Optional[int]:
        for view in (self.ordinal, self.tas):
            if view is not None:
                return view.n_agents
        return None

    def serialize(self) -> dict:
        data: dict = {'provenance': self.provenance.serialize()}

        if self.ordinal is not None:
            data['ordinal'] = self.ordinal.serialize()
        if self.alt_distances is not None:
            data['alt_distances'] = self.alt_distances.serialize()
        if self.tas is not None:
            data['alpha'] = self.tas.alpha
            data['tas'] = self.tas.serialize()

        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'ElicitationBundle':
        source = data.get('provenance', {})
        provenance = Provenance(
            source=str(source.get('source', 'unknown')),
            agent_positions=tuple(source['agent_positions']) if 'agent_positions' in source else None,
            alternative_positions=tuple(source['alternative_positions']) if 'alternative_positions' in source else None,
        )
        ordinal = OrdinalProfile(data['ordinal']) if 'ordinal' in data else None
        alt_distances = AltDistances(data['alt_distances']) if 'alt_distances' in data else None
        tas = None

        if 'tas' in data:
            n_alternatives = next(
                (view.n_alternatives for view in (ordinal, alt_distances) if view is not None),
                1 + max((max(approved) for approved in data['tas'] if approved), default=0)
            )
            tas = TASProfile.from_sets(float(data.get('alpha', 1.0)), data['tas'], n_alternatives)

        return cls(provenance, ordinal=ordinal, alt_distances=alt_distances, tas=tas)


# mechanisms whose alpha parameter is fixed or bounded more tightly than alpha >= 1
_ALPHA_CONSTRAINTS: Dict[str, Tuple[str, object]] = {
    mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY: ('alpha > 1', lambda alpha: alpha > 1),
    mdtas.consts.TOP_CHOICE_DICTATOR: ('alpha = 1', lambda alpha: alpha == 1),
}

MECHANISM_NAMES: List[str] = [
    mdtas.consts.MINISUM_TAS,
    mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY,
    mdtas.consts.MOST_COMPACT_SET,
    mdtas.consts.MAX_TAS_LEFTMOST,
    mdtas.consts.MINIMAX_TAS,
    mdtas.consts.ANY_APPROVED,
    mdtas.consts.TOP_CHOICE_DICTATOR,
    mdtas.consts.OMNISCIENT,
]


@dataclass(frozen=True)
class MechanismId:
    '''
    A mechanism name together with its threshold parameter alpha
    '''
    name: str
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.name not in MECHANISM_NAMES:
            raise UnsupportedError(f'Unknown mechanism "{self.name}", expected one of {", ".join(MECHANISM_NAMES)}')

        if not self.alpha >= 1 or math.isinf(self.alpha):
            raise ParameterError('alpha', 'alpha >= 1 and finite', self.alpha)

        if self.name in _ALPHA_CONSTRAINTS:
            constraint, check = _ALPHA_CONSTRAINTS[self.name]

            if not check(self.alpha):  # type: ignore
                raise ParameterError('alpha', f'{constraint} for {self.name}', self.alpha)

    def serialize(self) -> dict:
        return {'name': self.name, 'alpha': significant(self.alpha)}

    def __str__(self) -> str:
        return f'{self.name}(alpha={self.alpha:.12g})'


@dataclass(frozen=True)
class WinnerResult:
    winner: int
    trace: dict = field(default_factory=dict)

    def serialize(self) -> dict:
        return {'winner': self.winner, 'trace': _serialize_trace(self.trace)}


def _serialize_trace(value):
    if isinstance(value, dict):
        return {str(key): _serialize_trace(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_serialize_trace(item) for item in value]
    if isinstance(value, np.ndarray):
        return _serialize_trace(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return significant(float(value))
    return value


@dataclass(frozen=True)
class DistortionReport:
    mechanism: MechanismId
    objective: Objective
    winner: int
    winner_cost: float
    optimal: int
    optimal_cost: float
    ratio: float
    degenerate: bool = False
    trace: dict = field(default_factory=dict)

    def serialize(self) -> dict:
        return {
            'mechanism': self.mechanism.serialize(),
            'objective': self.objective.value,
            'winner': self.winner,
            'winner_cost': significant(self.winner_cost),
            'optimal': self.optimal,
            'optimal_cost': significant(self.optimal_cost),
            'ratio': significant(self.ratio),
            'degenerate': self.degenerate,
            'trace': _serialize_trace(self.trace),
        }


@dataclass(frozen=True)
class MCWinnerConditions:
    cond1: bool
    cond2: bool

    def serialize(self) -> dict:
        return {'cond1': self.cond1, 'cond2': self.cond2}


@dataclass(frozen=True)
class BatchRow:
    '''
    One (instance, mechanism, objective) evaluation of a corpus run, with the
    proven bound that applies to it, if any
    '''
    instance_id: str
    mechanism: MechanismId
    objective: Objective
    space: str
    n_agents: int
    winner: int
    ratio: float
    degenerate: bool
    bound: Optional[float]

    def violates(self, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> bool:
        return self.bound is not None and not self.ratio <= self.bound + tolerance

    def serialize(self) -> dict:
        return {
            'instance_id': self.instance_id,
            'mechanism': self.mechanism.name,
            'alpha': self.mechanism.alpha,
            'objective': self.objective.value,
            'winner': self.winner,
            'ratio': self.ratio,
        }


@dataclass(frozen=True)
class SweepCell:
    '''
    Summary of every batch row sharing a mechanism, alpha, objective and space
    '''
    mechanism: str
    alpha: float
    objective: Objective
    space: str
    instances: int
    max_ratio: float
    bound: Optional[float]
    violations: int

    @property
    def status(self) -> str:
        if self.violations:
            return 'VIOLATION'
        return 'ok' if self.bound is not None else 'no bound'

    def serialize(self) -> dict:
        return {
            'mechanism': self.mechanism,
            'alpha': self.alpha,
            'objective': self.objective.value,
            'space': self.space,
            'instances': self.instances,
            'max_ratio': self.max_ratio,
            'bound': self.bound if self.bound is not None else '',
            'status': self.status,
        }


@dataclass(frozen=True)
class ConstructionParams:
    n: int = 2
    alpha: float = mdtas.consts.GOLDEN_ALPHA
    epsilon: float = mdtas.consts.DEFAULT_EPSILON
    delta: float = mdtas.consts.DEFAULT_DELTA
    target: Optional[int] = None

    def serialize(self) -> dict:
        return {
            'n': self.n,
            'alpha': significant(self.alpha),
            'epsilon': significant(self.epsilon),
            'delta': significant(self.delta),
            'target': self.target,
        }


@dataclass(frozen=True)
class PredictedCosts:
    winner_cost: float
    best_cost: float

    @property
    def ratio(self) -> float:
        return self.winner_cost / self.best_cost if self.best_cost > 0 else math.inf

    def serialize(self) -> dict:
        return {
            'winner_cost': significant(self.winner_cost),
            'best_cost': significant(self.best_cost),
            'ratio': significant(self.ratio),
        }


@dataclass(frozen=True, eq=False)
class ConstructionOutput:
    '''
    A generated lower-bound witness: the instance, the bundle a mechanism would
    see, the alternative the adversary assumes the mechanism picked, the
    comparison alternative, and the costs the proof predicts for both.
    '''
    construction: str
    params: ConstructionParams
    objective: Objective
    instance: Instance
    bundle: ElicitationBundle
    adversarial_winner: int
    reference: int
    predicted: PredictedCosts
    declared_tas: Tuple[FrozenSet[int], ...]
    tie_break: Optional[np.ndarray] = None

    def serialize(self) -> dict:
        return {
            'construction': self.construction,
            'params': self.params.serialize(),
            'objective': self.objective.value,
            'adversarial_winner': self.adversarial_winner,
            'reference': self.reference,
            'predicted': self.predicted.serialize(),
        }


@dataclass(frozen=True)
class VerificationReport:
    construction: str
    passed: bool
    diffs: Tuple[str, ...]
    winner_cost: float
    best_cost: float

    @property
    def ratio(self) -> float:
        return self.winner_cost / self.best_cost if self.best_cost > 0 else math.inf

    def serialize(self) -> dict:
        return {
            'construction': self.construction,
            'passed': self.passed,
            'diffs': list(self.diffs),
            'winner_cost': significant(self.winner_cost),
            'best_cost': significant(self.best_cost),
            'ratio': significant(self.ratio),
        }


@dataclass(frozen=True)
class SearchConfig:
    mechanism: MechanismId
    objective: Objective
    space: str = mdtas.consts.LINE
    n_range: Tuple[int, int] = (2, 2)
    m_range: Tuple[int, int] = (2, 2)
    restarts: int = mdtas.consts.DEFAULT_RESTARTS
    steps: int = mdtas.consts.DEFAULT_STEPS
    step_size: float = mdtas.consts.DEFAULT_STEP_SIZE
    seed: int = mdtas.consts.DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.space not in mdtas.consts.SPACES:
            raise UnsupportedError(f'Unknown space "{self.space}", expected one of {", ".join(mdtas.consts.SPACES)}')

        for name, (low, high) in (('n_range', self.n_range), ('m_range', self.m_range)):
            if not 1 <= low <= high:
                raise ParameterError(name, '1 <= low <= high', (low, high))

        if self.restarts < 1 or self.steps < 0:
            raise ParameterError('budget', 'restarts >= 1 and steps >= 0', (self.restarts, self.steps))

        if not self.step_size > 0:
            raise ParameterError('step_size', 'step_size > 0', self.step_size)

    def serialize(self) -> dict:
        return {
            'mechanism': self.mechanism.serialize(),
            'objective': self.objective.value,
            'space': self.space,
            'n_range': list(self.n_range),
            'm_range': list(self.m_range),
            'restarts': self.restarts,
            'steps': self.steps,
            'step_size': significant(self.step_size),
            'seed': self.seed,
        }


@dataclass(frozen=True)
class HistoryEntry:
    restart: int
    step: int
    ratio: float

    def serialize(self) -> dict:
        return {'restart': self.restart, 'step': self.step, 'ratio': significant(self.ratio)}


@dataclass(frozen=True, eq=False)
class SearchResult:
    config: SearchConfig
    best_instance: Instance
    best_ratio: float
    best_restart: int
    history: Tuple[HistoryEntry, ...]
    seed: int

    def serialize(self) -> dict:
        return {
            'config': self.config.serialize(),
            'best_ratio': significant(self.best_ratio),
            'best_restart': self.best_restart,
            'seed': self.seed,
            'history': [entry.serialize() for entry in self.history],
            'best_instance': self.best_instance.serialize(),
        }


@dataclass(frozen=True)
class RunSpec:
    '''
    Everything a CLI invocation needs, independent of argparse
    '''
    command: str
    inputs: Tuple[str, ...] = ()
    mechanisms: Tuple[str, ...] = ()
    alphas: Tuple[float, ...] = ()
    objectives: Tuple[Objective, ...] = (Objective.SOCIAL_COST,)
    output: Optional[str] = None
    output_format: str = mdtas.consts.JSON
    seed: int = mdtas.consts.DEFAULT_SEED
    tolerance: float = mdtas.consts.DEFAULT_TOLERANCE
    options: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for alpha in self.alphas:
            if not alpha >= 1:
                raise ParameterError('alpha', 'every alpha in the grid >= 1', alpha)

        if self.output_format not in mdtas.consts.OUTPUT_FORMATS:
            raise UnsupportedError(f'Unknown output format "{self.output_format}"')

        if not self.tolerance >= 0:
            raise ParameterError('tolerance', 'tolerance >= 0', self.tolerance)
