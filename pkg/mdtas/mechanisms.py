#!/usr/bin/env python3
import numpy as np
import mdtas.consts
import mdtas.utils

from dataclasses import dataclass
from logging import Logger
from typing import Callable, Dict, FrozenSet, List, Optional

from mdtas.core import LineOrdering, line_ordering, restrict
from mdtas.exceptions import InvariantError, MissingViewError, ParameterError, UnsupportedError
from mdtas.models import AltDistances, ElicitationBundle, MechanismId, OrdinalProfile, TASProfile, WinnerResult

log: Logger = mdtas.utils.log


def _require_nonempty(tas: TASProfile) -> None:
    empty = np.flatnonzero(~tas.approvals.any(axis=1))

    if empty.size:
        raise InvariantError(f'agent(s) {", ".join(str(agent) for agent in empty)} approve no alternative')


def _lowest_argmin(scores: np.ndarray, tolerance: float) -> int:
    ''' first index whose score is within tolerance of the minimum '''
    return int(np.flatnonzero(scores <= scores.min() + tolerance)[0])


def set_distances(alt_dist: AltDistances, tas: TASProfile) -> np.ndarray:
    '''
    For every agent i and alternative x, the distance from x to the closest
    member of the approval set A_i.

    Parameters:
        alt_dist (AltDistances): distances between alternatives
        tas (TASProfile): the approval sets

    Returns:
        np.ndarray: agents x alternatives matrix of min_{j in A_i} d(j, x)
    '''
    _require_nonempty(tas)

    if alt_dist.n_alternatives != tas.n_alternatives:
        raise InvariantError('alternative distances and approval sets disagree on the number of alternatives')

    # agents with identical approval sets share a row
    patterns, inverse = np.unique(tas.approvals, axis=0, return_inverse=True)
    per_pattern = np.array([alt_dist.matrix[pattern].min(axis=0) for pattern in patterns])
    return per_pattern[np.ravel(inverse)]


def minisum_tas_distance(alt_dist: AltDistances, tas: TASProfile, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> WinnerResult:
    '''
    Picks the alternative minimizing the summed distance to every agent's
    approval set. Ties go to the lowest index.

    Parameters:
        alt_dist (AltDistances): distances between alternatives
        tas (TASProfile): the approval sets
        tolerance (float): scores this close to the minimum count as tied

    Returns:
        WinnerResult: the winner, with the per-alternative scores as trace
    '''
    scores = set_distances(alt_dist, tas).sum(axis=0)
    return WinnerResult(_lowest_argmin(scores, tolerance), {'scores': scores})


def minimax_tas_distance(alt_dist: AltDistances, tas: TASProfile, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> WinnerResult:
    '''
    Like minisum_tas_distance, but scoring each alternative by the largest
    distance to an approval set instead of the sum.
    '''
    scores = set_distances(alt_dist, tas).max(axis=0)
    return WinnerResult(_lowest_argmin(scores, tolerance), {'scores': scores})


def elimination_weighted_majority(
    line_order: LineOrdering,
    ordinal: OrdinalProfile,
    tas: TASProfile,
    tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> WinnerResult:
    '''
    Starts from x, the top choice of the lower median agent on the line, and
    keeps the neighbor of x (left or right in line order) that more agents
    prefer over x. x then faces that neighbor y in a weighted pairwise vote:
    agents approving both count 1, every other agent (alpha+1)/(alpha-1).
    x wins ties.

    Parameters:
        line_order (LineOrdering): left-to-right order of agents and alternatives
        ordinal (OrdinalProfile): the rankings
        tas (TASProfile): the approval sets, alpha > 1
        tolerance (float): slack of the final tally comparison

    Returns:
        WinnerResult: the winner, trace holding x, left, right, the elimination counts, y, weights and tallies
    '''
    if not tas.alpha > 1:
        raise ParameterError('alpha', 'alpha > 1 for EliminationWeightedMajority', tas.alpha)

    agents = line_order.agents
    alternatives = line_order.alternatives
    median = agents[(len(agents) + 1) // 2 - 1]
    x = int(ordinal.top_choices[median])

    place = alternatives.index(x)
    left: Optional[int] = alternatives[place - 1] if place > 0 else None
    right: Optional[int] = alternatives[place + 1] if place + 1 < len(alternatives) else None

    trace: dict = {'median_agent': median, 'x': x, 'left': left, 'right': right}

    if left is None and right is None:
        return WinnerResult(x, trace)

    n_left = int(ordinal.prefers(left, x).sum()) if left is not None else None
    n_right = int(ordinal.prefers(right, x).sum()) if right is not None else None

    if left is None:
        y = right
    elif right is None:
        y = left
    else:
        y = right if n_right >= n_left else left

    both = tas.approvals[:, x] & tas.approvals[:, y]
    weights = np.where(both, 1.0, (tas.alpha + 1) / (tas.alpha - 1))
    v_x = float(weights[ordinal.prefers(x, y)].sum())
    v_y = float(weights[ordinal.prefers(y, x)].sum())

    trace.update({'n_left': n_left, 'n_right': n_right, 'y': y, 'weights': weights, 'v_x': v_x, 'v_y': v_y})
    return WinnerResult(x if v_x + tolerance >= v_y else int(y), trace)


def most_compact_set(
    top_choices,
    alt_dist: AltDistances,
    tas: TASProfile,
    tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> WinnerResult:
    '''
    Returns the lowest-index alternative every agent approves when there is
    one. Otherwise each agent gets the radius of its approval set around its
    top choice, and the top choice of the agent with the smallest radius wins.

    Parameters:
        top_choices (array-like): most preferred alternative of every agent
        alt_dist (AltDistances): distances between alternatives
        tas (TASProfile): the approval sets
        tolerance (float): radii this close to the minimum count as tied

    Returns:
        WinnerResult
    '''
    _require_nonempty(tas)
    tops = np.asarray(top_choices, dtype=int)
    common = np.flatnonzero(tas.approvals.all(axis=0))

    if common.size:
        return WinnerResult(int(common[0]), {'common': True, 'intersection': common})

    radii = np.where(tas.approvals, alt_dist.matrix[tops], -np.inf).max(axis=1)
    agent = _lowest_argmin(radii, tolerance)
    return WinnerResult(int(tops[agent]), {'common': False, 'radii': radii, 'agent': agent})


def max_tas_leftmost(line_order: LineOrdering, tas: TASProfile) -> WinnerResult:
    '''
    The leftmost of the alternatives approved by the most agents
    '''
    counts = tas.approvals.sum(axis=0)
    best = set(int(x) for x in np.flatnonzero(counts == counts.max()))
    winner = next(x for x in line_order.alternatives if x in best)
    return WinnerResult(winner, {'counts': counts, 'argmax': sorted(best)})


def any_approved(tas: TASProfile) -> WinnerResult:
    _require_nonempty(tas)
    approved = np.flatnonzero(tas.approvals[0])
    return WinnerResult(int(approved[0]), {'agent': 0, 'approved': approved})


def top_choice_dictator(tas: TASProfile) -> WinnerResult:
    '''
    Agent 0's most preferred alternative, read from its 1-TAS (the lowest
    index when several alternatives tie)
    '''
    if tas.alpha != 1:
        raise ParameterError('alpha', 'alpha = 1 for TopChoiceDictator', tas.alpha)

    return any_approved(tas)


@dataclass(frozen=True)
class Mechanism:
    '''
    Registry entry: what a mechanism reads and how to run it on a bundle
    already restricted to those views.
    '''
    name: str
    views: FrozenSet[str]
    needs_line: bool
    default_alpha: float
    summary: str
    compute_fct: Callable[[ElicitationBundle, float], WinnerResult]

    def serialize(self) -> dict:
        return {
            'name': self.name,
            'views': sorted(self.views),
            'needs_line': self.needs_line,
            'default_alpha': self.default_alpha,
            'summary': self.summary,
        }


MECHANISMS: Dict[str, Mechanism] = {
    mechanism.name: mechanism for mechanism in [
        Mechanism(
            mdtas.consts.MINISUM_TAS,
            frozenset({mdtas.consts.DISTANCES, mdtas.consts.TAS}),
            False,
            mdtas.consts.GOLDEN_ALPHA,
            'minimize the summed distance to the approval sets',
            lambda bundle, tolerance: minisum_tas_distance(bundle.alt_distances, bundle.tas, tolerance),
        ),
        Mechanism(
            mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY,
            frozenset({mdtas.consts.ORDINAL, mdtas.consts.TAS}),
            True,
            mdtas.consts.GOLDEN_ALPHA,
            'median top choice against its stronger neighbor, weighted majority',
            lambda bundle, tolerance: elimination_weighted_majority(line_ordering(bundle), bundle.ordinal, bundle.tas, tolerance),
        ),
        Mechanism(
            mdtas.consts.MOST_COMPACT_SET,
            frozenset({mdtas.consts.ORDINAL, mdtas.consts.DISTANCES, mdtas.consts.TAS}),
            False,
            mdtas.consts.GOLDEN_ALPHA,
            'common approved alternative, else top choice with the tightest approval set',
            lambda bundle, tolerance: most_compact_set(bundle.ordinal.top_choices, bundle.alt_distances, bundle.tas, tolerance),
        ),
        Mechanism(
            mdtas.consts.MAX_TAS_LEFTMOST,
            frozenset({mdtas.consts.TAS}),
            True,
            mdtas.consts.GOLDEN_ALPHA,
            'leftmost of the most approved alternatives',
            lambda bundle, tolerance: max_tas_leftmost(line_ordering(bundle), bundle.tas),
        ),
        Mechanism(
            mdtas.consts.MINIMAX_TAS,
            frozenset({mdtas.consts.DISTANCES, mdtas.consts.TAS}),
            False,
            mdtas.consts.GOLDEN_ALPHA,
            'minimize the largest distance to an approval set',
            lambda bundle, tolerance: minimax_tas_distance(bundle.alt_distances, bundle.tas, tolerance),
        ),
        Mechanism(
            mdtas.consts.ANY_APPROVED,
            frozenset({mdtas.consts.TAS}),
            False,
            1.0,
            'lowest-index alternative approved by agent 0',
            lambda bundle, tolerance: any_approved(bundle.tas),
        ),
        Mechanism(
            mdtas.consts.TOP_CHOICE_DICTATOR,
            frozenset({mdtas.consts.TAS}),
            False,
            1.0,
            'top choice of agent 0, from its 1-TAS',
            lambda bundle, tolerance: top_choice_dictator(bundle.tas),
        ),
    ]
}


def get_mechanism(name: str) -> Mechanism:
    if name not in MECHANISMS:
        raise UnsupportedError(f'No mechanism named "{name}", expected one of {", ".join(MECHANISMS)}')
    return MECHANISMS[name]


def mechanism_names() -> List[str]:
    return list(MECHANISMS)


def run_mechanism(mechanism_id: MechanismId, bundle: ElicitationBundle, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> WinnerResult:
    '''
    Runs a mechanism on the views it declares, and nothing else: the bundle
    is restricted before dispatch.

    Parameters:
        mechanism_id (MechanismId): name and alpha
        bundle (ElicitationBundle): must carry every required view
        tolerance (float): comparison slack

    Returns:
        WinnerResult
    '''
    if mechanism_id.name == mdtas.consts.OMNISCIENT:
        raise UnsupportedError(f'{mdtas.consts.OMNISCIENT} reads the instance itself and cannot run on a bundle')

    mechanism = get_mechanism(mechanism_id.name)
    missing = mechanism.views - bundle.views

    if missing:
        raise MissingViewError(mechanism.name, list(missing))

    if mechanism.needs_line and not bundle.provenance.is_line:
        raise UnsupportedError(f'{mechanism.name} needs a line instance, "{bundle.provenance.source}" is not one')

    if mdtas.consts.TAS in mechanism.views and abs(bundle.tas.alpha - mechanism_id.alpha) > tolerance:  # type: ignore
        raise ParameterError('alpha', f'TAS view alpha equal to the mechanism alpha {mechanism_id.alpha:.12g}', bundle.tas.alpha)  # type: ignore

    result = mechanism.compute_fct(restrict(bundle, mechanism.views), tolerance)
    log.debug(f'{mechanism_id} chose alternative {result.winner}')
    return result
