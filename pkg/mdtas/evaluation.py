#!/usr/bin/env python3
import math
import numpy as np
import mdtas.consts
import mdtas.utils

from logging import Logger
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from mdtas.core import derive_bundle
from mdtas.exceptions import StructuralError, UnsupportedError
from mdtas.mechanisms import get_mechanism, run_mechanism
from mdtas.models import (
    BatchRow,
    DistortionReport,
    ElicitationBundle,
    Instance,
    LineInstance,
    MCWinnerConditions,
    MechanismId,
    Objective,
    SweepCell,
    TASProfile,
)

log: Logger = mdtas.utils.log


def costs(instance: Instance, objective: Objective) -> np.ndarray:
    '''
    Cost of every alternative under `objective`: column sums of the
    agent-alternative block for social cost, column maxima for max cost.
    '''
    if objective is Objective.SOCIAL_COST:
        return instance.agent_alt.sum(axis=0)
    return instance.agent_alt.max(axis=0)


def cost(instance: Instance, x: int, objective: Objective) -> float:
    '''
    Parameters:
        instance (Instance): the instance
        x (int): alternative index
        objective (Objective): social or max cost

    Returns:
        float: SC(x) or MC(x)
    '''
    if not 0 <= x < instance.n_alternatives:
        raise StructuralError(f'alternative {x} out of range 0..{instance.n_alternatives - 1}')

    column = instance.agent_alt[:, x]
    return float(column.sum() if objective is Objective.SOCIAL_COST else column.max())


def optimal_alternative(instance: Instance, objective: Objective) -> Tuple[int, float]:
    '''
    Exhaustive search over all alternatives, lowest index on ties

    Parameters:
        instance (Instance): the instance
        objective (Objective): social or max cost

    Returns:
        Tuple[int, float]: the optimal alternative and its cost
    '''
    values = costs(instance, objective)
    best = int(np.argmin(values))
    return best, float(values[best])


def _ratio(winner_cost: float, optimal_cost: float, tolerance: float) -> Tuple[float, bool]:
    if optimal_cost > 0:
        return winner_cost / optimal_cost, False

    # zero optimum: the ratio is 1 if the winner is free too, unbounded otherwise
    return (1.0 if winner_cost <= tolerance else math.inf), True


def _report(
    instance: Instance,
    mechanism_id: MechanismId,
    objective: Objective,
    winner: int,
    trace: dict,
    values: np.ndarray,
    tolerance: float) -> DistortionReport:

    optimal = int(np.argmin(values))
    winner_cost, optimal_cost = float(values[winner]), float(values[optimal])
    ratio, degenerate = _ratio(winner_cost, optimal_cost, tolerance)

    if degenerate and math.isinf(ratio):
        log.warning(f'{mechanism_id} on {instance!r} chose {winner} at cost {winner_cost} while the optimum costs 0')

    return DistortionReport(
        mechanism=mechanism_id,
        objective=objective,
        winner=winner,
        winner_cost=winner_cost,
        optimal=optimal,
        optimal_cost=optimal_cost,
        ratio=ratio,
        degenerate=degenerate,
        trace=trace,
    )


def distortion(
    instance: Instance,
    mechanism_id: MechanismId,
    objective: Objective,
    tolerance: float = mdtas.consts.DEFAULT_TOLERANCE,
    bundle: Optional[ElicitationBundle] = None,
    tie_break: Optional[np.ndarray] = None) -> DistortionReport:
    '''
    Runs a mechanism on the views derived from `instance` and compares its
    choice against the enumerated optimum. The Omniscient pseudo-mechanism
    picks the optimum itself.

    Parameters:
        instance (Instance): the instance
        mechanism_id (MechanismId): the mechanism and its alpha
        objective (Objective): social or max cost
        tolerance (float): comparison slack
        bundle (Optional[ElicitationBundle]): views to hand the mechanism instead of deriving them
        tie_break (Optional[np.ndarray]): ordinal tie-break priorities used when deriving

    Returns:
        DistortionReport
    '''
    values = costs(instance, objective)

    if mechanism_id.name == mdtas.consts.OMNISCIENT:
        winner, trace = int(np.argmin(values)), {}
    else:
        if bundle is None:
            mechanism = get_mechanism(mechanism_id.name)
            bundle = derive_bundle(instance, mechanism_id.alpha, mechanism.views, tie_break, tolerance)

        result = run_mechanism(mechanism_id, bundle, tolerance)
        winner, trace = result.winner, result.trace

    report = _report(instance, mechanism_id, objective, winner, trace, values, tolerance)
    log.debug(f'{mechanism_id} {objective}: winner {report.winner}, optimal {report.optimal}, ratio {report.ratio}')
    return report


def check_mc_winner_conditions(
    instance: Instance,
    tas: TASProfile,
    winner: int,
    tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> MCWinnerConditions:
    '''
    The two sufficient conditions for a good max-cost winner w, with o the
    enumerated max-cost optimum:

        cond1: w is approved by every agent
        cond2: some agent i has w among its closest alternatives and does not approve o

    cond1 gives MC(w) <= alpha * MC(o), cond2 gives MC(w) <= (2 + 1/alpha) * MC(o).
    '''
    if tas.approvals.shape != instance.agent_alt.shape:
        raise StructuralError('approval sets do not match the instance shape')

    optimal, _ = optimal_alternative(instance, Objective.MAX_COST)
    distances = instance.agent_alt
    closest = distances[:, winner] <= distances.min(axis=1)

    cond1 = bool(tas.approvals[:, winner].all())
    cond2 = bool(np.any(closest & ~tas.approvals[:, optimal]))
    return MCWinnerConditions(cond1, cond2)


def interval_winner_check(instance: Instance, winner: int) -> bool:
    '''
    True when the winner lies between the leftmost and rightmost agent, which
    caps its max-cost distortion at 2
    '''
    if not isinstance(instance, LineInstance):
        raise UnsupportedError('interval_winner_check needs a line instance')

    position = instance.alternative_positions[winner]
    return bool(instance.agent_positions.min() <= position <= instance.agent_positions.max())


def proven_bound(mechanism_id: MechanismId, objective: Objective, space: str, n_agents: int = 1) -> Optional[float]:
    '''
    Best proven upper bound on the distortion of a mechanism for an objective
    over a space, or None when no bound is known.

    Parameters:
        mechanism_id (MechanismId): name and alpha
        objective (Objective): social or max cost
        space (str): 'line' or 'general'
        n_agents (int): number of agents, for bounds that grow with it

    Returns:
        Optional[float]: the bound
    '''
    name, alpha = mechanism_id.name, mechanism_id.alpha
    social = objective is Objective.SOCIAL_COST
    line = space == mdtas.consts.LINE
    golden_form = max(alpha, 2 + 1 / alpha)

    if name == mdtas.consts.OMNISCIENT:
        return 1.0

    if name == mdtas.consts.MINISUM_TAS:
        if social:
            return max(alpha, 1 + 2 / alpha) if line else golden_form
        return golden_form if line else None

    if name == mdtas.consts.MINIMAX_TAS:
        return golden_form if line and not social else None

    # the leftmost tie-break can pick an alternative left of every agent, and
    # max{alpha, 2 + 1/alpha} then fails (ratio 2.4915 at alpha = 1 + sqrt(2))
    if name == mdtas.consts.MAX_TAS_LEFTMOST:
        return None

    if name == mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY:
        return max((3 * alpha - 1) / (alpha + 1), 1 + 2 / alpha) if line and social else None

    if name == mdtas.consts.MOST_COMPACT_SET:
        return None if social else golden_form

    if name == mdtas.consts.ANY_APPROVED:
        return None if social else 2 + alpha

    if name == mdtas.consts.TOP_CHOICE_DICTATOR:
        return 1.0 + 2 * n_agents if social else 3.0

    return None


def _space_of(instance: Instance) -> str:
    return mdtas.consts.LINE if isinstance(instance, LineInstance) else mdtas.consts.GENERAL


def evaluate_corpus(
    instances: Iterable[Tuple[str, Instance]],
    mechanisms: Sequence[MechanismId],
    objectives: Sequence[Objective],
    tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> List[BatchRow]:
    '''
    Evaluates every mechanism under every objective on each instance of a
    corpus. Line-only mechanisms are skipped on general instances.

    Parameters:
        instances (Iterable[Tuple[str, Instance]]): (instance id, instance) pairs
        mechanisms (Sequence[MechanismId]): the mechanisms to run
        objectives (Sequence[Objective]): the objectives to score
        tolerance (float): comparison slack

    Returns:
        List[BatchRow]: one row per evaluated cell, in corpus order
    '''
    rows: List[BatchRow] = []
    count = 0

    for instance_id, instance in instances:
        count += 1
        space = _space_of(instance)
        bundles: Dict[float, ElicitationBundle] = {}
        values = {objective: costs(instance, objective) for objective in objectives}

        for mechanism_id in mechanisms:
            if mechanism_id.name == mdtas.consts.OMNISCIENT:
                winners = {objective: (int(np.argmin(values[objective])), {}) for objective in objectives}
            else:
                if get_mechanism(mechanism_id.name).needs_line and space != mdtas.consts.LINE:
                    continue

                if mechanism_id.alpha not in bundles:
                    bundles[mechanism_id.alpha] = derive_bundle(instance, mechanism_id.alpha, tolerance=tolerance, source=instance_id)

                result = run_mechanism(mechanism_id, bundles[mechanism_id.alpha], tolerance)
                winners = {objective: (result.winner, result.trace) for objective in objectives}

            for objective in objectives:
                winner, trace = winners[objective]
                report = _report(instance, mechanism_id, objective, winner, trace, values[objective], tolerance)
                rows.append(BatchRow(
                    instance_id=instance_id,
                    mechanism=mechanism_id,
                    objective=objective,
                    space=space,
                    n_agents=instance.n_agents,
                    winner=report.winner,
                    ratio=report.ratio,
                    degenerate=report.degenerate,
                    bound=proven_bound(mechanism_id, objective, space, instance.n_agents),
                ))

    log.info(f'Evaluated {len(mechanisms)} mechanism(s) on {count} instance(s): {len(rows)} rows')
    return rows


def sweep_table(rows: Iterable[BatchRow], tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> List[SweepCell]:
    '''
    Groups batch rows by (mechanism, alpha, objective, space) and reports the
    largest ratio of each group against its proven bound. Groups keep the
    order in which they first appear.

    Parameters:
        rows (Iterable[BatchRow]): output of evaluate_corpus
        tolerance (float): slack allowed above a bound

    Returns:
        List[SweepCell]
    '''
    groups: Dict[tuple, List[BatchRow]] = {}

    for row in rows:
        key = (row.mechanism.name, row.mechanism.alpha, row.objective, row.space)
        groups.setdefault(key, []).append(row)

    cells: List[SweepCell] = []

    for (name, alpha, objective, space), members in groups.items():
        bounds = [row.bound for row in members if row.bound is not None]
        violations = sum(row.violates(tolerance) for row in members)

        cells.append(SweepCell(
            mechanism=name,
            alpha=alpha,
            objective=objective,
            space=space,
            instances=len(members),
            max_ratio=max(row.ratio for row in members),
            bound=max(bounds) if bounds else None,
            violations=violations,
        ))

        if violations:
            log.warning(f'{name}(alpha={alpha:.12g}) {objective} on {space}: {violations} bound violation(s)')

    return cells
