#!/usr/bin/env python3
import numpy as np
import mdtas.consts
import mdtas.utils

from dataclasses import dataclass
from logging import Logger
from typing import Callable, Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

from mdtas.core import derive_bundle, derive_tas, validate_metric
from mdtas.evaluation import cost
from mdtas.exceptions import ParameterError, UnsupportedError
from mdtas.models import (
    ConstructionOutput,
    ConstructionParams,
    GeneralInstance,
    Instance,
    LineInstance,
    Objective,
    PredictedCosts,
    VerificationReport,
)

log: Logger = mdtas.utils.log

ALL_THREE: FrozenSet[str] = mdtas.consts.ALL_VIEWS
DIST_TAS: FrozenSet[str] = frozenset({mdtas.consts.DISTANCES, mdtas.consts.TAS})
ORD_TAS: FrozenSet[str] = frozenset({mdtas.consts.ORDINAL, mdtas.consts.TAS})
TAS_ONLY: FrozenSet[str] = frozenset({mdtas.consts.TAS})


class _Witness(NamedTuple):
    instance: Instance
    winner: int
    reference: int
    predicted: PredictedCosts
    declared_tas: Tuple[FrozenSet[int], ...]
    tie_break: Optional[np.ndarray] = None


def _require(holds: bool, name: str, constraint: str, value: object) -> None:
    if not holds:
        raise ParameterError(name, constraint, value)


def _cyclic_offsets(n: int, target: int) -> Tuple[np.ndarray, np.ndarray]:
    '''
    offset[j, k] = (k - j) mod n, and in_span[j, k] marks the cyclic run
    k = j, j+1, ..., target-1 (every k for j == target)
    '''
    agents = np.arange(n)[:, None]
    offset = (np.arange(n)[None, :] - agents) % n
    span = (target - agents - 1) % n + 1
    return offset, offset < span


def _singletons(sets: Sequence[Sequence[int]]) -> Tuple[FrozenSet[int], ...]:
    return tuple(frozenset(approved) for approved in sets)


def _cyclic_symmetric(params: ConstructionParams, tolerance: float) -> _Witness:
    n, alpha, target = params.n, params.alpha, params.target
    far = min(3.0, alpha)
    offset, in_span = _cyclic_offsets(n, target)

    instance = GeneralInstance.from_blocks(
        agent_alt=np.where(in_span, 1.0, far),
        alt_alt=2.0 * (1 - np.eye(n)),
    )
    reference = (target - 1) % n

    return _Witness(
        instance=instance,
        winner=target,
        reference=reference,
        predicted=PredictedCosts(1 + (n - 1) * far, float(n)),
        declared_tas=_singletons([range(n)] * n),
        tie_break=offset,
    )


def _a_b_priorities(n: int, offset: np.ndarray) -> np.ndarray:
    # own a first, then the b's cyclically from the agent's own index, then the remaining a's by index
    own = np.eye(n, dtype=bool)
    a_part = np.where(own, 0, n + 1 + np.arange(n)[None, :])
    return np.hstack([a_part, 1 + offset])


def _sc_all_three(params: ConstructionParams, tolerance: float) -> _Witness:
    n, alpha, delta, target = params.n, params.alpha, params.delta, params.target
    i = target % n
    offset, in_span = _cyclic_offsets(n, i)
    own = np.eye(n, dtype=bool)
    is_target = (np.arange(n) == i)[:, None]

    a_block = np.where(own, 1.0, np.where(is_target, 1 + 2 * alpha + 2 * delta, 2 + alpha))
    b_block = np.where(in_span, alpha + delta, 2 + alpha)

    alt_alt = np.block([
        [(1 + 2 * alpha) * (1 - np.eye(n)), np.full((n, n), 1 + alpha + delta)],
        [np.full((n, n), 1 + alpha + delta), 2 * alpha * (1 - np.eye(n))],
    ])

    if target < n:
        winner_cost = 1 + (n - 1) * (2 + alpha)
    else:
        winner_cost = alpha + delta + (n - 1) * (2 + alpha)

    return _Witness(
        instance=GeneralInstance.from_blocks(np.hstack([a_block, b_block]), alt_alt),
        winner=target,
        reference=n + (i - 1) % n,
        predicted=PredictedCosts(winner_cost, n * (alpha + delta)),
        declared_tas=_singletons([[j] for j in range(n)]),
        tie_break=_a_b_priorities(n, offset),
    )


def _sc_ord_tas(params: ConstructionParams, tolerance: float) -> _Witness:
    n, alpha, delta, target = params.n, params.alpha, params.delta, params.target
    i = target % n
    offset, in_span = _cyclic_offsets(n, i)
    own = np.eye(n, dtype=bool)
    others = 1 - np.eye(n)

    a_block = np.where(own, 1.0, 1 + 2 * alpha + 2 * delta)
    b_block = np.where(in_span, alpha + delta, 1 + 2 * alpha)

    # shortest routes through a single agent
    a_b = np.where(in_span, 1 + alpha + delta, 2 + 2 * alpha)
    alt_alt = np.block([
        [(2 + 2 * alpha + 2 * delta) * others, a_b],
        [a_b.T, (2 * alpha + 2 * delta) * others],
    ])

    if target < n:
        winner_cost = 1 + (n - 1) * (1 + 2 * alpha + 2 * delta)
    else:
        winner_cost = alpha + delta + (n - 1) * (1 + 2 * alpha)

    return _Witness(
        instance=GeneralInstance.from_blocks(np.hstack([a_block, b_block]), alt_alt),
        winner=target,
        reference=n + (i - 1) % n,
        predicted=PredictedCosts(winner_cost, n * (alpha + delta)),
        declared_tas=_singletons([[j] for j in range(n)]),
        tie_break=_a_b_priorities(n, offset),
    )


def _sc_dist_tas(params: ConstructionParams, tolerance: float) -> _Witness:
    '''
    Alternatives x_0..x_{n-1}, z_0..z_{n-1}, y, w. Agent i sits next to z_i
    (red placement) when the target is an x or w, and next to x_i (green
    placement) when it is a z or y.
    '''
    n, alpha, eps, target = params.n, params.alpha, params.epsilon, params.target
    y, w = 2 * n, 2 * n + 1
    own = np.eye(n, dtype=bool)
    others = 1 - np.eye(n)
    red = target < n or target == w

    near_block = np.where(own, 1.0, 1 + 2 * alpha + 2 * eps)
    far_block = np.where(own, alpha, 3 * alpha + 2 * eps)
    column = lambda value: np.full((n, 1), value)

    if red:
        agent_alt = np.hstack([far_block, near_block, column(alpha + eps), column(1 + 2 * alpha + eps)])
    else:
        agent_alt = np.hstack([near_block, far_block, column(1 + 2 * alpha + eps), column(alpha + eps)])

    pair = 2 + 2 * alpha + 2 * eps
    x_z = np.where(own, alpha - 1, 1 + 3 * alpha + 2 * eps)
    alt_alt = np.zeros((2 * n + 2, 2 * n + 2))
    alt_alt[:n, :n] = pair * others
    alt_alt[n:2 * n, n:2 * n] = pair * others
    alt_alt[:n, n:2 * n] = x_z
    alt_alt[n:2 * n, :n] = x_z.T
    alt_alt[:n, y] = alt_alt[y, :n] = 2 * alpha + eps
    alt_alt[:n, w] = alt_alt[w, :n] = 1 + alpha + eps
    alt_alt[n:2 * n, y] = alt_alt[y, n:2 * n] = 1 + alpha + eps
    alt_alt[n:2 * n, w] = alt_alt[w, n:2 * n] = 2 * alpha + eps
    alt_alt[y, w] = alt_alt[w, y] = 1 + 3 * alpha + 2 * eps

    if target in (y, w):
        winner_cost = n * (1 + 2 * alpha + eps)
    else:
        winner_cost = alpha + (n - 1) * (3 * alpha + 2 * eps)

    return _Witness(
        instance=GeneralInstance.from_blocks(agent_alt, alt_alt),
        winner=target,
        reference=y if red else w,
        predicted=PredictedCosts(winner_cost, n * (alpha + eps)),
        declared_tas=_singletons([[j, n + j] for j in range(n)]),
    )


def _tas_only_line(params: ConstructionParams, tolerance: float) -> _Witness:
    '''
    Every agent sits on its own alternative. The target pair is at 1, one
    other pair at 0, and the rest spread over (0, eps).
    '''
    n, eps, target = params.n, params.epsilon, params.target
    others = [j for j in range(n) if j != target]
    positions = np.zeros(n)
    positions[target] = 1.0

    for q, agent in enumerate(others[:-1]):
        positions[agent] = (q + 1) * eps / (n - 1)

    spread = eps * (n - 2) / 2

    return _Witness(
        instance=LineInstance(positions, positions),
        winner=target,
        reference=others[-1],
        predicted=PredictedCosts((n - 1) - spread, 1 + spread),
        declared_tas=_singletons([[j] for j in range(n)]),
    )


def _two_alternatives(
    params: ConstructionParams,
    agents: List[float],
    alternatives: List[float],
    predicted: PredictedCosts,
    declared: List[List[int]]) -> _Witness:
    '''
    Line witness with two alternatives where the adversary expects the first
    one to win. Target 1 mirrors the labels of agents and alternatives, which
    leaves the declared information unchanged.
    '''
    if params.target == 1:
        agents, alternatives = agents[::-1], alternatives[::-1]

    return _Witness(
        instance=LineInstance(agents, alternatives),
        winner=params.target,
        reference=1 - params.target,
        predicted=predicted,
        declared_tas=_singletons(declared),
    )


def _line_sc_ordinal_1(params: ConstructionParams, tolerance: float) -> _Witness:
    p = 1 / (params.alpha + 1) - params.epsilon
    return _two_alternatives(params, [p, 1.0], [0.0, 1.0], PredictedCosts(p + 1, 1 - p), [[0], [1]])


def _line_sc_ordinal_2(params: ConstructionParams, tolerance: float) -> _Witness:
    alpha, eps = params.alpha, params.epsilon
    q = alpha / (alpha - 1) + eps
    return _two_alternatives(
        params,
        [0.5 - eps, q],
        [0.0, 1.0],
        PredictedCosts((0.5 - eps) + q, (0.5 + eps) + (q - 1)),
        [[0, 1], [0, 1]],
    )


def _line_sc_dist_1(params: ConstructionParams, tolerance: float) -> _Witness:
    n, alpha = params.n, params.alpha
    return _two_alternatives(
        params,
        [alpha] * n,
        [0.0, 1 + alpha],
        PredictedCosts(n * alpha, float(n)),
        [[0, 1]] * n,
    )


def _line_sc_dist_2(params: ConstructionParams, tolerance: float) -> _Witness:
    alpha, eps = params.alpha, params.epsilon
    return _two_alternatives(
        params,
        [1 - eps, 1 + alpha],
        [0.0, 1 + alpha],
        PredictedCosts(2 + alpha - eps, alpha + eps),
        [[0], [1]],
    )


def _mc_general_i1(params: ConstructionParams, tolerance: float) -> _Witness:
    alpha, eps = params.alpha, params.epsilon
    return _two_alternatives(
        params,
        [1.0, 1 + 2 * alpha + eps],
        [0.0, 1 + alpha + eps],
        PredictedCosts(1 + 2 * alpha + eps, alpha + eps),
        [[0], [1]],
    )


def _mc_general_i2(params: ConstructionParams, tolerance: float) -> _Witness:
    alpha = params.alpha
    q = alpha * (alpha + 1) / (alpha - 1)
    return _two_alternatives(
        params,
        [1.0, q],
        [0.0, alpha + 1],
        PredictedCosts(q, max(alpha, (alpha + 1) / (alpha - 1))),
        [[0, 1], [0, 1]],
    )


def _mc_tas_only(params: ConstructionParams, tolerance: float) -> _Witness:
    '''
    Agent 0 approves alternatives 0 and 1, agent 1 approves 2 and 3, nobody
    approves 4. A target in an approval set puts that set's agent at
    alpha+eps with the target alpha further out; the other agent mirrors it
    around alternative 4 at 0.
    '''
    alpha, eps, target = params.alpha, params.epsilon, params.target
    declared = _singletons([[0, 1], [2, 3]])

    if target == 4:
        return _Witness(
            instance=LineInstance([0.0, eps], [0.0, 0.0, eps, eps, 1.0]),
            winner=4,
            reference=2,
            predicted=PredictedCosts(1.0, eps),
            declared_tas=declared,
        )

    group = target // 2
    partner = 2 * group + (1 - target % 2)
    other = 1 - group
    agents = np.zeros(2)
    alternatives = np.zeros(5)

    agents[group] = alpha + eps
    alternatives[target] = 2 * alpha + eps
    alternatives[partner] = alpha + 1 + eps
    agents[other] = -alpha - eps
    alternatives[2 * other] = -alpha - 1 - eps
    alternatives[2 * other + 1] = -2 * alpha - eps

    return _Witness(
        instance=LineInstance(agents, alternatives),
        winner=target,
        reference=4,
        predicted=PredictedCosts(3 * alpha + 2 * eps, alpha + eps),
        declared_tas=declared,
    )


@dataclass(frozen=True)
class Construction:
    '''
    Registry entry of a lower-bound witness family.

    `check` raises ParameterError for parameters outside the validity range,
    `targets(n)` is the number of alternatives the adversary may assume the
    mechanism picked, and `asymptotic(alpha, n)` is the ratio the family
    approaches as eps and delta vanish.
    '''
    id: str
    objective: Objective
    views: FrozenSet[str]
    fixed_size: bool
    validity: str
    check: Callable[[ConstructionParams, float], None]
    targets: Callable[[int], int]
    default_target: Callable[[int], int]
    builder: Callable[[ConstructionParams, float], _Witness]
    asymptotic: Callable[[float, int], float]

    def serialize(self) -> dict:
        return {
            'id': self.id,
            'objective': self.objective.value,
            'views': sorted(self.views),
            'fixed_size': self.fixed_size,
            'validity': self.validity,
        }


def _check_cyclic(params: ConstructionParams, tolerance: float) -> None:
    _require(params.n >= 2, 'n', 'n >= 2', params.n)
    _require(params.alpha >= 1, 'alpha', 'alpha >= 1', params.alpha)


def _check_sc_all_three(params: ConstructionParams, tolerance: float) -> None:
    _require(params.n >= 2, 'n', 'n >= 2', params.n)
    _require(1 <= params.alpha < 2, 'alpha', '1 <= alpha < 2', params.alpha)
    _require(tolerance < params.delta <= 0.5, 'delta', f'{tolerance:g} < delta <= 1/2', params.delta)


def _check_sc_ord_tas(params: ConstructionParams, tolerance: float) -> None:
    _require(params.n >= 2, 'n', 'n >= 2', params.n)
    _require(params.alpha >= 1, 'alpha', 'alpha >= 1', params.alpha)
    _require(tolerance < params.delta <= 0.5, 'delta', f'{tolerance:g} < delta <= 1/2', params.delta)


def _check_sc_dist_tas(params: ConstructionParams, tolerance: float) -> None:
    _require(params.n >= 1, 'n', 'n >= 1', params.n)
    _require(params.alpha > 1, 'alpha', 'alpha > 1', params.alpha)
    _require(params.epsilon > tolerance, 'epsilon', f'epsilon > {tolerance:g}', params.epsilon)


def _check_tas_only_line(params: ConstructionParams, tolerance: float) -> None:
    _require(params.n >= 2, 'n', 'n >= 2', params.n)
    _require(params.alpha >= 1, 'alpha', 'alpha >= 1', params.alpha)
    _require(
        tolerance < params.epsilon / (params.n - 1) and params.epsilon < 1,
        'epsilon', f'{tolerance:g} < epsilon / (n - 1) and epsilon < 1', params.epsilon,
    )


def _check_line_sc_ordinal_1(params: ConstructionParams, tolerance: float) -> None:
    alpha, eps = params.alpha, params.epsilon
    _require(alpha >= 1, 'alpha', 'alpha >= 1', alpha)
    _require(tolerance < eps * (alpha + 1) and eps < 1 / (alpha + 1), 'epsilon', '0 < epsilon < 1/(alpha+1)', eps)


def _check_line_sc_ordinal_2(params: ConstructionParams, tolerance: float) -> None:
    alpha, eps = params.alpha, params.epsilon
    _require(alpha > 1, 'alpha', 'alpha > 1', alpha)
    _require(
        eps > tolerance and alpha * (0.5 - eps) >= 0.5 + eps,
        'epsilon', f'epsilon > {tolerance:g} and alpha(1/2 - epsilon) >= 1/2 + epsilon', eps,
    )


def _check_line_sc_dist_1(params: ConstructionParams, tolerance: float) -> None:
    _require(params.n >= 1, 'n', 'n >= 1', params.n)
    _require(params.alpha >= 1, 'alpha', 'alpha >= 1', params.alpha)


def _check_line_sc_dist_2(params: ConstructionParams, tolerance: float) -> None:
    alpha, eps = params.alpha, params.epsilon
    _require(alpha >= 1, 'alpha', 'alpha >= 1', alpha)
    _require(tolerance < eps * (1 + alpha) and eps < 1, 'epsilon', '0 < epsilon < 1', eps)


def _check_mc_general_i1(params: ConstructionParams, tolerance: float) -> None:
    alpha, eps = params.alpha, params.epsilon
    _require(alpha >= 1, 'alpha', 'alpha >= 1', alpha)
    _require(eps > tolerance, 'epsilon', f'epsilon > {tolerance:g}', eps)
    _require(1 + 2 * alpha + eps > alpha * alpha + tolerance, 'alpha', '1 + 2 alpha + epsilon > alpha^2', alpha)


def _check_mc_general_i2(params: ConstructionParams, tolerance: float) -> None:
    alpha = params.alpha
    _require(alpha > 1, 'alpha', 'alpha > 1', alpha)
    _require((alpha + 1) / (alpha - 1) >= alpha - tolerance, 'alpha', 'alpha <= 1 + sqrt(2)', alpha)


def _check_mc_tas_only(params: ConstructionParams, tolerance: float) -> None:
    _require(params.alpha >= 1, 'alpha', 'alpha >= 1', params.alpha)
    _require(tolerance < params.epsilon < 1, 'epsilon', f'{tolerance:g} < epsilon < 1', params.epsilon)


def _fixed(count: int) -> Callable[[int], int]:
    return lambda n: count


def _first(n: int) -> int:
    return 0


CONSTRUCTIONS: Dict[str, Construction] = {
    construction.id: construction for construction in [
        Construction(
            mdtas.consts.CYCLIC_SYMMETRIC, Objective.SOCIAL_COST, ALL_THREE, False,
            'n >= 2, alpha >= 1',
            _check_cyclic, lambda n: n, _first, _cyclic_symmetric,
            lambda alpha, n: min(3.0, alpha),
        ),
        Construction(
            mdtas.consts.SC_ALL_THREE, Objective.SOCIAL_COST, ALL_THREE, False,
            'n >= 2, 1 <= alpha < 2, 0 < delta <= 1/2',
            _check_sc_all_three, lambda n: 2 * n, _first, _sc_all_three,
            lambda alpha, n: 1 + 2 / alpha,
        ),
        Construction(
            mdtas.consts.SC_DIST_TAS, Objective.SOCIAL_COST, DIST_TAS, False,
            'n >= 1, alpha > 1, epsilon > 0',
            _check_sc_dist_tas, lambda n: 2 * n + 2, lambda n: 2 * n + 1, _sc_dist_tas,
            lambda alpha, n: 2 + 1 / alpha,
        ),
        Construction(
            mdtas.consts.SC_ORD_TAS, Objective.SOCIAL_COST, ORD_TAS, False,
            'n >= 2, alpha >= 1, 0 < delta <= 1/2',
            _check_sc_ord_tas, lambda n: 2 * n, _first, _sc_ord_tas,
            lambda alpha, n: 2 + 1 / alpha,
        ),
        Construction(
            mdtas.consts.TAS_ONLY_LINE, Objective.SOCIAL_COST, TAS_ONLY, False,
            'n >= 2, 0 < epsilon < 1 with epsilon/(n-1) above the tolerance',
            _check_tas_only_line, lambda n: n, _first, _tas_only_line,
            lambda alpha, n: float(n - 1),
        ),
        Construction(
            mdtas.consts.LINE_SC_ORDINAL_1, Objective.SOCIAL_COST, ALL_THREE, True,
            'alpha >= 1, 0 < epsilon < 1/(alpha+1)',
            _check_line_sc_ordinal_1, _fixed(2), _first, _line_sc_ordinal_1,
            lambda alpha, n: 1 + 2 / alpha,
        ),
        Construction(
            mdtas.consts.LINE_SC_ORDINAL_2, Objective.SOCIAL_COST, ALL_THREE, True,
            'alpha > 1, alpha(1/2 - epsilon) >= 1/2 + epsilon',
            _check_line_sc_ordinal_2, _fixed(2), _first, _line_sc_ordinal_2,
            lambda alpha, n: (3 * alpha - 1) / (alpha + 1),
        ),
        Construction(
            mdtas.consts.LINE_SC_DIST_1, Objective.SOCIAL_COST, DIST_TAS, False,
            'n >= 1, alpha >= 1',
            _check_line_sc_dist_1, _fixed(2), _first, _line_sc_dist_1,
            lambda alpha, n: alpha,
        ),
        Construction(
            mdtas.consts.LINE_SC_DIST_2, Objective.SOCIAL_COST, DIST_TAS, True,
            'alpha >= 1, 0 < epsilon < 1',
            _check_line_sc_dist_2, _fixed(2), _first, _line_sc_dist_2,
            lambda alpha, n: 1 + 2 / alpha,
        ),
        Construction(
            mdtas.consts.MC_GENERAL_I1, Objective.MAX_COST, ALL_THREE, True,
            'alpha >= 1, epsilon > 0, 1 + 2 alpha + epsilon > alpha^2',
            _check_mc_general_i1, _fixed(2), _first, _mc_general_i1,
            lambda alpha, n: 2 + 1 / alpha,
        ),
        Construction(
            mdtas.consts.MC_GENERAL_I2, Objective.MAX_COST, ALL_THREE, True,
            '1 < alpha <= 1 + sqrt(2)',
            _check_mc_general_i2, _fixed(2), _first, _mc_general_i2,
            lambda alpha, n: alpha,
        ),
        Construction(
            mdtas.consts.MC_TAS_ONLY, Objective.MAX_COST, TAS_ONLY, True,
            'alpha >= 1, 0 < epsilon < 1',
            _check_mc_tas_only, _fixed(5), _first, _mc_tas_only,
            lambda alpha, n: 3.0,
        ),
    ]
}


def get_construction(construction_id: str) -> Construction:
    if construction_id not in CONSTRUCTIONS:
        raise UnsupportedError(f'No construction named "{construction_id}", expected one of {", ".join(CONSTRUCTIONS)}')
    return CONSTRUCTIONS[construction_id]


def asymptotic_ratio(construction_id: str, alpha: float, n: int = 2) -> float:
    '''
    Ratio a construction family approaches as its infinitesimals vanish (and
    n grows, for families whose bound only holds in the limit)
    '''
    return get_construction(construction_id).asymptotic(alpha, n)


def build(construction_id: str, params: ConstructionParams, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> ConstructionOutput:
    '''
    Generates a lower-bound witness: the instance, the bundle a mechanism of
    the family's information class sees, the alternative the adversary
    assumes was picked, and the predicted costs of it and of the reference.

    Parameters:
        construction_id (str): one of CONSTRUCTIONS
        params (ConstructionParams): n, alpha, epsilon, delta and target (None for the family default)
        tolerance (float): comparison slack, also bounds how small the infinitesimals may be

    Returns:
        ConstructionOutput
    '''
    construction = get_construction(construction_id)
    construction.check(params, tolerance)

    count = construction.targets(params.n)
    target = construction.default_target(params.n) if params.target is None else params.target
    _require(0 <= target < count, 'target', f'0 <= target < {count}', target)

    resolved = ConstructionParams(params.n, params.alpha, params.epsilon, params.delta, target)
    witness = construction.builder(resolved, tolerance)

    bundle = derive_bundle(
        witness.instance,
        alpha=resolved.alpha,
        views=construction.views,
        tie_break=witness.tie_break,
        tolerance=tolerance,
        source=construction_id,
    )

    log.info(f'Built {construction_id} with {resolved}: predicted ratio {witness.predicted.ratio:.12g}')

    return ConstructionOutput(
        construction=construction_id,
        params=resolved,
        objective=construction.objective,
        instance=witness.instance,
        bundle=bundle,
        adversarial_winner=witness.winner,
        reference=witness.reference,
        predicted=witness.predicted,
        declared_tas=witness.declared_tas,
        tie_break=witness.tie_break,
    )


def verify(output: ConstructionOutput, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> VerificationReport:
    '''
    Checks a built witness: the instance is a metric, the approval sets
    declared by the family are the ones the instance induces, and both
    predicted costs are met.

    The bundle is also re-derived and compared against the stored one. build
    derives it the same way, so this only fails for an output whose instance
    or bundle was replaced after build.

    Parameters:
        output (ConstructionOutput): result of build
        tolerance (float): comparison slack; costs are compared at ten times it

    Returns:
        VerificationReport: pass/fail plus one line per discrepancy
    '''
    diffs: List[str] = []
    instance, bundle = output.instance, output.bundle

    validation = validate_metric(instance.dist, tolerance)

    if not validation.ok:
        diffs.append(f'metric: {validation.total} violation(s), first {validation.violations[0]}')

    alpha = bundle.tas.alpha if bundle.tas is not None else output.params.alpha
    derived = derive_bundle(instance, alpha, bundle.views, output.tie_break, tolerance, bundle.provenance.source)

    if derived.ordinal != bundle.ordinal:
        diffs.append('bundle: ordinal view differs from the instance')

    if derived.tas != bundle.tas:
        diffs.append('bundle: TAS view differs from the instance')

    if derived.alt_distances is not None and bundle.alt_distances is not None:
        gap = float(np.max(np.abs(derived.alt_distances.matrix - bundle.alt_distances.matrix)))

        if gap > tolerance:
            diffs.append(f'bundle: alternative distances differ from the instance by {gap:.6g}')

    induced = tuple(derive_tas(instance, output.params.alpha, tolerance).sets)

    if induced != output.declared_tas:
        agents = [agent for agent, (got, want) in enumerate(zip(induced, output.declared_tas)) if got != want]
        diffs.append(f'tas: induced approval sets differ from the declared ones for agent(s) {agents}')

    winner_cost = cost(instance, output.adversarial_winner, output.objective)
    best_cost = cost(instance, output.reference, output.objective)
    slack = mdtas.consts.PREDICTION_TOLERANCE_FACTOR * tolerance

    for label, realized, predicted in (
            ('winner', winner_cost, output.predicted.winner_cost),
            ('reference', best_cost, output.predicted.best_cost)):
        if abs(realized - predicted) > slack:
            diffs.append(f'cost: {label} costs {realized:.12g}, predicted {predicted:.12g}')

    passed = not diffs
    log.info(f'Verified {output.construction}: {"pass" if passed else "; ".join(diffs)}')

    return VerificationReport(output.construction, passed, tuple(diffs), winner_cost, best_cost)
