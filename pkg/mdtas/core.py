#!/usr/bin/env python3
import numpy as np
import mdtas.consts
import mdtas.utils

from dataclasses import dataclass
from logging import Logger
from typing import Iterable, List, Optional, Tuple

from scipy.sparse.csgraph import connected_components, csgraph_from_dense, shortest_path

from mdtas.exceptions import DisconnectedError, ParameterError, StructuralError, UnsupportedError
from mdtas.models import (
    AltDistances,
    ElicitationBundle,
    Instance,
    LineInstance,
    OrdinalProfile,
    Provenance,
    TASProfile,
)

log: Logger = mdtas.utils.log

ASYMMETRIC: str = 'asymmetric'
NONZERO_DIAGONAL: str = 'nonzero-diagonal'
NEGATIVE: str = 'negative'
TRIANGLE: str = 'triangle'

# violations kept in a validation result; the total is always counted
MAX_REPORTED_VIOLATIONS: int = 50


@dataclass(frozen=True)
class MetricViolation:
    '''
    One failed metric axiom. For triangle violations `points` is (x, z, y)
    with d(x, y) > d(x, z) + d(z, y) + tolerance, and `excess` is by how much.
    '''
    kind: str
    points: Tuple[int, ...]
    excess: float

    def __str__(self) -> str:
        if self.kind == TRIANGLE:
            x, z, y = self.points
            return f'triangle: d({x},{y}) exceeds d({x},{z}) + d({z},{y}) by {self.excess:.6g}'
        return f'{self.kind} at {self.points} (off by {self.excess:.6g})'


@dataclass(frozen=True)
class MetricValidation:
    violations: Tuple[MetricViolation, ...]
    total: int

    @property
    def ok(self) -> bool:
        return self.total == 0

    def serialize(self) -> dict:
        return {'ok': self.ok, 'total': self.total, 'violations': [str(violation) for violation in self.violations]}


def _square(matrix, name: str) -> np.ndarray:
    try:
        values = np.array(matrix, dtype=float)
    except (TypeError, ValueError) as error:
        raise StructuralError(f'{name} is not numeric: {error}') from error

    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise StructuralError(f'{name} must be square, got shape {values.shape}')

    return values


def validate_metric(matrix, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> MetricValidation:
    '''
    Checks symmetry, zero diagonal, nonnegativity and every triangle
    inequality of a distance matrix, all within `tolerance`.

    Parameters:
        matrix (array-like): square matrix of distances
        tolerance (float): absolute slack for every comparison

    Returns:
        MetricValidation: ok flag, total number of violations, and the first few of them
    '''
    dist = _square(matrix, 'distance matrix')

    if not np.all(np.isfinite(dist)):
        raise StructuralError('distance matrix contains non-finite entries')

    found: List[MetricViolation] = []
    total = 0

    def record(kind: str, pairs: Iterable[Tuple[int, ...]], excess: np.ndarray) -> None:
        nonlocal total
        for points, amount in zip(pairs, excess):
            total += 1
            if len(found) < MAX_REPORTED_VIOLATIONS:
                found.append(MetricViolation(kind, tuple(int(p) for p in points), float(amount)))

    asymmetry = np.abs(dist - dist.T)
    rows, cols = np.nonzero(np.triu(asymmetry > tolerance))
    record(ASYMMETRIC, zip(rows, cols), asymmetry[rows, cols])

    diagonal = np.abs(np.diag(dist))
    points = np.flatnonzero(diagonal > tolerance)
    record(NONZERO_DIAGONAL, ((p,) for p in points), diagonal[points])

    rows, cols = np.nonzero(dist < -tolerance)
    record(NEGATIVE, zip(rows, cols), -dist[rows, cols])

    for pivot in range(dist.shape[0]):
        excess = dist - (dist[:, pivot][:, None] + dist[pivot, :][None, :])
        rows, cols = np.nonzero(np.triu(excess > tolerance, k=1))

        if rows.size:
            record(TRIANGLE, ((x, pivot, y) for x, y in zip(rows, cols)), excess[rows, cols])

    if total:
        log.info(f'Metric validation found {total} violations')

    return MetricValidation(tuple(found), total)


def metric_closure(partial, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> np.ndarray:
    '''
    Completes a partially specified distance matrix. Missing entries are NaN;
    each one is replaced by the shortest-path distance over the specified
    entries, which are kept as given. Specified entries may appear on one
    side of the diagonal only.

    Parameters:
        partial (array-like): square matrix, NaN where unspecified
        tolerance (float): allowed disagreement between d(i,j) and d(j,i)

    Returns:
        np.ndarray: the completed matrix
    '''
    given = _square(partial, 'partial distance matrix')
    size = given.shape[0]

    if np.any(np.isinf(given)):
        raise StructuralError('partial distance matrix contains infinite entries')

    mirrored = np.where(np.isnan(given), given.T, given)
    both = ~np.isnan(given) & ~np.isnan(given.T)

    if np.any(np.abs(given[both] - given.T[both]) > tolerance):
        raise StructuralError('specified entries are not symmetric')

    if np.any(mirrored[~np.isnan(mirrored)] < 0):
        raise StructuralError('specified entries must be nonnegative')

    np.fill_diagonal(mirrored, 0.0)
    specified = ~np.isnan(mirrored)

    # explicit zeros are edges; only the inf sentinel marks a missing edge
    graph = csgraph_from_dense(np.where(specified, mirrored, np.inf), null_value=np.inf)
    count, labels = connected_components(graph, directed=False)

    if count > 1:
        components = [np.flatnonzero(labels == label).tolist() for label in range(count)]
        raise DisconnectedError(components)

    shortest = shortest_path(graph, method='D', directed=False)
    completed = np.where(specified, mirrored, shortest)
    np.fill_diagonal(completed, 0.0)

    log.info(f'Metric closure filled {int(size * size - specified.sum())} entries of a {size}x{size} matrix')
    return completed


def _tie_keys(distances: np.ndarray, tolerance: float) -> np.ndarray:
    # distances within the tolerance share a key and fall back to the tie-break
    if tolerance <= 0:
        return distances
    return np.rint(distances / tolerance)


def derive_ordinal(instance: Instance, tie_break: Optional[np.ndarray] = None, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> OrdinalProfile:
    '''
    Ranks alternatives for every agent by ascending distance. Distances equal
    up to `tolerance` are ordered by `tie_break`, a per-agent priority matrix
    (lower first); by default the alternative index.

    Parameters:
        instance (Instance): the source instance
        tie_break (Optional[np.ndarray]): agents x alternatives priorities
        tolerance (float): distances closer than this count as ties

    Returns:
        OrdinalProfile
    '''
    distances = instance.agent_alt

    if tie_break is None:
        priority = np.broadcast_to(np.arange(instance.n_alternatives), distances.shape)
    else:
        priority = np.asarray(tie_break)

        if priority.shape != distances.shape:
            raise StructuralError(f'tie-break priorities have shape {priority.shape}, expected {distances.shape}')

    rankings = np.lexsort((priority, _tie_keys(distances, tolerance)), axis=-1)
    return OrdinalProfile(rankings)


def derive_tas(instance: Instance, alpha: float, tolerance: float = mdtas.consts.DEFAULT_TOLERANCE) -> TASProfile:
    '''
    A_i = { x : d(i,x) <= alpha * min_y d(i,y) + tolerance }
    '''
    if not alpha >= 1:
        raise ParameterError('alpha', 'alpha >= 1', alpha)

    distances = instance.agent_alt
    nearest = distances.min(axis=1, keepdims=True)
    return TASProfile(alpha, distances <= alpha * nearest + tolerance)


def derive_alt_distances(instance: Instance) -> AltDistances:
    return AltDistances(instance.alt_alt)


def provenance_of(instance: Instance, source: Optional[str] = None) -> Provenance:
    '''
    Provenance tag for bundles derived from `instance`; line instances attach
    their positions.
    '''
    label = source if source is not None else repr(instance)

    if isinstance(instance, LineInstance):
        return Provenance(
            source=label,
            agent_positions=tuple(float(p) for p in instance.agent_positions),
            alternative_positions=tuple(float(p) for p in instance.alternative_positions),
        )

    return Provenance(source=label)


def derive_bundle(
    instance: Instance,
    alpha: float = 1.0,
    views: Iterable[str] = mdtas.consts.ALL_VIEWS,
    tie_break: Optional[np.ndarray] = None,
    tolerance: float = mdtas.consts.DEFAULT_TOLERANCE,
    source: Optional[str] = None) -> ElicitationBundle:
    '''
    Derives the requested views of `instance` into one bundle.

    Parameters:
        instance (Instance): the source instance
        alpha (float): threshold of the TAS view
        views (Iterable[str]): any of 'ordinal', 'distances', 'tas'
        tie_break (Optional[np.ndarray]): ordinal tie-break priorities
        tolerance (float): comparison slack
        source (Optional[str]): provenance label, defaults to the instance repr

    Returns:
        ElicitationBundle
    '''
    wanted = frozenset(views)
    unknown = wanted - mdtas.consts.ALL_VIEWS

    if unknown:
        raise UnsupportedError(f'Unknown view(s): {", ".join(sorted(unknown))}')

    return ElicitationBundle(
        provenance_of(instance, source),
        ordinal=derive_ordinal(instance, tie_break, tolerance) if mdtas.consts.ORDINAL in wanted else None,
        alt_distances=derive_alt_distances(instance) if mdtas.consts.DISTANCES in wanted else None,
        tas=derive_tas(instance, alpha, tolerance) if mdtas.consts.TAS in wanted else None,
    )


def restrict(bundle: ElicitationBundle, views: Iterable[str]) -> ElicitationBundle:
    '''
    A copy of `bundle` holding only the named views
    '''
    keep = frozenset(views)
    return ElicitationBundle(
        bundle.provenance,
        ordinal=bundle.ordinal if mdtas.consts.ORDINAL in keep else None,
        alt_distances=bundle.alt_distances if mdtas.consts.DISTANCES in keep else None,
        tas=bundle.tas if mdtas.consts.TAS in keep else None,
    )


@dataclass(frozen=True)
class LineOrdering:
    '''
    Left-to-right order of every agent and alternative on the line. Entries
    are (kind, index) pairs; at equal positions agents come first, then lower
    indices.
    '''
    entries: Tuple[Tuple[str, int], ...]

    @property
    def agents(self) -> Tuple[int, ...]:
        return tuple(index for kind, index in self.entries if kind == mdtas.consts.AGENT)

    @property
    def alternatives(self) -> Tuple[int, ...]:
        return tuple(index for kind, index in self.entries if kind == mdtas.consts.ALTERNATIVE)

    def serialize(self) -> List[List]:
        return [[kind, index] for kind, index in self.entries]


def line_ordering(bundle: ElicitationBundle) -> LineOrdering:
    '''
    Reads the left-to-right ordering from the positions attached to the
    bundle's provenance.

    Parameters:
        bundle (ElicitationBundle): a bundle derived from a LineInstance

    Returns:
        LineOrdering
    '''
    provenance = bundle.provenance

    if not provenance.is_line:
        raise UnsupportedError(f'bundle from "{provenance.source}" carries no line positions')

    points = [(position, 0, mdtas.consts.AGENT, index) for index, position in enumerate(provenance.agent_positions)]
    points += [(position, 1, mdtas.consts.ALTERNATIVE, index) for index, position in enumerate(provenance.alternative_positions)]
    points.sort(key=lambda point: (point[0], point[1], point[3]))

    return LineOrdering(tuple((kind, index) for _, _, kind, index in points))
