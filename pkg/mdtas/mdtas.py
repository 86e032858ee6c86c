#!/usr/bin/env python3
import os
import sys
import argparse

import mdtas.utils
import mdtas.opts
import mdtas.color
import mdtas.consts

from typing import Dict, List, Optional, Sequence, Tuple

from mdtas.constructions import CONSTRUCTIONS, asymptotic_ratio, build, verify
from mdtas.core import validate_metric
from mdtas.evaluation import distortion, evaluate_corpus, proven_bound, sweep_table
from mdtas.exceptions import MDTASError, ParameterError, SchemaError
from mdtas.mechanisms import MECHANISMS
from mdtas.models import (
    BatchRow,
    ConstructionParams,
    Instance,
    LineInstance,
    MechanismId,
    Objective,
    RunSpec,
    SearchConfig,
    significant,
)
from mdtas.search import hill_climb, random_corpus

__version__ = 1.0

log = mdtas.utils.log


def _default_alpha(name: str) -> float:
    return MECHANISMS[name].default_alpha if name in MECHANISMS else 1.0


def _mechanism_ids(names: Sequence[str], alphas: Sequence[float]) -> List[MechanismId]:
    '''
    Every (mechanism, alpha) pair of the grid. Pairs outside a mechanism's
    alpha range are skipped with a warning.
    '''
    ids: List[MechanismId] = []

    for name in names:
        for alpha in (alphas or [_default_alpha(name)]):
            try:
                ids.append(MechanismId(name, alpha))
            except ParameterError as error:
                mdtas.utils.warning_msg(f'Skipping {name} at alpha={alpha:.12g}: {error}')

    if not ids:
        raise ParameterError('alpha', 'at least one valid (mechanism, alpha) pair', list(alphas))

    return ids


def _range(values: Sequence[int]) -> Tuple[int, int]:
    if len(values) not in (1, 2):
        raise ParameterError('range', 'one value or a low and a high value', list(values))
    return int(values[0]), int(values[-1])


def _mark(passed: bool) -> str:
    return mdtas.consts.GREEN_CHECK_MARK if passed else mdtas.consts.RED_X


def _bound_text(bound: Optional[float]) -> str:
    return mdtas.utils.format_number(bound) if bound is not None else '-'


def _load_instance(path: str, tolerance: float) -> Instance:
    instance = mdtas.utils.load_instance(path)
    validation = validate_metric(mdtas.utils.read_json(path).get('dist', instance.dist), tolerance)

    if not validation.ok:
        mdtas.utils.warning_msg(f'{path} is not a metric ({validation.total} violation(s)); run `mdtas validate {path}` for details')

    return instance


def validate_files(spec: RunSpec) -> int:
    '''
    Instance files are checked for every metric axiom on the matrix exactly as
    written; bundle files only for their schema.
    '''
    results: List[dict] = []
    rows: List[List[str]] = []

    for path in spec.inputs:
        try:
            data = mdtas.utils.read_json(path)
            kind = 'instance' if isinstance(data, dict) and 'kind' in data else 'bundle'

            if kind == 'instance':
                instance = mdtas.utils.load_instance(path)
                validation = validate_metric(data.get('dist', instance.dist), spec.tolerance)
                result = {'path': path, 'kind': kind, **validation.serialize()}
            else:
                mdtas.utils.load_bundle(path)
                result = {'path': path, 'kind': kind, 'ok': True, 'total': 0, 'violations': []}

        except SchemaError as error:
            mdtas.utils.error_msg(str(error))
            result = {'path': path, 'kind': 'unreadable', 'ok': False, 'total': 1, 'violations': [str(error)]}

        results.append(result)
        rows.append([path, result['kind'], _mark(result['ok']), str(result['total'])])

        for violation in result['violations'][:5]:
            rows.append(['', '', '', mdtas.color.normal_red(violation)])

    mdtas.utils.display_table(['file', 'kind', 'ok', 'violations'], rows)

    if spec.output:
        mdtas.utils.write_json(spec.output, results)

    return mdtas.consts.EXIT_OK if all(result['ok'] for result in results) else mdtas.consts.EXIT_VIOLATION


def eval_files(spec: RunSpec) -> int:
    '''
    Distortion of every mechanism of the grid under every objective on each
    instance file, against the proven bound where one exists
    '''
    mechanism_ids = _mechanism_ids(spec.mechanisms, spec.alphas)
    reports: List[dict] = []
    rows: List[BatchRow] = []

    for path in spec.inputs:
        instance = _load_instance(path, spec.tolerance)
        space = mdtas.consts.LINE if isinstance(instance, LineInstance) else mdtas.consts.GENERAL

        for mechanism_id in mechanism_ids:
            if mechanism_id.name in MECHANISMS and MECHANISMS[mechanism_id.name].needs_line and space != mdtas.consts.LINE:
                mdtas.utils.warning_msg(f'{mechanism_id.name} only runs on line instances, skipping {path}')
                continue

            for objective in spec.objectives:
                report = distortion(instance, mechanism_id, objective, spec.tolerance)
                bound = proven_bound(mechanism_id, objective, space, instance.n_agents)
                row = BatchRow(path, mechanism_id, objective, space, instance.n_agents, report.winner, report.ratio, report.degenerate, bound)

                rows.append(row)
                reports.append({
                    'instance_id': path,
                    'bound': significant(bound) if bound is not None else None,
                    'violation': row.violates(spec.tolerance),
                    **report.serialize(),
                })

    violations = sum(row.violates(spec.tolerance) for row in rows)

    if spec.output_format == mdtas.consts.CSV:
        if spec.output:
            mdtas.utils.write_csv(spec.output, mdtas.consts.BATCH_CSV_COLUMNS, [row.serialize() for row in rows])
        else:
            mdtas.utils.display_table(
                mdtas.consts.BATCH_CSV_COLUMNS + ['bound', 'ok'],
                [
                    [row.instance_id, row.mechanism.name, mdtas.utils.format_number(row.mechanism.alpha), row.objective.value,
                     str(row.winner), mdtas.utils.format_number(row.ratio), _bound_text(row.bound), _mark(not row.violates(spec.tolerance))]
                    for row in rows
                ],
            )
    elif spec.output:
        mdtas.utils.write_json(spec.output, reports)
    else:
        mdtas.utils.display_json(reports)

    if violations:
        mdtas.utils.error_msg(f'{violations} evaluation(s) exceed their proven bound')
        return mdtas.consts.EXIT_VIOLATION

    return mdtas.consts.EXIT_OK


def construct_witness(spec: RunSpec) -> int:
    '''
    Builds a lower-bound witness, verifies it, and prints the predicted costs
    next to the realized ones
    '''
    options = spec.options
    construction_id = str(options['construction'])
    params = ConstructionParams(
        n=int(options['n']),  # type: ignore
        alpha=spec.alphas[0],
        epsilon=float(options['epsilon']),  # type: ignore
        delta=float(options['delta']),  # type: ignore
        target=options.get('target'),  # type: ignore
    )

    output = build(construction_id, params, spec.tolerance)
    report = verify(output, spec.tolerance)
    slack = mdtas.consts.PREDICTION_TOLERANCE_FACTOR * spec.tolerance
    asymptotic = asymptotic_ratio(construction_id, output.params.alpha, output.params.n)

    print(f'{mdtas.color.bright_green(construction_id)} {output.objective} with n={output.params.n}, alpha={output.params.alpha:.12g}, target={output.adversarial_winner}, reference={output.reference}')

    mdtas.utils.display_table(
        ['', 'predicted', 'realized', 'ok'],
        [
            ['winner cost', mdtas.utils.format_number(output.predicted.winner_cost), mdtas.utils.format_number(report.winner_cost),
             _mark(abs(report.winner_cost - output.predicted.winner_cost) <= slack)],
            ['reference cost', mdtas.utils.format_number(output.predicted.best_cost), mdtas.utils.format_number(report.best_cost),
             _mark(abs(report.best_cost - output.predicted.best_cost) <= slack)],
            ['ratio', mdtas.utils.format_number(output.predicted.ratio), mdtas.utils.format_number(report.ratio), ''],
            ['asymptotic', mdtas.utils.format_number(asymptotic), '', ''],
        ],
    )

    for diff in report.diffs:
        print(mdtas.consts.RED_X, diff)

    print('verification:', mdtas.color.verdict(report.passed))

    if spec.output:
        mdtas.utils.write_json(os.path.join(spec.output, f'{construction_id}.instance.json'), output.instance.serialize())
        mdtas.utils.write_json(os.path.join(spec.output, f'{construction_id}.bundle.json'), output.bundle.serialize())
        mdtas.utils.write_json(os.path.join(spec.output, f'{construction_id}.report.json'), {
            **output.serialize(),
            'asymptotic_ratio': significant(asymptotic),
            'verification': report.serialize(),
        })

    return mdtas.consts.EXIT_OK if report.passed else mdtas.consts.EXIT_VIOLATION


def sweep_corpus(spec: RunSpec) -> int:
    '''
    Evaluates the mechanism grid over a corpus (the given files, or a seeded
    random corpus) and prints the largest ratio of every cell against its
    proven bound
    '''
    options = spec.options

    if spec.inputs:
        corpus: List[Tuple[str, Instance]] = [(path, _load_instance(path, spec.tolerance)) for path in spec.inputs]
    else:
        corpus = random_corpus(
            str(options['space']),
            int(options['count']),  # type: ignore
            _range(options['n_range']),  # type: ignore
            _range(options['m_range']),  # type: ignore
            spec.seed,
        )

    rows = evaluate_corpus(corpus, _mechanism_ids(spec.mechanisms, spec.alphas), spec.objectives, spec.tolerance)
    cells = sweep_table(rows, spec.tolerance)

    status_colors = {'VIOLATION': mdtas.color.bright_red, 'ok': mdtas.color.bright_green, 'no bound': mdtas.color.normal_yellow}

    mdtas.utils.display_table(
        mdtas.consts.SWEEP_CSV_COLUMNS,
        [
            [cell.mechanism, mdtas.utils.format_number(cell.alpha), cell.objective.value, cell.space, str(cell.instances),
             mdtas.utils.format_number(cell.max_ratio), _bound_text(cell.bound), status_colors[cell.status](cell.status)]
            for cell in cells
        ],
    )

    if spec.output:
        if spec.output_format == mdtas.consts.CSV:
            mdtas.utils.write_csv(spec.output, mdtas.consts.SWEEP_CSV_COLUMNS, [cell.serialize() for cell in cells])
        else:
            mdtas.utils.write_json(spec.output, {
                'cells': [{**cell.serialize(), 'max_ratio': significant(cell.max_ratio)} for cell in cells],
                'rows': [{**row.serialize(), 'ratio': significant(row.ratio)} for row in rows],
            })

    violations = sum(cell.violations for cell in cells)

    if violations:
        mdtas.utils.error_msg(f'{violations} evaluation(s) exceed their proven bound')
        return mdtas.consts.EXIT_VIOLATION

    return mdtas.consts.EXIT_OK


def search_witness(spec: RunSpec) -> int:
    '''
    Hill climbs for a high-distortion instance and checks the best ratio
    against the proven bound
    '''
    options = spec.options
    name = spec.mechanisms[0]

    config = SearchConfig(
        mechanism=MechanismId(name, spec.alphas[0] if spec.alphas else _default_alpha(name)),
        objective=spec.objectives[0],
        space=str(options['space']),
        n_range=_range(options['n_range']),  # type: ignore
        m_range=_range(options['m_range']),  # type: ignore
        restarts=int(options['restarts']),  # type: ignore
        steps=int(options['steps']),  # type: ignore
        step_size=float(options['step_size']),  # type: ignore
        seed=spec.seed,
    )

    result = hill_climb(config, spec.tolerance)
    bound = proven_bound(config.mechanism, config.objective, config.space, result.best_instance.n_agents)
    within = bound is None or result.best_ratio <= bound + spec.tolerance

    mdtas.utils.display_table(
        ['mechanism', 'objective', 'space', 'best ratio', 'restart', 'bound', 'ok'],
        [[str(config.mechanism), config.objective.value, config.space, mdtas.utils.format_number(result.best_ratio),
          str(result.best_restart), _bound_text(bound), _mark(within)]],
    )

    if spec.output:
        mdtas.utils.write_json(os.path.join(spec.output, 'search.json'), result.serialize())
        mdtas.utils.write_json(os.path.join(spec.output, 'witness.instance.json'), result.best_instance.serialize())
    else:
        mdtas.utils.display_json(result.serialize())

    if not within:
        mdtas.utils.error_msg(f'best ratio {result.best_ratio:.12g} exceeds the proven bound {bound:.12g}')
        return mdtas.consts.EXIT_VIOLATION

    return mdtas.consts.EXIT_OK


def list_registry(spec: RunSpec) -> int:
    ''' Displays the mechanism and construction registries '''
    mechanisms = [
        [mdtas.color.normal_green(mechanism.name), mdtas.utils.format_number(mechanism.default_alpha),
         ', '.join(sorted(mechanism.views)), 'line' if mechanism.needs_line else 'any', mechanism.summary]
        for mechanism in MECHANISMS.values()
    ]
    mechanisms.append([mdtas.color.normal_green(mdtas.consts.OMNISCIENT), '1', 'instance', 'any', 'the optimal alternative (baseline)'])

    mdtas.utils.display_table(['mechanism', 'default alpha', 'views', 'space', 'summary'], mechanisms)
    print()

    mdtas.utils.display_table(
        ['construction', 'objective', 'views', 'validity'],
        [
            [mdtas.color.normal_green(construction.id), construction.objective.value, ', '.join(sorted(construction.views)), construction.validity]
            for construction in CONSTRUCTIONS.values()
        ],
    )

    return mdtas.consts.EXIT_OK


COMMANDS = {
    mdtas.opts.VALIDATE: validate_files,
    mdtas.opts.EVAL: eval_files,
    mdtas.opts.CONSTRUCT: construct_witness,
    mdtas.opts.SWEEP: sweep_corpus,
    mdtas.opts.SEARCH: search_witness,
    mdtas.opts.LIST: list_registry,
}


def run(spec: RunSpec) -> int:
    '''
    Executes one CLI command

    Parameters:
        spec (RunSpec): the command and its inputs

    Returns:
        int: 0 when everything checked out, 1 on a bound violation or a failed check
    '''
    for path in spec.inputs:
        if not os.path.isfile(path):
            raise SchemaError(path, 'no such file')

    log.info(f'Running `{spec.command}` with tolerance {spec.tolerance}')
    return COMMANDS[spec.command](spec)


def _as_list(value) -> list:
    if value is None:
        return []
    return list(value) if isinstance(value, (list, tuple)) else [value]


def spec_from_args(args: argparse.Namespace) -> RunSpec:
    '''
    Converts parsed arguments into a RunSpec, resolving the tolerance from
    --tolerance, then $MDTAS_TOLERANCE, then the default
    '''
    tolerance = args.tolerance if getattr(args, 'tolerance', None) is not None else mdtas.utils.get_tolerance()
    options: Dict[str, object] = {}

    if args.subcmd == mdtas.opts.CONSTRUCT:
        options = {key: getattr(args, key) for key in ('construction', 'n', 'epsilon', 'delta', 'target')}
        alphas = [args.alpha]
    else:
        alphas = _as_list(getattr(args, 'alphas', None))

    if args.subcmd in (mdtas.opts.SWEEP, mdtas.opts.SEARCH):
        options.update({key: getattr(args, key) for key in ('space', 'n_range', 'm_range')})

    if args.subcmd == mdtas.opts.SWEEP:
        options['count'] = args.count

    if args.subcmd == mdtas.opts.SEARCH:
        options.update({key: getattr(args, key) for key in ('restarts', 'steps', 'step_size')})

    return RunSpec(
        command=args.subcmd,
        inputs=tuple(_as_list(getattr(args, 'inputs', None))),
        mechanisms=tuple(_as_list(getattr(args, 'mechanisms', None))),
        alphas=tuple(float(alpha) for alpha in alphas),
        objectives=tuple(Objective.parse(text) for text in _as_list(getattr(args, 'objectives', None))) or (Objective.SOCIAL_COST,),
        output=getattr(args, 'output', None),
        output_format=getattr(args, 'output_format', mdtas.consts.JSON),
        seed=getattr(args, 'seed', mdtas.consts.DEFAULT_SEED),
        tolerance=tolerance,
        options=options,
    )


def main(argv: Optional[List[str]] = None) -> None:
    ''' Main entry point for CLI '''
    argv = sys.argv if argv is None else argv
    parser = mdtas.opts.get_user_args(argv)
    args = parser.parse_args(argv[1:])

    if args.version:
        print(f'{__version__}')
        sys.exit(mdtas.consts.EXIT_OK)

    if args.subcmd not in COMMANDS:
        mdtas.utils.error_msg('Unknown argument\n')
        parser.print_help()
        sys.exit(mdtas.consts.EXIT_FATAL)

    try:
        status = run(spec_from_args(args))
    except MDTASError as error:
        mdtas.utils.fatal_msg(str(error))
        return

    sys.exit(status)


if __name__ == "__main__":
    try:
        main(sys.argv)
    except KeyboardInterrupt:
        mdtas.utils.keyboard_interrupt_log()
