#!/usr/bin/env python3
import sys
import argparse
import argcomplete
import mdtas.consts
from typing import List, Optional

# subcommand names, kept here rather than in mdtas.consts so mdtas.py reads opts.VALIDATE, opts.SWEEP, etc
VALIDATE: str = 'validate'
EVAL: str = 'eval'
CONSTRUCT: str = 'construct'
SWEEP: str = 'sweep'
SEARCH: str = 'search'
LIST: str = 'list'

SUBCOMMANDS: List[str] = [VALIDATE, EVAL, CONSTRUCT, SWEEP, SEARCH, LIST]

MECHANISM_CHOICES: List[str] = [
    mdtas.consts.MINISUM_TAS,
    mdtas.consts.ELIMINATION_WEIGHTED_MAJORITY,
    mdtas.consts.MOST_COMPACT_SET,
    mdtas.consts.MAX_TAS_LEFTMOST,
    mdtas.consts.MINIMAX_TAS,
    mdtas.consts.ANY_APPROVED,
    mdtas.consts.TOP_CHOICE_DICTATOR,
    mdtas.consts.OMNISCIENT,
]

CONSTRUCTION_CHOICES: List[str] = [
    mdtas.consts.CYCLIC_SYMMETRIC,
    mdtas.consts.SC_ALL_THREE,
    mdtas.consts.SC_DIST_TAS,
    mdtas.consts.SC_ORD_TAS,
    mdtas.consts.TAS_ONLY_LINE,
    mdtas.consts.LINE_SC_ORDINAL_1,
    mdtas.consts.LINE_SC_ORDINAL_2,
    mdtas.consts.LINE_SC_DIST_1,
    mdtas.consts.LINE_SC_DIST_2,
    mdtas.consts.MC_GENERAL_I1,
    mdtas.consts.MC_GENERAL_I2,
    mdtas.consts.MC_TAS_ONLY,
]

OBJECTIVE_CHOICES: List[str] = [mdtas.consts.SOCIAL_COST, mdtas.consts.MAX_COST]


def _add_tolerance(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--tolerance',
        type=float,
        default=None,
        help=f'comparison slack, overrides ${mdtas.consts.MDTAS_TOLERANCE_ENV} (default {mdtas.consts.DEFAULT_TOLERANCE})',
        dest='tolerance'
    )


def _add_output(parser: argparse.ArgumentParser, formats: bool = True) -> None:
    parser.add_argument(
        '-o',
        '--output',
        default=None,
        help='write the report to this path instead of printing it',
        dest='output'
    )

    if formats:
        parser.add_argument(
            '-f',
            '--format',
            choices=mdtas.consts.OUTPUT_FORMATS,
            default=mdtas.consts.JSON,
            help='report format (default: json)',
            dest='output_format'
        )


def _add_mechanisms(parser: argparse.ArgumentParser, many: bool = True) -> None:
    parser.add_argument(
        '-m',
        '--mechanism',
        nargs='+' if many else None,
        choices=MECHANISM_CHOICES,
        required=True,
        help='mechanism id(s), see `mdtas list`',
        dest='mechanisms'
    )

    parser.add_argument(
        '-a',
        '--alpha',
        nargs='+' if many else None,
        type=float,
        default=None,
        help='threshold alpha (a grid of values for several); defaults to each mechanism\'s own alpha',
        dest='alphas'
    )


def _add_objectives(parser: argparse.ArgumentParser, many: bool = True) -> None:
    parser.add_argument(
        '--objective',
        nargs='+' if many else None,
        choices=OBJECTIVE_CHOICES,
        default=OBJECTIVE_CHOICES if many else mdtas.consts.SOCIAL_COST,
        help='SC (social cost) and/or MC (max cost)',
        dest='objectives'
    )


def get_user_args(argv: Optional[List[str]] = None) -> argparse.ArgumentParser:
    '''
    Builds the argument parser of the CLI. With no subcommand given, the help
    text is printed and the program exits.

    Parameters:
        argv (Optional[List[str]]): the command line, program name first (defaults to sys.argv)

    Returns:
        ArgumentParser
    '''
    argv = sys.argv if argv is None else argv

    arg_parser = argparse.ArgumentParser(
        prog='mdtas',
        usage='mdtas <subcommand> [option(s)]',
        description='''
            Metric distortion of alpha-threshold approval mechanisms: evaluate
            mechanisms on instances, generate and verify lower-bound witnesses,
            and search for high-distortion instances
            '''
    )

    subparsers = arg_parser.add_subparsers(
        title='mdtas subcommands',
        description='use `mdtas <subcommand> --help` to see more details',
        dest='subcmd',
    )

    # VALIDATE PARSER
    validate_parser = subparsers.add_parser(
        VALIDATE,
        usage='\n  mdtas validate <file(s)> [--tolerance <tol>]',
        help='check instance files for metric violations and bundle files for schema errors'
    )

    validate_parser.add_argument(
        'inputs',
        nargs='+',
        help='instance or bundle JSON files'
    )

    _add_tolerance(validate_parser)
    _add_output(validate_parser, formats=False)

    # EVAL PARSER
    eval_parser = subparsers.add_parser(
        EVAL,
        usage='\n  mdtas eval <instance(s)> --mechanism <id(s)> [--alpha <alpha(s)>] [--objective SC MC] [--output <path>] [--format json|csv]',
        help='compute the distortion of mechanisms on instance files'
    )

    eval_parser.add_argument(
        'inputs',
        nargs='+',
        help='instance JSON files'
    )

    _add_mechanisms(eval_parser)
    _add_objectives(eval_parser)
    _add_output(eval_parser)
    _add_tolerance(eval_parser)

    # CONSTRUCT PARSER
    construct_parser = subparsers.add_parser(
        CONSTRUCT,
        usage='\n  mdtas construct --id <construction> [--n <n>] [--alpha <alpha>] [--eps <eps>] [--delta <delta>] [--target <x>] [--output <dir>]',
        help='build and verify a lower-bound witness instance'
    )

    construct_parser.add_argument(
        '--id',
        choices=CONSTRUCTION_CHOICES,
        required=True,
        help='construction id, see `mdtas list`',
        dest='construction'
    )

    construct_parser.add_argument(
        '-n',
        '--n',
        type=int,
        default=2,
        help='number of agents, ignored by fixed-size constructions (default: 2)',
        dest='n'
    )

    construct_parser.add_argument(
        '-a',
        '--alpha',
        type=float,
        default=mdtas.consts.GOLDEN_ALPHA,
        help='threshold alpha (default: 1 + sqrt(2))',
        dest='alpha'
    )

    construct_parser.add_argument(
        '--eps',
        type=float,
        default=mdtas.consts.DEFAULT_EPSILON,
        help=f'epsilon (default: {mdtas.consts.DEFAULT_EPSILON})',
        dest='epsilon'
    )

    construct_parser.add_argument(
        '--delta',
        type=float,
        default=mdtas.consts.DEFAULT_DELTA,
        help=f'delta (default: {mdtas.consts.DEFAULT_DELTA})',
        dest='delta'
    )

    construct_parser.add_argument(
        '--target',
        type=int,
        default=None,
        help='alternative the adversary assumes was chosen (default: the construction\'s own)',
        dest='target'
    )

    construct_parser.add_argument(
        '-o',
        '--output',
        default=None,
        help='directory receiving the instance, bundle and report JSON files',
        dest='output'
    )

    _add_tolerance(construct_parser)

    # SWEEP PARSER
    sweep_parser = subparsers.add_parser(
        SWEEP,
        usage='\n  mdtas sweep [<instance(s)>] --mechanism <id(s)> [--alpha <alpha(s)>] [--space line|general] [--count <k>] [--n <lo> <hi>] [--m <lo> <hi>] [--seed <seed>]',
        help='evaluate mechanisms over a corpus and compare the largest ratios with the proven bounds'
    )

    sweep_parser.add_argument(
        'inputs',
        nargs='*',
        help='instance JSON files; a random corpus is drawn when none are given'
    )

    _add_mechanisms(sweep_parser)
    _add_objectives(sweep_parser)

    sweep_parser.add_argument(
        '--space',
        choices=mdtas.consts.SPACES,
        default=mdtas.consts.LINE,
        help='space of the random corpus (default: line)',
        dest='space'
    )

    sweep_parser.add_argument(
        '--count',
        type=int,
        default=100,
        help='size of the random corpus (default: 100)',
        dest='count'
    )

    sweep_parser.add_argument(
        '--n',
        nargs=2,
        type=int,
        default=[1, 8],
        metavar=('LOW', 'HIGH'),
        help='inclusive range of the number of agents (default: 1 8)',
        dest='n_range'
    )

    sweep_parser.add_argument(
        '--m',
        nargs=2,
        type=int,
        default=[1, 6],
        metavar=('LOW', 'HIGH'),
        help='inclusive range of the number of alternatives (default: 1 6)',
        dest='m_range'
    )

    sweep_parser.add_argument(
        '--seed',
        type=int,
        default=mdtas.consts.DEFAULT_SEED,
        help=f'seed of the random corpus (default: {mdtas.consts.DEFAULT_SEED})',
        dest='seed'
    )

    _add_output(sweep_parser)
    _add_tolerance(sweep_parser)

    # SEARCH PARSER
    search_parser = subparsers.add_parser(
        SEARCH,
        usage='\n  mdtas search --mechanism <id> [--alpha <alpha>] [--objective SC|MC] [--space line|general] [--n <lo> [<hi>]] [--m <lo> [<hi>]] [--restarts <r>] [--steps <s>] [--seed <seed>]',
        help='hill climb towards instances with high distortion'
    )

    _add_mechanisms(search_parser, many=False)
    _add_objectives(search_parser, many=False)

    search_parser.add_argument(
        '--space',
        choices=mdtas.consts.SPACES,
        default=mdtas.consts.LINE,
        help='line or general instances (default: line)',
        dest='space'
    )

    search_parser.add_argument(
        '--n',
        nargs='+',
        type=int,
        default=[2],
        help='number of agents, or an inclusive range (default: 2)',
        dest='n_range'
    )

    search_parser.add_argument(
        '--m',
        nargs='+',
        type=int,
        default=[2],
        help='number of alternatives, or an inclusive range (default: 2)',
        dest='m_range'
    )

    search_parser.add_argument(
        '--restarts',
        type=int,
        default=mdtas.consts.DEFAULT_RESTARTS,
        help=f'number of restarts (default: {mdtas.consts.DEFAULT_RESTARTS})',
        dest='restarts'
    )

    search_parser.add_argument(
        '--steps',
        type=int,
        default=mdtas.consts.DEFAULT_STEPS,
        help=f'perturbations per restart (default: {mdtas.consts.DEFAULT_STEPS})',
        dest='steps'
    )

    search_parser.add_argument(
        '--step-size',
        type=float,
        default=mdtas.consts.DEFAULT_STEP_SIZE,
        help=f'standard deviation of a perturbation (default: {mdtas.consts.DEFAULT_STEP_SIZE})',
        dest='step_size'
    )

    search_parser.add_argument(
        '--seed',
        type=int,
        default=mdtas.consts.DEFAULT_SEED,
        help=f'seed of the search (default: {mdtas.consts.DEFAULT_SEED})',
        dest='seed'
    )

    search_parser.add_argument(
        '-o',
        '--output',
        default=None,
        help='directory receiving the search result and the witness instance',
        dest='output'
    )

    _add_tolerance(search_parser)

    # LIST PARSER
    subparsers.add_parser(
        LIST,
        usage='\n  mdtas list',
        help='display the known mechanisms and constructions'
    )

    # GLOBAL OPTIONS
    arg_parser.add_argument(
        '-v',
        '--version',
        action='store_true',
        help='display mdtas version number',
        dest='version'
    )

    argcomplete.autocomplete(arg_parser)

    if len(argv) < 2:
        arg_parser.print_help()
        sys.exit(0)

    return arg_parser
