#!/usr/bin/env python3
import sys
import os
import csv
import json
import pathlib
import re

from logging import Logger
from typing import Any, Dict, Iterable, List, Sequence

import mdtas.color
import mdtas.consts
import mdtas.models

from mdtas.exceptions import SchemaError, StructuralError

MDTASLogger = mdtas.models.MDTASLogger

log: Logger = MDTASLogger().logger # type: ignore

ANSI_ESCAPE = re.compile(r'\x1b\[[0-9;]*m')


def keyboard_interrupt_log() -> None:
    '''
    Logs info message stating user killed a process with a keyboard interrupt,
    and exits program with error code of 127

    Parameters:
        None

    Returns:
        None
    '''
    print()
    log.info('User killed process with keyboard interrupt')
    sys.exit(mdtas.consts.EXIT_FATAL)


def error_msg(msg: str) -> None:
    '''
    Logs error message, displays error message to user, and continues program execution

    Parameters:
        msg (str): The error message to be printed to stdout

    Returns:
        None
    '''
    log.error(msg)
    print(mdtas.color.bright_red('ERROR:'), msg)


def warning_msg(msg: str) -> None:
    '''
    Logs warning message, displays warning message to user, and continues program execution

    Parameters:
        msg (str): The warning message to be printed to stdout

    Returns:
        None
    '''
    log.warning(msg)
    print(mdtas.color.bright_yellow('WARNING:'), msg)


def fatal_msg(msg: str) -> None:
    '''
    Logs fatal message, displays fatal message to user, and halts program execution

    Parameters:
        msg (str): The fatal error message to be printed to stdout

    Returns:
        None
    '''
    log.critical(msg)
    print(mdtas.color.bright_red('FATAL:'), msg)
    sys.exit(mdtas.consts.EXIT_FATAL)


def get_tolerance() -> float:
    '''
    Reads the default comparison tolerance from the MDTAS_TOLERANCE
    environment variable, falling back to the built-in default when unset or
    malformed.

    Parameters:
        None

    Returns:
        tolerance (float): the tolerance to use
    '''
    raw = os.environ.get(mdtas.consts.MDTAS_TOLERANCE_ENV, '').strip()

    if not raw:
        return mdtas.consts.DEFAULT_TOLERANCE

    try:
        value = float(raw)
    except ValueError:
        warning_msg(f'{mdtas.consts.MDTAS_TOLERANCE_ENV}="{raw}" is not a number, using {mdtas.consts.DEFAULT_TOLERANCE}')
        return mdtas.consts.DEFAULT_TOLERANCE

    if not value >= 0:
        warning_msg(f'{mdtas.consts.MDTAS_TOLERANCE_ENV}={raw} is negative, using {mdtas.consts.DEFAULT_TOLERANCE}')
        return mdtas.consts.DEFAULT_TOLERANCE

    log.info(f'Using tolerance {value} from {mdtas.consts.MDTAS_TOLERANCE_ENV}')
    return value


def format_number(value: float) -> str:
    ''' Fixed 12 significant digit rendering used in every table and CSV '''
    return f'{value:.{mdtas.consts.SIGNIFICANT_DIGITS}g}'


def read_json(path: str) -> Any:
    '''
    Loads a JSON document, converting decoder and I/O failures into a
    SchemaError carrying the file location.

    Parameters:
        path (str): the file to read

    Returns:
        data (Any): the decoded document
    '''
    log.info(f'Reading {path}')

    try:
        with open(path, 'r', encoding='utf-8') as source:
            return json.load(source)
    except json.JSONDecodeError as error:
        raise SchemaError(path, error.msg, error.lineno, error.colno) from error
    except OSError as error:
        raise SchemaError(path, error.strerror or str(error)) from error


def load_instance(path: str) -> mdtas.models.Instance:
    '''
    Reads an instance file (general matrix or line positions)

    Parameters:
        path (str): the file to read

    Returns:
        instance (Instance): the decoded instance
    '''
    data = read_json(path)

    if not isinstance(data, dict):
        raise SchemaError(path, 'expected a JSON object at the top level')

    try:
        return mdtas.models.instance_from_dict(data)
    except KeyError as error:
        raise SchemaError(path, f'missing field {error}') from error
    except (StructuralError, TypeError, ValueError) as error:
        raise SchemaError(path, str(error)) from error


def load_bundle(path: str) -> mdtas.models.ElicitationBundle:
    '''
    Reads an elicitation bundle file

    Parameters:
        path (str): the file to read

    Returns:
        bundle (ElicitationBundle): the decoded bundle
    '''
    data = read_json(path)

    if not isinstance(data, dict):
        raise SchemaError(path, 'expected a JSON object at the top level')

    try:
        return mdtas.models.ElicitationBundle.from_dict(data)
    except KeyError as error:
        raise SchemaError(path, f'missing field {error}') from error
    except (StructuralError, TypeError, ValueError) as error:
        raise SchemaError(path, str(error)) from error


def to_json(data: Any) -> str:
    ''' Stable JSON text: sorted keys, two space indent '''
    return json.dumps(data, indent=2, sort_keys=True)


def write_json(path: str, data: Any) -> None:
    '''
    Writes 'data' as stable JSON, creating parent directories as needed

    Parameters:
        path (str): destination file
        data (Any): JSON serializable object

    Returns:
        None
    '''
    pathlib.Path(path).parent.mkdir(parents=True, exist_ok=True)

    with open(path, 'w', encoding='utf-8') as destination:
        destination.write(to_json(data) + '\n')

    log.info(f'Wrote {path}')


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> None:
    '''
    Writes rows as CSV with the given header. Floats are rendered with 12
    significant digits.

    Parameters:
        path (str): destination file
        columns (Sequence[str]): header and column order
        rows (Iterable[Dict[str, Any]]): one dict per row

    Returns:
        None
    '''
    pathlib.Path(path).parent.mkdir(parents=True, exist_ok=True)

    with open(path, 'w', encoding='utf-8', newline='') as destination:
        writer = csv.DictWriter(destination, fieldnames=list(columns), lineterminator='\n')
        writer.writeheader()

        for row in rows:
            writer.writerow({key: format_number(value) if isinstance(value, float) else value for key, value in row.items()})

    log.info(f'Wrote {path}')


def display_json(data: Any) -> None:
    '''
    Prints JSON to stdout, syntax highlighted when stdout is a terminal

    Parameters:
        data (Any): JSON serializable object

    Returns:
        None
    '''
    text = to_json(data)

    if sys.stdout.isatty():
        from pygments import highlight
        from pygments.lexers.data import JsonLexer
        from pygments.formatters.terminal import TerminalFormatter
        text = highlight(text, JsonLexer(), TerminalFormatter()).rstrip('\n')

    print(text)


def display_table(header: List[str], rows: List[List[str]]) -> None:
    '''
    Prints rows as left aligned columns, header in bright cyan

    Parameters:
        header (List[str]): column titles
        rows (List[List[str]]): cell text, may contain color codes

    Returns:
        None
    '''
    def visible(cell: str) -> int:
        return len(ANSI_ESCAPE.sub('', cell))

    widths = [max([visible(title)] + [visible(row[col]) for row in rows]) for col, title in enumerate(header)]

    def render(cells: List[str]) -> str:
        return '  '.join(cell + ' ' * (width - visible(cell)) for cell, width in zip(cells, widths)).rstrip()

    print(mdtas.color.bright_cyan(render(header)))

    for row in rows:
        print(render(row))
