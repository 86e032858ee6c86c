#!/usr/bin/env python3
from typing import List, Optional, Sequence


class MDTASError(ValueError):
    '''
    Base class of every error raised by the mdtas library. The CLI converts
    these into colored messages and an exit status.
    '''


class StructuralError(MDTASError):
    '''
    Error: malformed input (non-square or non-finite matrix, mismatched
    shapes, index out of range).
    '''


class ParameterError(MDTASError):
    '''
    Error: a parameter lies outside its valid range.

    Parameters:
        name (str): the offending parameter
        constraint (str): the violated constraint, in readable form
        value (object): the value that was supplied
    '''

    def __init__(self, name: str, constraint: str, value: object = None):
        self.name = name
        self.constraint = constraint
        self.value = value
        message = f'Parameter `{name}` violates constraint {constraint}'

        if value is not None:
            message += f' (got {value})'

        super().__init__(message)


class UnsupportedError(MDTASError):
    '''
    Error: the requested operation does not apply to the given input, such as
    a line-only mechanism on a bundle without line provenance, or an unknown
    mechanism or construction id.
    '''


class MissingViewError(MDTASError):
    '''
    Error: a mechanism was handed a bundle lacking one of its required views.

    Parameters:
        mechanism (str): the mechanism name
        missing (Sequence[str]): the absent views
    '''

    def __init__(self, mechanism: str, missing: Sequence[str]):
        self.mechanism = mechanism
        self.missing = sorted(missing)
        super().__init__(f'Mechanism {mechanism} requires the view(s) {", ".join(self.missing)}, which the bundle does not carry')


class DisconnectedError(MDTASError):
    '''
    Error: a partial distance matrix does not connect all points.

    Parameters:
        components (List[List[int]]): point indices of each connected component
    '''

    def __init__(self, components: List[List[int]]):
        self.components = components
        listing = '; '.join('{' + ', '.join(str(point) for point in component) + '}' for component in components)
        super().__init__(f'Specified distances leave {len(components)} disconnected components: {listing}')


class InvariantError(MDTASError):
    '''
    Error: an internal invariant was violated (for example an empty approval set).
    '''


class SchemaError(MDTASError):
    '''
    Error: an input file does not match the expected schema.

    Parameters:
        path (str): the file being read
        reason (str): what is wrong
        line (int): line number reported by the decoder, if any
        column (int): column number reported by the decoder, if any
    '''

    def __init__(self, path: str, reason: str, line: Optional[int] = None, column: Optional[int] = None):
        self.path = path
        self.line = line
        self.column = column
        location = path if line is None else f'{path}:{line}:{column}'
        super().__init__(f'{location}: {reason}')
