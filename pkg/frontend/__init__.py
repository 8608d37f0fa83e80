"""Frontend package initialization"""

from .aliases import resolve_aliases
from .annotations import parse_annotation
from .parser import parse_file, parse_source
from .printer import format_expr, print_source

__all__ = [
    'resolve_aliases',
    'parse_annotation',
    'parse_file',
    'parse_source',
    'format_expr',
    'print_source',
]
