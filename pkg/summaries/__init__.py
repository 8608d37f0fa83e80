"""Summaries package initialization"""

from .compiler import compile_module
from .fsmod import FunctionSignature, ModuleSummary, format_summary, parse_summary, read_summary, write_summary
from .intrinsics import intrinsic_signature, intrinsic_templates
from .loader import SummaryLoader, load_summaries, summary_entry

__all__ = [
    'compile_module',
    'FunctionSignature',
    'ModuleSummary',
    'format_summary',
    'parse_summary',
    'read_summary',
    'write_summary',
    'intrinsic_signature',
    'intrinsic_templates',
    'SummaryLoader',
    'load_summaries',
    'summary_entry',
]
