"""Commands package initialization"""

from .diagnostics import Diagnostic, inconsistency_diagnostic, inconsistency_lines, render_all, render_constraint
from .generator import GeneratorParams, generate, render_corpus
from .reports import critical_declarations, group_by_file, infer_report, inferred_units, suggest_report
from .session import Session, UnitAnalysis, analyse
from .synth import synthesise, synthesise_file

__all__ = [
    'Diagnostic',
    'inconsistency_diagnostic',
    'inconsistency_lines',
    'render_all',
    'render_constraint',
    'GeneratorParams',
    'generate',
    'render_corpus',
    'critical_declarations',
    'group_by_file',
    'infer_report',
    'inferred_units',
    'suggest_report',
    'Session',
    'UnitAnalysis',
    'analyse',
    'synthesise',
    'synthesise_file',
]
