"""Solver package initialization"""

from .core import minimal_core
from .hnf import Consistency, check_consistency, hnf, is_hnf, modified_hnf
from .matrix import AugMatrix, constraints_to_matrix, format_matrix
from .solution import Inconsistency, Solution, SolveResult, extract_solution, solve

__all__ = [
    'minimal_core',
    'Consistency',
    'check_consistency',
    'hnf',
    'is_hnf',
    'modified_hnf',
    'AugMatrix',
    'constraints_to_matrix',
    'format_matrix',
    'Inconsistency',
    'Solution',
    'SolveResult',
    'extract_solution',
    'solve',
]
