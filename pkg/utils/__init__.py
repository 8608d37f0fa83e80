"""Utils package initialization"""

from .config import Config
from .helpers import (
    normalize_identifier,
    smart_threshold,
    get_best_suggestions,
    leading_whitespace,
    atomic_write_text,
)

__all__ = [
    'Config',
    'normalize_identifier',
    'smart_threshold',
    'get_best_suggestions',
    'leading_whitespace',
    'atomic_write_text',
]
