"""Units package initialization"""

from .core import (
    UNITLESS,
    Atom,
    BaseUnit,
    Constraint,
    ExplicitAbs,
    ExplicitUse,
    GeneratedUnit,
    LitOrVar,
    ParamAbs,
    ParamUse,
    Power,
    Product,
    Provenance,
    Span,
    UnitExpr,
    Unitless,
    Var,
    denormalize,
    normalize,
    units_equal,
)
from .syntax import format_unit, parse_unit, poly_names

__all__ = [
    'UNITLESS',
    'Atom',
    'BaseUnit',
    'Constraint',
    'ExplicitAbs',
    'ExplicitUse',
    'GeneratedUnit',
    'LitOrVar',
    'ParamAbs',
    'ParamUse',
    'Power',
    'Product',
    'Provenance',
    'Span',
    'UnitExpr',
    'Unitless',
    'Var',
    'denormalize',
    'normalize',
    'units_equal',
    'format_unit',
    'parse_unit',
    'poly_names',
]
