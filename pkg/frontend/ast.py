"""
Syntax tree for the Fortran subset.
Every node carries the source Span it was parsed from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from units.core import Span, UnitExpr

# ============================================================================
# ANNOTATIONS
# ============================================================================


@dataclass(frozen=True)
class UnitSpec:
    unit: UnitExpr
    names: tuple[str, ...]


@dataclass(frozen=True)
class UnitAlias:
    name: str
    unit: UnitExpr


Annotation = Union[UnitSpec, UnitAlias]

# ============================================================================
# EXPRESSIONS
# ============================================================================


@dataclass(frozen=True)
class Literal:
    text: str
    span: Span

    @property
    def is_integer(self) -> bool:
        return self.text.split("_")[0].isdigit()

    @property
    def value(self) -> float:
        number = self.text.split("_")[0].lower().replace("d", "e")
        return float(number)

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0


@dataclass(frozen=True)
class Name:
    name: str
    span: Span


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: Expr
    span: Span


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: Expr
    right: Expr
    span: Span


@dataclass(frozen=True)
class FunctionCall:
    name: str
    args: tuple[Expr, ...]
    span: Span


@dataclass(frozen=True)
class Subscript:
    name: str
    indices: tuple[Expr, ...]
    span: Span


Expr = Union[Literal, Name, UnaryOp, BinaryOp, FunctionCall, Subscript]

ADDITIVE_OPS = ("+", "-")
MULTIPLICATIVE_OPS = ("*", "/")
RELATIONAL_OPS = ("==", "/=", "<", "<=", ">", ">=")

# ============================================================================
# STATEMENTS
# ============================================================================


@dataclass(frozen=True)
class CommentLine:
    text: str
    span: Span


@dataclass(frozen=True)
class AnnotationLine:
    """A `!=` comment; `annotation` is None when it is not a well-formed unit annotation."""

    text: str
    span: Span
    annotation: Annotation | None = None
    error: str | None = None


@dataclass(frozen=True)
class Assignment:
    target: Name | Subscript
    value: Expr
    span: Span


@dataclass(frozen=True)
class CallStatement:
    name: str
    args: tuple[Expr, ...]
    span: Span


@dataclass(frozen=True)
class IfBlock:
    """`if` with optional else branch; `else if` is a nested IfBlock as the only else statement."""

    condition: Expr
    then_body: tuple[Statement, ...]
    else_body: tuple[Statement, ...]
    span: Span
    is_else_if: bool = False


@dataclass(frozen=True)
class DoWhile:
    condition: Expr
    body: tuple[Statement, ...]
    span: Span


@dataclass(frozen=True)
class Return:
    span: Span


Statement = Union[CommentLine, AnnotationLine, Assignment, CallStatement, IfBlock, DoWhile, Return]

# ============================================================================
# DECLARATIONS
# ============================================================================


@dataclass(frozen=True)
class Entity:
    name: str
    span: Span
    dims: tuple[Expr, ...] = ()
    init: Expr | None = None


@dataclass(frozen=True)
class TypeDeclaration:
    type_name: str
    attributes: tuple[str, ...]
    entities: tuple[Entity, ...]
    span: Span


@dataclass(frozen=True)
class DimensionDeclaration:
    entities: tuple[Entity, ...]
    span: Span


@dataclass(frozen=True)
class ExternalDeclaration:
    entities: tuple[Entity, ...]
    span: Span


@dataclass(frozen=True)
class UseStatement:
    module: str
    span: Span


@dataclass(frozen=True)
class ImplicitNone:
    span: Span


SpecItem = Union[
    CommentLine, AnnotationLine, TypeDeclaration, DimensionDeclaration, ExternalDeclaration, UseStatement, ImplicitNone
]

# ============================================================================
# PROGRAM UNITS
# ============================================================================

PROGRAM = "program"
MODULE = "module"
FUNCTION = "function"
SUBROUTINE = "subroutine"


@dataclass(frozen=True)
class ProgramUnit:
    """A program, module, function or subroutine.

    `leading` holds the comment and annotation lines directly above the unit header;
    annotations there name the unit's result or parameters.
    """

    kind: str
    name: str
    span: Span
    params: tuple[Entity, ...] = ()
    result: str | None = None
    spec: tuple[SpecItem, ...] = ()
    body: tuple[Statement, ...] = ()
    contains: tuple[ProgramUnit, ...] = ()
    leading: tuple[CommentLine | AnnotationLine, ...] = ()
    trailing: tuple[CommentLine | AnnotationLine, ...] = ()

    @property
    def is_procedure(self) -> bool:
        return self.kind in (FUNCTION, SUBROUTINE)

    @property
    def result_name(self) -> str | None:
        if self.kind != FUNCTION:
            return None
        return self.result or self.name

    def uses(self) -> list[str]:
        return [item.module for item in self.spec if isinstance(item, UseStatement)]


@dataclass(frozen=True)
class SourceFile:
    path: str
    units: tuple[ProgramUnit, ...]
    trailing: tuple[CommentLine | AnnotationLine, ...] = ()
    diagnostics: tuple[str, ...] = field(default=())

    def modules(self) -> list[ProgramUnit]:
        return [unit for unit in self.units if unit.kind == MODULE]


# ============================================================================
# TRAVERSAL
# ============================================================================


def iter_annotation_lines(items) -> list[AnnotationLine]:
    return [item for item in items if isinstance(item, AnnotationLine)]


def walk_units(units):
    """Yield every program unit, depth first, including contained procedures."""
    for unit in units:
        yield unit
        yield from walk_units(unit.contains)


def expr_children(expr: Expr) -> tuple[Expr, ...]:
    if isinstance(expr, UnaryOp):
        return (expr.operand,)
    if isinstance(expr, BinaryOp):
        return (expr.left, expr.right)
    if isinstance(expr, FunctionCall):
        return expr.args
    if isinstance(expr, Subscript):
        return expr.indices
    return ()
