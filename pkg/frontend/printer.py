"""
Pretty printer for the syntax tree.
Output re-parses to the same tree; parentheses are emitted only where precedence needs them.
"""

from __future__ import annotations

from frontend.ast import (
    ADDITIVE_OPS,
    MULTIPLICATIVE_OPS,
    RELATIONAL_OPS,
    AnnotationLine,
    Assignment,
    BinaryOp,
    CallStatement,
    CommentLine,
    DimensionDeclaration,
    DoWhile,
    Entity,
    ExternalDeclaration,
    FunctionCall,
    IfBlock,
    ImplicitNone,
    Literal,
    Name,
    ProgramUnit,
    Return,
    SourceFile,
    Subscript,
    TypeDeclaration,
    UnaryOp,
    UseStatement,
)

INDENT = "  "

_RELATIONAL, _ADDITIVE, _MULTIPLICATIVE, _UNARY, _POWER, _ATOM = range(1, 7)


def _precedence(expr) -> int:
    if isinstance(expr, BinaryOp):
        if expr.op in RELATIONAL_OPS:
            return _RELATIONAL
        if expr.op in ADDITIVE_OPS:
            return _ADDITIVE
        if expr.op in MULTIPLICATIVE_OPS:
            return _MULTIPLICATIVE
        return _POWER
    if isinstance(expr, UnaryOp):
        return _UNARY
    return _ATOM


def _wrap(expr, parenthesize: bool) -> str:
    text = format_expr(expr)
    return f"({text})" if parenthesize else text


def format_expr(expr) -> str:
    if isinstance(expr, Literal):
        return expr.text
    if isinstance(expr, Name):
        return expr.name
    if isinstance(expr, (FunctionCall, Subscript)):
        args = expr.args if isinstance(expr, FunctionCall) else expr.indices
        return f"{expr.name}({', '.join(format_expr(arg) for arg in args)})"
    if isinstance(expr, UnaryOp):
        return expr.op + _wrap(expr.operand, _precedence(expr.operand) < _UNARY)
    prec = _precedence(expr)
    left, right = _precedence(expr.left), _precedence(expr.right)
    if prec == _POWER:
        return f"{_wrap(expr.left, left <= _POWER)}**{_wrap(expr.right, right < _POWER)}"
    if prec == _RELATIONAL:
        return f"{_wrap(expr.left, left <= prec)} {expr.op} {_wrap(expr.right, right <= prec)}"
    return f"{_wrap(expr.left, left < prec)} {expr.op} {_wrap(expr.right, right <= prec)}"


def _format_entity(entity: Entity) -> str:
    text = entity.name
    if entity.dims:
        text += f"({', '.join(format_expr(d) for d in entity.dims)})"
    if entity.init is not None:
        text += f" = {format_expr(entity.init)}"
    return text


def _format_spec_item(item) -> str:
    if isinstance(item, TypeDeclaration):
        head = ", ".join((item.type_name, *item.attributes))
        return f"{head} :: {', '.join(_format_entity(e) for e in item.entities)}"
    if isinstance(item, DimensionDeclaration):
        return f"dimension :: {', '.join(_format_entity(e) for e in item.entities)}"
    if isinstance(item, ExternalDeclaration):
        return f"external :: {', '.join(e.name for e in item.entities)}"
    if isinstance(item, UseStatement):
        return f"use {item.module}"
    if isinstance(item, ImplicitNone):
        return "implicit none"
    raise TypeError(f"not a specification item: {item!r}")


class Printer:
    def __init__(self):
        self.lines: list[str] = []

    def emit(self, depth: int, text: str):
        self.lines.append(f"{INDENT * depth}{text}")

    def items(self, items, depth: int):
        for item in items:
            if isinstance(item, (CommentLine, AnnotationLine)):
                self.emit(depth, item.text)
            elif isinstance(item, Assignment):
                self.emit(depth, f"{format_expr(item.target)} = {format_expr(item.value)}")
            elif isinstance(item, CallStatement):
                args = f"({', '.join(format_expr(a) for a in item.args)})" if item.args else ""
                self.emit(depth, f"call {item.name}{args}")
            elif isinstance(item, IfBlock):
                self.if_block(item, depth, "if")
            elif isinstance(item, DoWhile):
                self.emit(depth, f"do while ({format_expr(item.condition)})")
                self.items(item.body, depth + 1)
                self.emit(depth, "end do")
            elif isinstance(item, Return):
                self.emit(depth, "return")
            else:
                self.emit(depth, _format_spec_item(item))

    def if_block(self, block: IfBlock, depth: int, keyword: str):
        self.emit(depth, f"{keyword} ({format_expr(block.condition)}) then")
        self.items(block.then_body, depth + 1)
        nested = block.else_body
        if len(nested) == 1 and isinstance(nested[0], IfBlock) and nested[0].is_else_if:
            self.if_block(nested[0], depth, "else if")
            return
        if nested:
            self.emit(depth, "else")
            self.items(nested, depth + 1)
        self.emit(depth, "end if")

    def unit(self, unit: ProgramUnit, depth: int):
        self.items(unit.leading, depth)
        header = f"{unit.kind} {unit.name}"
        if unit.is_procedure and (unit.params or unit.kind == "function"):
            header += f"({', '.join(p.name for p in unit.params)})"
        if unit.result:
            header += f" result({unit.result})"
        self.emit(depth, header)
        self.items(unit.spec, depth + 1)
        self.items(unit.body, depth + 1)
        if unit.contains or unit.trailing:
            self.emit(depth, "contains")
            for inner in unit.contains:
                self.unit(inner, depth + 1)
            self.items(unit.trailing, depth + 1)
        self.emit(depth, f"end {unit.kind} {unit.name}")


def print_source(source: SourceFile) -> str:
    printer = Printer()
    for unit in source.units:
        printer.unit(unit, 0)
    printer.items(source.trailing, 0)
    return "\n".join(printer.lines) + "\n" if printer.lines else ""
