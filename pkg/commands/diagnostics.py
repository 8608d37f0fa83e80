"""
Diagnostics Module
Renders inconsistencies and analysis errors with source positions
"""

from __future__ import annotations

from dataclasses import dataclass, field

from commands.session import UnitAnalysis
from units.core import Atom, Constraint, ExplicitUse, LitOrVar, ParamAbs, ParamUse, Span, Var
from units.syntax import atom_name, format_unit

ERROR = "error"
SUGGESTION = "suggestion"
INFO = "info"


@dataclass(order=True)
class Diagnostic:
    file: str
    line: int
    col: int
    severity: str = field(default=ERROR, compare=False)
    message: str = field(default="", compare=False)
    related: list[str] = field(default_factory=list, compare=False)

    def render(self) -> str:
        head = f"{self.file}:{self.line}:{self.col}: {self.severity}: {self.message}"
        return "\n".join([head, *(f"  {line}" for line in self.related)])


def describe_atom(atom: Atom) -> str:
    """Source-level name of a unit unknown."""
    if not isinstance(atom, Var):
        return atom_name(atom)
    kind = atom.kind
    if isinstance(kind, LitOrVar):
        return "literal" if kind.is_literal else kind.name
    if isinstance(kind, ParamAbs):
        if isinstance(kind.slot, str):
            return "literal" if kind.slot.startswith("#") else kind.slot
        return f"result({kind.fs})" if kind.slot == 0 else f"arg{kind.slot}({kind.fs})"
    if isinstance(kind, ParamUse):
        return f"{kind.fs}()" if kind.slot == 0 else f"arg{kind.slot}({kind.fs})"
    if isinstance(kind, ExplicitUse):
        return kind.alpha
    return atom_name(atom)


def _where(span: Span, home: str) -> str:
    if span.file == home:
        return f"{span.line}:{span.col}"
    return f"{span.file}:{span.line}:{span.col}"


def render_constraint(constraint: Constraint, home: str) -> str:
    lhs = format_unit(constraint.lhs, describe_atom)
    rhs = format_unit(constraint.rhs, describe_atom)
    where = _where(constraint.provenance.span, home)
    return f"{where} {constraint.provenance.reason}: {lhs} === {rhs}"


def inconsistency_lines(analysis: UnitAnalysis) -> list[str]:
    """`units mismatch: A vs B` per witness, then the contradictory constraints in source order."""
    inconsistency = analysis.result.inconsistency
    if inconsistency is None:
        return []
    lines = []
    for lhs, rhs in inconsistency.sides():
        if inconsistency.kind == "mismatch":
            lines.append(f"units mismatch: {format_unit(lhs)} vs {format_unit(rhs)}")
        else:
            lines.append(f"units need non-integer exponents: {format_unit(lhs)} vs {format_unit(rhs)}")
    core = sorted(inconsistency.core, key=lambda c: c.provenance.span)
    lines.extend(f"  {render_constraint(constraint, analysis.path)}" for constraint in core)
    return lines


def inconsistency_diagnostic(analysis: UnitAnalysis) -> Diagnostic:
    unit = analysis.unit
    lines = inconsistency_lines(analysis)
    return Diagnostic(
        analysis.path,
        unit.span.line,
        unit.span.col,
        ERROR,
        f"inconsistent units in {unit.kind} '{unit.name}'",
        lines,
    )


def render_all(diagnostics: list[Diagnostic]) -> str:
    return "\n".join(d.render() for d in sorted(diagnostics))
