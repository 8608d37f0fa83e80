"""
Reports Module
Turns solved units into the infer and suggest listings
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass

from analysis.constraint_gen import Declaration
from commands.session import UnitAnalysis
from units.core import Atom, ExplicitAbs, GeneratedUnit, LitOrVar, UnitMap, Var
from units.syntax import format_unit, poly_names

logger = logging.getLogger("Reports")


@dataclass(frozen=True)
class InferredUnit:
    declaration: Declaration
    unit: UnitMap
    text: str

    @property
    def position(self) -> tuple[int, int]:
        return self.declaration.span.line, self.declaration.span.col

    def render(self) -> str:
        line, col = self.position
        return f"{line}:{col} unit {self.text} :: {self.declaration.name}"


def _is_monomorphic_atom(atom: Atom) -> bool:
    return isinstance(atom, Var) and isinstance(atom.kind, LitOrVar)


def _generated_names(units: list[UnitMap]) -> dict[Atom, str]:
    atoms = {atom for unit in units for atom in unit}
    taken = {atom.kind.alpha for atom in atoms if isinstance(atom, Var) and isinstance(atom.kind, ExplicitAbs)}
    generated = sorted((atom for atom in atoms if isinstance(atom, GeneratedUnit)), key=lambda g: g.index)
    return dict(zip(generated, poly_names(len(generated), taken)))


def inferred_units(analysis: UnitAnalysis) -> list[InferredUnit]:
    """Solved declarations of one unit; polymorphic units are named per procedure."""
    solution = analysis.result.solution
    if solution is None:
        return []
    groups: dict[str | None, list[tuple[Declaration, UnitMap]]] = defaultdict(list)
    for decl in analysis.entry.declarations:
        unit = solution.unit_of(decl.atom)
        if unit is None:
            logger.debug(f"[INFER] {decl.name} in {decl.scope} is undetermined")
            continue
        if _is_monomorphic_atom(decl.atom) and any(isinstance(atom, GeneratedUnit) for atom in unit):
            logger.debug(f"[INFER] {decl.name} in {decl.scope} depends on a polymorphic unit")
            continue
        groups[decl.function].append((decl, unit))

    out = []
    for members in groups.values():
        names = _generated_names([unit for _, unit in members])
        for decl, unit in members:
            out.append(InferredUnit(decl, unit, format_unit(unit, names)))
    return sorted(out, key=lambda item: item.position)


def critical_declarations(analysis: UnitAnalysis) -> list[Declaration]:
    solution = analysis.result.solution
    if solution is None:
        return []
    found = [decl for decl in analysis.entry.declarations if decl.atom in solution.critical and not decl.annotated]
    return sorted(found, key=lambda d: (d.span.line, d.span.col))


def group_by_file(analyses: list[UnitAnalysis]) -> dict[str, list[UnitAnalysis]]:
    grouped: dict[str, list[UnitAnalysis]] = {}
    for analysis in analyses:
        grouped.setdefault(analysis.path, []).append(analysis)
    return grouped


def infer_report(path: str, analyses: list[UnitAnalysis]) -> list[str]:
    items = sorted((item for a in analyses for item in inferred_units(a)), key=lambda item: item.position)
    return [f"{path}:", *(f"  {item.render()}" for item in items)]


def suggest_report(path: str, analyses: list[UnitAnalysis]) -> list[str]:
    found = sorted(
        (decl for a in analyses for decl in critical_declarations(a)), key=lambda d: (d.span.line, d.span.col)
    )
    lines = [f"{path}: {len(found)} variable declarations suggested to be given a specification:"]
    lines.extend(f"    ({decl.span.line}:{decl.span.col})    {decl.name}" for decl in found)
    return lines
