"""
Module Compiler
Reduces a solved module to its summary: module-variable units and one unit per procedure slot.
"""

from __future__ import annotations

import logging

from analysis.constraint_gen import ModuleEntry
from solver.solution import Solution
from summaries.fsmod import FunctionSignature, ModuleSummary
from units.core import ExplicitAbs, GeneratedUnit, ParamAbs, UnitMap, Var, denormalize
from units.syntax import poly_names
from utils.errors import SummaryError

logger = logging.getLogger("Summaries")


def name_generated(units: list[UnitMap], owner: str) -> list[UnitMap]:
    """Rewrite generated units as explicit polymorphic names, `'a` first in index order."""
    atoms = {atom for unit in units for atom in unit}
    taken = {atom.kind.alpha for atom in atoms if isinstance(atom, Var) and isinstance(atom.kind, ExplicitAbs)}
    generated = sorted((atom for atom in atoms if isinstance(atom, GeneratedUnit)), key=lambda g: g.index)
    names = dict(zip(generated, poly_names(len(generated), taken)))
    return [
        {(Var(ExplicitAbs(names[atom], owner)) if atom in names else atom): exp for atom, exp in unit.items()}
        for unit in units
    ]


def compile_module(entry: ModuleEntry, solution: Solution) -> ModuleSummary:
    """Summary of a module whose whole constraint system was solved as `solution`."""
    summary = ModuleSummary(entry.name)

    for name, variable in entry.variables.items():
        unit = solution.unit_of(variable.unit)
        if unit is None or any(isinstance(atom, GeneratedUnit) for atom in unit):
            logger.warning(f"[FSMOD] {entry.name}: unit of variable '{name}' is undetermined; left out of the summary")
            continue
        summary.variables[name] = denormalize(unit)

    for name, template in entry.templates.items():
        slots = list(range(template.first_slot, template.arity + 1))
        units = []
        for k in slots:
            unit = solution.unit_of(Var(ParamAbs(name, k)))
            if unit is None:
                raise SummaryError(
                    f"unit of slot {k} of '{name}' depends on undetermined variables; annotate them first", entry.file
                )
            units.append(unit)
        named = name_generated(units, name)
        summary.functions[name] = FunctionSignature(
            name, template.arity, {k: denormalize(u) for k, u in zip(slots, named)}, template.kind, template.variadic
        )

    raw = sum(len(t.constraints) for t in entry.templates.values()) + len(entry.constraints)
    logger.info(f"[FSMOD] {entry.name}: {raw} constraint(s) summarised as {summary.constraint_count()}")
    return summary
