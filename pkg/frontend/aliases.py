"""
Unit alias resolution.
Aliases are collected file-wide and substituted into every unit specification.
"""

from __future__ import annotations

import logging
from dataclasses import replace

from frontend.ast import AnnotationLine, DoWhile, IfBlock, ProgramUnit, SourceFile, UnitAlias, UnitSpec, walk_units
from units.core import BaseUnit, UnitExpr, map_atoms
from utils.errors import AliasCycleError

logger = logging.getLogger("Aliases")


def collect_aliases(source: SourceFile) -> dict[str, UnitExpr]:
    aliases: dict[str, UnitExpr] = {}
    items = list(source.trailing)
    for unit in walk_units(source.units):
        items.extend(unit.leading)
        items.extend(unit.spec)
        items.extend(unit.trailing)
    for item in items:
        if isinstance(item, AnnotationLine) and isinstance(item.annotation, UnitAlias):
            if item.annotation.name in aliases:
                logger.warning(f"[ALIAS] '{item.annotation.name}' redefined at {item.span.file}:{item.span}")
            aliases[item.annotation.name] = item.annotation.unit
    return aliases


def expand_aliases(aliases: dict[str, UnitExpr]) -> dict[str, UnitExpr]:
    """Expand alias bodies to fixpoint; raises AliasCycleError on a cycle."""
    resolved: dict[str, UnitExpr] = {}
    visiting: list[str] = []

    def resolve(name: str) -> UnitExpr:
        if name in resolved:
            return resolved[name]
        if name in visiting:
            raise AliasCycleError(visiting[visiting.index(name):] + [name])
        visiting.append(name)

        def substitute(atom):
            if isinstance(atom, BaseUnit) and atom.name in aliases:
                return resolve(atom.name)
            return atom

        resolved[name] = map_atoms(aliases[name], substitute)
        visiting.pop()
        return resolved[name]

    for name in aliases:
        resolve(name)
    return resolved


def _rewrite_items(items: tuple, substitute) -> tuple:
    out = []
    for item in items:
        if isinstance(item, AnnotationLine) and isinstance(item.annotation, UnitSpec):
            spec = item.annotation
            item = replace(item, annotation=UnitSpec(map_atoms(spec.unit, substitute), spec.names))
        elif isinstance(item, IfBlock):
            item = replace(
                item,
                then_body=_rewrite_items(item.then_body, substitute),
                else_body=_rewrite_items(item.else_body, substitute),
            )
        elif isinstance(item, DoWhile):
            item = replace(item, body=_rewrite_items(item.body, substitute))
        out.append(item)
    return tuple(out)


def _rewrite_unit(unit: ProgramUnit, substitute) -> ProgramUnit:
    return replace(
        unit,
        leading=_rewrite_items(unit.leading, substitute),
        spec=_rewrite_items(unit.spec, substitute),
        body=_rewrite_items(unit.body, substitute),
        trailing=_rewrite_items(unit.trailing, substitute),
        contains=tuple(_rewrite_unit(inner, substitute) for inner in unit.contains),
    )


def resolve_aliases(source: SourceFile) -> SourceFile:
    aliases = collect_aliases(source)
    if not aliases:
        return source
    expanded = expand_aliases(aliases)
    logger.debug(f"[ALIAS] {source.path}: {', '.join(sorted(expanded))}")

    def substitute(atom):
        if isinstance(atom, BaseUnit) and atom.name in expanded:
            return expanded[atom.name]
        return atom

    return replace(source, units=tuple(_rewrite_unit(unit, substitute) for unit in source.units))
