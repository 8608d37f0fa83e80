"""
Analysis Session
Parses the input files, resolves `use` dependencies (input files, summaries, sources on the
search path) and solves one constraint system per top-level program unit.
"""

from __future__ import annotations

import logging
import os
from collections.abc import Sequence
from dataclasses import dataclass

from analysis.constraint_gen import ConstraintGenerator, IdSource, ModuleEntry, Template
from analysis.instantiate import Expander, expand_instances, expand_template
from frontend import parse_file, resolve_aliases
from frontend.ast import MODULE, ProgramUnit, SourceFile
from solver.solution import SolveResult, solve
from summaries.intrinsics import intrinsic_templates
from summaries.loader import SummaryLoader
from units.core import Constraint
from utils.config import Config
from utils.errors import AnalysisError

logger = logging.getLogger("Session")


@dataclass
class UnitAnalysis:
    """One solved top-level program unit."""

    source: SourceFile
    unit: ProgramUnit
    entry: ModuleEntry
    constraints: list[Constraint]
    result: SolveResult

    @property
    def path(self) -> str:
        return self.source.path

    @property
    def ok(self) -> bool:
        return self.result.ok


class Session:
    def __init__(self, paths: Sequence[str], include_dirs: Sequence[str] = ()):
        self.paths = list(paths)
        self.loader = SummaryLoader(include_dirs)
        self.ids = IdSource()
        self.modules: dict[str, ModuleEntry] = {}
        self.intrinsics: dict[str, Template] = dict(intrinsic_templates())
        self.generator = ConstraintGenerator(self.ids, self.modules, self.intrinsics)
        self.sources: list[SourceFile] = []
        self.notes: list[str] = []
        self._inputs: dict[str, tuple[SourceFile, ProgramUnit]] = {}

    # ========================================================================
    # LOADING
    # ========================================================================

    def parse(self) -> list[SourceFile]:
        for path in self.paths:
            source = resolve_aliases(parse_file(path))
            self.sources.append(source)
            for unit in source.modules():
                if unit.name in self._inputs:
                    raise AnalysisError(f"module '{unit.name}' is defined in more than one input file", unit.span)
                self._inputs[unit.name] = (source, unit)
        logger.info(f"[SESSION] parsed {len(self.sources)} file(s)")
        return self.sources

    def ordered_units(self) -> list[tuple[SourceFile, ProgramUnit]]:
        """Input program units with every used input module placed before its users."""
        order: list[tuple[SourceFile, ProgramUnit]] = []
        done: set[int] = set()
        visiting: list[str] = []

        def visit(source: SourceFile, unit: ProgramUnit):
            if id(unit) in done:
                return
            if unit.name in visiting:
                cycle = " -> ".join([*visiting[visiting.index(unit.name) :], unit.name])
                raise AnalysisError(f"cyclic module dependency: {cycle}", unit.span)
            visiting.append(unit.name)
            for used in unit.uses():
                if used in self._inputs:
                    visit(*self._inputs[used])
            visiting.pop()
            done.add(id(unit))
            order.append((source, unit))

        for source in self.sources:
            for unit in source.units:
                visit(source, unit)
        return order

    def require(self, module: str, source_dir: str, span=None) -> None:
        """Make `module` available: a summary first, otherwise a source file on the search path."""
        if module in self.modules or module in self._inputs:
            return
        path = self.loader.find(module, source_dir)
        if path is not None:
            self.modules[module] = self.loader.load(path)
            self.notes.append(f"{os.path.basename(path)}: parsed precompiled file.")
            return
        path = self.loader.find(module, source_dir, suffix=Config.SOURCE_SUFFIX)
        if path is None:
            raise AnalysisError(f"module '{module}' not found (no source or summary on the search path)", span)
        logger.info(f"[SESSION] no summary for '{module}', analysing {path}")
        source = resolve_aliases(parse_file(path))
        for unit in source.modules():
            for used in unit.uses():
                self.require(used, os.path.dirname(path), unit.span)
            self.modules[unit.name] = self.generator.gen_program_unit(unit, path)
        if module not in self.modules:
            raise AnalysisError(f"{path} does not define module '{module}'", span)

    # ========================================================================
    # SOLVING
    # ========================================================================

    def used_modules(self, entry: ModuleEntry) -> list[ModuleEntry]:
        out: list[ModuleEntry] = []
        seen: set[str] = set()

        def visit(name: str):
            if name in seen:
                return
            seen.add(name)
            used = self.modules[name]
            for inner in used.uses:
                visit(inner)
            out.append(used)

        for name in entry.uses:
            visit(name)
        return out

    def system(self, entry: ModuleEntry) -> list[Constraint]:
        """Constraints of a unit, its local templates and the call instances they reach."""
        used = self.used_modules(entry)
        templates: dict[str, Template] = dict(self.intrinsics)
        for module in used:
            templates.update(module.templates)
        templates.update(entry.templates)

        expander = Expander(templates, self.ids)
        base = list(entry.constraints)
        for module in used:
            base.extend(module.constraints)
        constraints = list(base)
        for name in entry.templates:
            constraints.extend(expand_template(templates, name, self.ids, expander))
        constraints.extend(expand_instances(base, templates, self.ids, expander))
        logger.info(f"[SESSION] {entry.name}: {len(constraints)} constraint(s), {expander.expansions} expansion(s)")
        return constraints

    def analyse_unit(self, source: SourceFile, unit: ProgramUnit) -> UnitAnalysis:
        source_dir = os.path.dirname(source.path)
        for used in unit.uses():
            self.require(used, source_dir, unit.span)
        entry = self.generator.gen_program_unit(unit, source.path)
        if unit.kind == MODULE:
            self.modules[unit.name] = entry
        constraints = self.system(entry)
        result = solve(constraints, [decl.atom for decl in entry.declarations])
        return UnitAnalysis(source, unit, entry, constraints, result)

    def run(self) -> list[UnitAnalysis]:
        if not self.sources:
            self.parse()
        analyses = [self.analyse_unit(source, unit) for source, unit in self.ordered_units()]
        inconsistent = sum(1 for analysis in analyses if not analysis.ok)
        logger.info(f"[SESSION] {len(analyses)} unit(s) solved, {inconsistent} inconsistent")
        return analyses


def analyse(paths: Sequence[str], include_dirs: Sequence[str] = ()) -> tuple[Session, list[UnitAnalysis]]:
    session = Session(paths, include_dirs)
    return session, session.run()
