"""
Summary Loader Module
Finds `.fsmod` files on the search path and turns them into module-map entries
"""

from __future__ import annotations

import logging
import os
from collections.abc import Iterable, Sequence

from analysis.constraint_gen import ModuleEntry, Template
from analysis.environment import REAL, EnvEntry
from frontend.ast import MODULE
from summaries.fsmod import ModuleSummary, read_summary
from units.core import Constraint, LitOrVar, ParamAbs, Provenance, Span, Var, bind_explicit
from utils.config import Config

logger = logging.getLogger("Summaries")


def explicit_owner(module: str, procedure: str) -> str:
    """Scope of a signature's polymorphic names, distinct from every source procedure."""
    return f"{module}.{procedure}"


def _span(path: str, line: int) -> Span:
    return Span(path, line, 1, line, 1)


def summary_templates(summary: ModuleSummary, path: str) -> dict[str, Template]:
    templates = {}
    for name, sig in summary.functions.items():
        owner = explicit_owner(summary.name, name)
        provenance = Provenance(_span(path, sig.line), "summary")
        body = tuple(
            Constraint(Var(ParamAbs(name, k)), bind_explicit(unit, owner), provenance)
            for k, unit in sorted(sig.slots.items())
        )
        templates[name] = Template(name, sig.kind, sig.arity, body, (), path, sig.variadic)
    return templates


def summary_entry(summary: ModuleSummary, path: str) -> ModuleEntry:
    entry = ModuleEntry(summary.name, MODULE, path, origin="summary")
    for name, unit in summary.variables.items():
        atom = Var(LitOrVar(f"{summary.name}/{name}"))
        entry.variables[name] = EnvEntry(name, REAL, atom, summary.name)
        span = _span(path, summary.variable_lines.get(name, 1))
        entry.constraints.append(Constraint(atom, unit, Provenance(span, "summary")))
    entry.templates = summary_templates(summary, path)
    return entry


class SummaryLoader:
    """Locates summaries: `--include` directories, then UNITCHECK_INCLUDE, then the source directory."""

    def __init__(self, include_dirs: Sequence[str] = ()):
        self.include_dirs = list(include_dirs)
        self._cache: dict[str, ModuleEntry] = {}
        self.parsed: list[str] = []

    def search_path(self, source_dir: str | None = None) -> list[str]:
        dirs = [*self.include_dirs, *Config.INCLUDE_PATH]
        if source_dir is not None:
            dirs.append(source_dir or ".")
        return dirs

    def find(self, module: str, source_dir: str | None = None, suffix: str = Config.FSMOD_SUFFIX) -> str | None:
        for directory in self.search_path(source_dir):
            candidate = os.path.join(directory, f"{module}{suffix}")
            if os.path.isfile(candidate):
                return candidate
        return None

    def load(self, path: str) -> ModuleEntry:
        key = os.path.abspath(path)
        if key not in self._cache:
            summary = read_summary(path)
            self._cache[key] = summary_entry(summary, path)
            self.parsed.append(path)
            logger.info(f"[FSMOD] {path}: parsed precompiled file.")
        return self._cache[key]


def load_summaries(
    modules: Iterable[str], search_paths: Sequence[str] = (), source_dir: str | None = None
) -> dict[str, ModuleEntry]:
    """Entries for each named module that has a summary on the search path; others are left out."""
    loader = SummaryLoader(search_paths)
    found = {}
    for module in modules:
        path = loader.find(module, source_dir)
        if path is not None:
            found[module] = loader.load(path)
    return found
