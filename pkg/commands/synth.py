"""
Synthesis Module
Rewrites a source file with `!= unit` comments for every inferred, unannotated declaration
"""

from __future__ import annotations

import logging
from collections import defaultdict

from commands.reports import InferredUnit, inferred_units
from commands.session import UnitAnalysis
from frontend.annotations import MARKER
from utils.helpers import leading_whitespace

logger = logging.getLogger("Synth")


def pending_annotations(analyses: list[UnitAnalysis]) -> dict[int, list[str]]:
    """Annotation lines to insert, keyed by the 1-based line they go above."""
    grouped: dict[int, dict[str, list[InferredUnit]]] = defaultdict(dict)
    for analysis in analyses:
        for item in inferred_units(analysis):
            decl = item.declaration
            if decl.annotated:
                continue
            grouped[decl.statement_line].setdefault(item.text, []).append(item)

    out: dict[int, list[str]] = {}
    for line, by_unit in grouped.items():
        ordered = sorted(by_unit.items(), key=lambda kv: min(i.position for i in kv[1]))
        out[line] = [
            f"{MARKER} unit {text} :: {', '.join(i.declaration.name for i in sorted(items, key=lambda i: i.position))}"
            for text, items in ordered
        ]
    return out


def _line_ending(line: str) -> str:
    if line.endswith("\r\n"):
        return "\r\n"
    return "\n"


def synthesise(text: str, analyses: list[UnitAnalysis]) -> str:
    """`text` with annotations inserted, every other byte kept."""
    pending = pending_annotations(analyses)
    if not pending:
        return text
    lines = text.splitlines(keepends=True)
    out = []
    for number, line in enumerate(lines, start=1):
        indent = leading_whitespace(line)
        ending = _line_ending(line)
        out.extend(f"{indent}{annotation}{ending}" for annotation in pending.get(number, ()))
        out.append(line)
    added = sum(len(v) for v in pending.values())
    logger.info(f"[SYNTH] inserted {added} annotation line(s)")
    return "".join(out)


def synthesise_file(path: str, analyses: list[UnitAnalysis]) -> str:
    with open(path, encoding="utf-8", newline="") as f:
        text = f.read()
    return synthesise(text, analyses)
