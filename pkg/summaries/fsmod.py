"""
Summary file format (`.fsmod`), one record per line:

    fsmod 1
    var <name> <unit>
    fun <name> <arity> [subroutine] [variadic]
    slot <k> <unit>

Slot 0 is a function's result and slots 1..arity its parameters. Units use the annotation
unit syntax; `'a`-style names are polymorphic and scoped to their `fun` record. Blank lines
and lines starting with `#` are ignored.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field

from pyparsing import (
    Group,
    Keyword,
    ParseBaseException,
    ParserElement,
    Word,
    ZeroOrMore,
    nums,
    one_of,
    rest_of_line,
)

from frontend.ast import FUNCTION, SUBROUTINE
from units.core import UnitExpr
from units.syntax import IDENTIFIER, format_unit, parse_unit
from utils.config import Config
from utils.errors import SummaryError, SummaryVersionError, UnitSyntaxError
from utils.helpers import atomic_write_text

logger = logging.getLogger("Summaries")


@dataclass
class FunctionSignature:
    name: str
    arity: int
    slots: dict[int, UnitExpr] = field(default_factory=dict)
    kind: str = FUNCTION
    variadic: bool = False
    line: int = 0


@dataclass
class ModuleSummary:
    name: str
    variables: dict[str, UnitExpr] = field(default_factory=dict)
    functions: dict[str, FunctionSignature] = field(default_factory=dict)
    version: int = Config.FSMOD_VERSION
    variable_lines: dict[str, int] = field(default_factory=dict)

    def constraint_count(self) -> int:
        return len(self.variables) + sum(len(sig.slots) for sig in self.functions.values())


# ============================================================================
# GRAMMAR
# ============================================================================


def build_fsmod_grammar() -> ParserElement:
    integer = Word(nums).set_parse_action(lambda t: int(t[0]))
    header = Keyword("fsmod")("record") + integer("version")
    var = Keyword("var")("record") + IDENTIFIER("name") + rest_of_line("unit")
    fun = (
        Keyword("fun")("record")
        + IDENTIFIER("name")
        + integer("arity")
        + Group(ZeroOrMore(one_of("subroutine variadic", as_keyword=True)))("flags")
    )
    slot = Keyword("slot")("record") + integer("slot") + rest_of_line("unit")
    return header | var | fun | slot


FSMOD_LINE = build_fsmod_grammar()


# ============================================================================
# PRINT / PARSE
# ============================================================================


def format_summary(summary: ModuleSummary) -> str:
    """Deterministic text: variables and functions sorted by name, slots by index."""
    lines = [f"fsmod {summary.version}"]
    for name in sorted(summary.variables):
        lines.append(f"var {name} {format_unit(summary.variables[name])}")
    for name in sorted(summary.functions):
        sig = summary.functions[name]
        flags = (" subroutine" if sig.kind == SUBROUTINE else "") + (" variadic" if sig.variadic else "")
        lines.append(f"fun {name} {sig.arity}{flags}")
        for k in sorted(sig.slots):
            lines.append(f"slot {k} {format_unit(sig.slots[k])}")
    return "\n".join(lines) + "\n"


def parse_summary(text: str, path: str = "<fsmod>", name: str | None = None) -> ModuleSummary:
    if name is None:
        name = os.path.splitext(os.path.basename(path))[0]
    summary = ModuleSummary(name)
    current: FunctionSignature | None = None
    seen_header = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            parsed = FSMOD_LINE.parse_string(line, parse_all=True)
        except ParseBaseException as e:
            raise SummaryError(f"line {lineno}: malformed record {line!r}: {e.msg}", path) from e
        record = parsed["record"]

        if not seen_header:
            if record != "fsmod":
                raise SummaryError(f"line {lineno}: missing 'fsmod <version>' header", path)
            if parsed["version"] != Config.FSMOD_VERSION:
                raise SummaryVersionError(path, parsed["version"], Config.FSMOD_VERSION)
            seen_header = True
            continue

        if record == "fsmod":
            raise SummaryError(f"line {lineno}: duplicate header", path)
        if record == "var":
            var_name = parsed["name"].lower()
            if var_name in summary.variables:
                raise SummaryError(f"line {lineno}: duplicate variable '{var_name}'", path)
            summary.variables[var_name] = _unit(parsed["unit"], path, lineno)
            summary.variable_lines[var_name] = lineno
        elif record == "fun":
            fun_name = parsed["name"].lower()
            if fun_name in summary.functions:
                raise SummaryError(f"line {lineno}: duplicate function '{fun_name}'", path)
            flags = set(parsed["flags"])
            kind = SUBROUTINE if "subroutine" in flags else FUNCTION
            current = FunctionSignature(fun_name, parsed["arity"], {}, kind, "variadic" in flags, lineno)
            summary.functions[fun_name] = current
        else:
            if current is None:
                raise SummaryError(f"line {lineno}: 'slot' before any 'fun' record", path)
            k = parsed["slot"]
            lowest = 1 if current.kind == SUBROUTINE else 0
            if not lowest <= k <= current.arity:
                raise SummaryError(f"line {lineno}: slot {k} out of range for '{current.name}'", path)
            if k in current.slots:
                raise SummaryError(f"line {lineno}: duplicate slot {k} for '{current.name}'", path)
            current.slots[k] = _unit(parsed["unit"], path, lineno)

    if not seen_header:
        raise SummaryError("empty summary file", path)
    return summary


def _unit(text: str, path: str, lineno: int) -> UnitExpr:
    try:
        return parse_unit(text.strip())
    except UnitSyntaxError as e:
        raise SummaryError(f"line {lineno}: {e}", path) from e


def read_summary(path: str) -> ModuleSummary:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SummaryError(f"cannot read summary: {e.strerror}", path) from e
    return parse_summary(text, path)


def write_summary(summary: ModuleSummary, directory: str) -> str:
    path = os.path.join(directory, f"{summary.name}{Config.FSMOD_SUFFIX}")
    try:
        atomic_write_text(path, format_summary(summary))
    except OSError as e:
        raise SummaryError(f"cannot write summary: {e.strerror}", path) from e
    logger.info(f"[FSMOD] wrote {path}: {len(summary.functions)} function(s), {len(summary.variables)} variable(s)")
    return path
