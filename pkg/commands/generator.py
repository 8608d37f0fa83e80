"""
Program Generator Module
Writes synthetic polymorphic corpora for measuring how inference scales
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass

from utils.config import Config
from utils.helpers import atomic_write_text

logger = logging.getLogger("Generator")

SINGLE = "single"
MULTIPLE = "mult"
FORMATS = (SINGLE, MULTIPLE)

TOP_MODULE = "top_mod"
SINGLE_MODULE = "generated"


@dataclass(frozen=True)
class GeneratorParams:
    n: int
    l: int  # noqa: E741
    a: int
    fmt: str = MULTIPLE

    def validate(self) -> GeneratorParams:
        if self.fmt not in FORMATS:
            raise ValueError(f"fmt must be one of {', '.join(FORMATS)}, got {self.fmt!r}")
        for name, value in (("n", self.n), ("l", self.l), ("a", self.a)):
            if value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value}")
        if self.l < self.a:
            raise ValueError(f"function length l={self.l} is shorter than the argument count a={self.a}")
        usual = (
            (self.n, Config.GENERATOR_FUNCTION_COUNTS, "n"),
            (self.l, Config.GENERATOR_FUNCTION_LENGTHS, "l"),
            (self.a, Config.GENERATOR_ARGUMENT_COUNTS, "a"),
        )
        for value, allowed, name in usual:
            if value not in allowed:
                logger.warning(f"[GENERATE] {name}={value} is outside the usual values {allowed}")
        return self


def function_name(j: int) -> str:
    return f"f{j}"


def module_name(j: int) -> str:
    return f"m{j}"


def function_lines(j: int, params: GeneratorParams, indent: str = "  ") -> list[str]:
    """`f<j>` with l locals; each local after the second is the product of the two before it."""
    name = function_name(j)
    args = ", ".join(f"v{i}" for i in range(1, params.a + 1))
    locals_ = ", ".join(f"v{i}" for i in range(1, params.l + 1))
    lines = [f"{indent}real function {name}({args})", f"{indent}  real :: {locals_}"]
    lines.extend(f"{indent}  v{i} = v{i - 2} * v{i - 1}" for i in range(3, params.l + 1))
    lines.append(f"{indent}  {name} = v{params.l}")
    lines.append(f"{indent}end function {name}")
    return lines


def top_lines(params: GeneratorParams, indent: str = "  ") -> list[str]:
    """Subroutine calling every function with its own parameters, all results assigned to `r`."""
    count = params.n * params.a
    names = [f"p{i}" for i in range(1, count + 1)]
    lines = [
        f"{indent}subroutine top({', '.join(names)})",
        f"{indent}  real :: {', '.join(names)}",
        f"{indent}  real :: r",
    ]
    for j in range(1, params.n + 1):
        args = ", ".join(names[(j - 1) * params.a : j * params.a])
        lines.append(f"{indent}  r = {function_name(j)}({args})")
    lines.append(f"{indent}end subroutine top")
    return lines


def _module(name: str, body: list[str], uses: tuple[str, ...] = ()) -> str:
    lines = [f"module {name}", *(f"  use {used}" for used in uses), "  implicit none", "contains", *body]
    lines.append(f"end module {name}")
    return "\n".join(lines) + "\n"


def render_corpus(params: GeneratorParams) -> dict[str, str]:
    """File name to source text for one corpus."""
    params.validate()
    functions = range(1, params.n + 1)
    if params.fmt == SINGLE:
        body = [line for j in functions for line in function_lines(j, params)]
        body.extend(top_lines(params))
        return {f"{SINGLE_MODULE}{Config.SOURCE_SUFFIX}": _module(SINGLE_MODULE, body)}

    files = {
        f"{module_name(j)}{Config.SOURCE_SUFFIX}": _module(module_name(j), function_lines(j, params))
        for j in functions
    }
    uses = tuple(module_name(j) for j in functions)
    files[f"top{Config.SOURCE_SUFFIX}"] = _module(TOP_MODULE, top_lines(params), uses)
    return files


def generate(params: GeneratorParams, out_dir: str) -> list[str]:
    """Write the corpus into `out_dir` and return the paths written, modules first."""
    files = render_corpus(params)
    written = []
    for name, text in files.items():
        path = os.path.join(out_dir, name)
        atomic_write_text(path, text)
        written.append(path)
    logger.info(f"[GENERATE] wrote {len(written)} file(s) to {out_dir} (n={params.n}, l={params.l}, a={params.a})")
    return written
