"""
Intrinsics Module
Built-in procedure signatures, kept as summary text and loaded like any other summary
"""

from __future__ import annotations

from functools import lru_cache

from summaries.fsmod import FunctionSignature, parse_summary
from summaries.loader import summary_templates

INTRINSIC_MODULE = "intrinsic"

INTRINSICS_FSMOD = """\
fsmod 1
# 'a -> 'a
fun abs 1
slot 0 'a
slot 1 'a
fun real 1
slot 0 'a
slot 1 'a
fun dble 1
slot 0 'a
slot 1 'a
fun int 1
slot 0 'a
slot 1 'a
fun nint 1
slot 0 'a
slot 1 'a
fun floor 1
slot 0 'a
slot 1 'a
fun ceiling 1
slot 0 'a
slot 1 'a
# the square root halves every exponent of its argument
fun sqrt 1
slot 0 'a
slot 1 ('a)**2
# every argument shares the unit of the first
fun min 2 variadic
slot 0 'a
slot 1 'a
slot 2 'a
fun max 2 variadic
slot 0 'a
slot 1 'a
slot 2 'a
fun mod 2
slot 0 'a
slot 1 'a
slot 2 'a
fun dim 2
slot 0 'a
slot 1 'a
slot 2 'a
fun sign 2
slot 0 'a
slot 1 'a
slot 2 'b
# transcendental functions take and return unitless values
fun sin 1
slot 0 1
slot 1 1
fun cos 1
slot 0 1
slot 1 1
fun tan 1
slot 0 1
slot 1 1
fun asin 1
slot 0 1
slot 1 1
fun acos 1
slot 0 1
slot 1 1
fun atan 1
slot 0 1
slot 1 1
fun atan2 2
slot 0 1
slot 1 'a
slot 2 'a
fun sinh 1
slot 0 1
slot 1 1
fun cosh 1
slot 0 1
slot 1 1
fun tanh 1
slot 0 1
slot 1 1
fun exp 1
slot 0 1
slot 1 1
fun log 1
slot 0 1
slot 1 1
fun log10 1
slot 0 1
slot 1 1
# unit cast: the result takes the unit of the second argument
fun transfer 2
slot 0 'b
slot 1 'a
slot 2 'b
"""


@lru_cache(maxsize=1)
def intrinsic_summary():
    return parse_summary(INTRINSICS_FSMOD, f"<{INTRINSIC_MODULE}>", INTRINSIC_MODULE)


def intrinsic_signature(name: str) -> FunctionSignature | None:
    return intrinsic_summary().functions.get(name.lower())


@lru_cache(maxsize=1)
def intrinsic_templates():
    """Templates for every intrinsic, consulted only for names absent from the environment."""
    return summary_templates(intrinsic_summary(), f"<{INTRINSIC_MODULE}>")
