"""
Annotation grammar for `!= unit` comments:

    != unit <u> :: name, name, ...      (specification)
    != unit :: name = <u>               (alias)
"""

from __future__ import annotations

from pyparsing import (
    CaselessKeyword,
    DelimitedList,
    Group,
    ParseBaseException,
    ParserElement,
    Suppress,
)

from frontend.ast import Annotation, UnitAlias, UnitSpec
from units.core import is_monomorphic
from units.syntax import IDENTIFIER, UNIT_EXPR
from utils.errors import AnnotationError

MARKER = "!="


def build_annotation_grammar() -> ParserElement:
    variable = IDENTIFIER.copy().set_parse_action(lambda t: t[0].lower())
    # tokens are read positionally: a results name on UNIT_EXPR holds a ParseResults, not the unit
    alias = (Suppress("::") + IDENTIFIER + Suppress("=") + UNIT_EXPR).set_parse_action(
        lambda t: UnitAlias(t[0], t[1])
    )
    spec = (UNIT_EXPR + Suppress("::") + Group(DelimitedList(variable))).set_parse_action(
        lambda t: UnitSpec(t[0], tuple(t[1]))
    )
    return Suppress(MARKER) + Suppress(CaselessKeyword("unit")) + (alias | spec)


ANNOTATION = build_annotation_grammar()


def is_unit_annotation(comment: str) -> bool:
    """True for `!=` comments whose first word is `unit`; other `!=` comments stay plain comments."""
    body = comment[len(MARKER):].lstrip() if comment.startswith(MARKER) else ""
    return body[:4].lower() == "unit" and (len(body) == 4 or not (body[4].isalnum() or body[4] == "_"))


def parse_annotation(comment: str) -> Annotation:
    if not comment.startswith(MARKER):
        raise AnnotationError(f"annotation must start with {MARKER!r}: {comment.strip()!r}")
    try:
        annotation = ANNOTATION.parse_string(comment, parse_all=True)[0]
    except ParseBaseException as e:
        raise AnnotationError(f"malformed unit annotation {comment.strip()!r}: {e.msg} at column {e.col}") from e
    if isinstance(annotation, UnitAlias) and not is_monomorphic(annotation.unit):
        raise AnnotationError(f"alias '{annotation.name}' must not mention polymorphic units")
    return annotation
