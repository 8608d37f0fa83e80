"""
Unit surface syntax: `u ::= name | 'name | 1 | u u | u / u | u ** z`
Parsed with pyparsing, printed from the normal form.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping

from pyparsing import (
    Forward,
    Literal,
    OneOrMore,
    Optional,
    ParseBaseException,
    ParserElement,
    Regex,
    Suppress,
    ZeroOrMore,
)

from units.core import (
    UNITLESS,
    Atom,
    BaseUnit,
    ExplicitAbs,
    ExplicitUse,
    GeneratedUnit,
    LitOrVar,
    ParamAbs,
    ParamUse,
    Power,
    Product,
    UnitExpr,
    Var,
    normalize,
)
from utils.errors import UnitSyntaxError

# ============================================================================
# GRAMMAR
# ============================================================================

IDENTIFIER = Regex(r"[A-Za-z_][A-Za-z0-9_]*")
POLY_NAME = Regex(r"'[A-Za-z_][A-Za-z0-9_]*")


def _fold_product(tokens):
    result = tokens[0]
    for factor in tokens[1:]:
        result = Product(result, factor)
    return result


def _fold_quotient(tokens):
    result = tokens[0]
    for index in range(1, len(tokens), 2):
        result = Product(result, Power(tokens[index + 1], -1))
    return result


def _power(tokens):
    if len(tokens) == 2:
        return Power(tokens[0], tokens[1])
    return tokens[0]


def build_unit_grammar() -> ParserElement:
    unit_expr = Forward()
    integer = Regex(r"[+-]?\d+").set_parse_action(lambda t: int(t[0]))
    exponent = integer | (Suppress("(") + integer + Suppress(")"))
    atom = (
        POLY_NAME.copy().set_parse_action(lambda t: Var(ExplicitAbs(t[0])))
        | IDENTIFIER.copy().set_parse_action(lambda t: BaseUnit(t[0]))
        | Literal("1").set_parse_action(lambda t: UNITLESS)
        | (Suppress("(") + unit_expr + Suppress(")"))
    )
    power = (atom + Optional(Suppress("**") + exponent)).set_parse_action(_power)
    term = OneOrMore(power).set_parse_action(_fold_product)
    unit_expr <<= (term + ZeroOrMore(Literal("/") + term)).set_parse_action(_fold_quotient)
    return unit_expr


UNIT_EXPR = build_unit_grammar()


def parse_unit(text: str) -> UnitExpr:
    try:
        return UNIT_EXPR.parse_string(text, parse_all=True)[0]
    except ParseBaseException as e:
        raise UnitSyntaxError(f"malformed unit expression {text.strip()!r}: {e.msg} at column {e.col}") from e


# ============================================================================
# PRINTER
# ============================================================================


def atom_name(atom: Atom) -> str:
    """Default display name; unknowns print in a debugging notation."""
    if isinstance(atom, BaseUnit):
        return atom.name
    if isinstance(atom, GeneratedUnit):
        return f"'_{atom.index}"
    kind = atom.kind
    if isinstance(kind, (ExplicitAbs, ExplicitUse)):
        return kind.alpha
    if isinstance(kind, LitOrVar):
        return "literal" if kind.is_literal else kind.name
    if isinstance(kind, ParamAbs):
        if isinstance(kind.slot, int):
            return f"{kind.fs}#{kind.slot}"
        return "literal" if kind.slot.startswith("#") else kind.slot
    if isinstance(kind, ParamUse):
        return f"{kind.fs}#{kind.slot}@{kind.call_id}"
    return repr(atom)


def _is_poly_name(name: str) -> bool:
    return name.startswith("'")


def _factor(name: str, exponent: int) -> str:
    if exponent == 1:
        return name
    base = f"({name})" if _is_poly_name(name) else name
    return f"{base}**{exponent}"


def format_unit(
    unit: UnitExpr | Mapping[Atom, int],
    names: Mapping[Atom, str] | Callable[[Atom], str] | None = None,
) -> str:
    """Print a unit in surface syntax, e.g. `metre / (sec**2)` or `('a)**2`."""
    mapping = unit if isinstance(unit, Mapping) else normalize(unit)
    if names is None:
        namer = atom_name
    elif callable(names):
        namer = names
    else:
        lookup = names

        def namer(atom: Atom) -> str:
            return lookup.get(atom) or atom_name(atom)

    numerator = [_factor(namer(atom), exp) for atom, exp in mapping.items() if exp > 0]
    denominator = [(namer(atom), -exp) for atom, exp in mapping.items() if exp < 0]
    top = " ".join(numerator) if numerator else "1"
    if not denominator:
        return top
    if len(denominator) == 1 and denominator[0][1] == 1:
        return f"{top} / {denominator[0][0]}"
    bottom = " ".join(_factor(name, exp) for name, exp in denominator)
    return f"{top} / ({bottom})"


def poly_names(count: int, taken: set[str] | frozenset[str] = frozenset()) -> list[str]:
    """`count` fresh polymorphic names `'a`, `'b`, ... `'z`, `'a1`, ... avoiding `taken`."""
    names: list[str] = []
    round_ = 0
    while len(names) < count:
        suffix = str(round_) if round_ else ""
        for letter in "abcdefghijklmnopqrstuvwxyz":
            name = f"'{letter}{suffix}"
            if name not in taken:
                names.append(name)
                if len(names) == count:
                    break
        round_ += 1
    return names
