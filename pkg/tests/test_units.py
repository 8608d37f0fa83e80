import pytest

from units.core import (
    UNITLESS,
    BaseUnit,
    ExplicitAbs,
    GeneratedUnit,
    LitOrVar,
    Power,
    Product,
    Var,
    bind_explicit,
    combine,
    denormalize,
    is_monomorphic,
    normalize,
    units_equal,
)
from units.syntax import format_unit, parse_unit, poly_names
from utils.errors import UnitSyntaxError

METRE = BaseUnit("metre")
SEC = BaseUnit("sec")


def test_normalize_cancels_and_orders():
    unit = Product(Product(SEC, METRE), Power(SEC, -1))
    assert normalize(unit) == {METRE: 1}
    assert normalize(Product(Power(METRE, 0), UNITLESS)) == {}


def test_normalize_sorts_base_units_before_variables():
    x = Var(LitOrVar("p/x"))
    alpha = Var(ExplicitAbs("'a", "f"))
    g = GeneratedUnit(3)
    mapping = normalize(Product(Product(x, g), Product(alpha, SEC)))
    assert list(mapping) == [SEC, alpha, g, x]


def test_units_equal_is_abelian():
    assert units_equal(Product(METRE, SEC), Product(SEC, METRE))
    assert units_equal(Power(Product(METRE, SEC), 2), Product(Power(METRE, 2), Power(SEC, 2)))
    assert not units_equal(METRE, SEC)


def test_combine_and_denormalize():
    speed = {METRE: 1, SEC: -1}
    assert combine((speed, 2), ({SEC: 1}, 2)) == {METRE: 2}
    assert normalize(denormalize(speed)) == speed
    assert denormalize({}) == UNITLESS


def test_parse_unit_grammar():
    assert normalize(parse_unit("metre / sec**2")) == {METRE: 1, SEC: -2}
    assert normalize(parse_unit("kg metre**2 / (sec**2)")) == {BaseUnit("kg"): 1, METRE: 2, SEC: -2}
    assert normalize(parse_unit("1")) == {}
    assert normalize(parse_unit("sec**(-1)")) == {SEC: -1}
    assert normalize(parse_unit("('a)**2")) == {Var(ExplicitAbs("'a")): 2}


@pytest.mark.parametrize("text", ["metre /", "**2", "metre ** x", "'"])
def test_parse_unit_rejects_malformed(text):
    with pytest.raises(UnitSyntaxError):
        parse_unit(text)


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("metre", "metre"),
        ("metre / sec", "metre / sec"),
        ("metre / sec**2", "metre / (sec**2)"),
        ("1 / sec", "1 / sec"),
        ("1", "1"),
        ("('a)**2", "('a)**2"),
        ("'a", "'a"),
    ],
)
def test_format_unit_surface_syntax(text, expected):
    assert format_unit(parse_unit(text)) == expected


def test_format_unit_with_name_mapping():
    g = GeneratedUnit(7)
    assert format_unit({g: 2}, {g: "'a"}) == "('a)**2"
    assert format_unit({g: 1}) == "'_7"


def test_poly_names_skip_taken():
    assert poly_names(3) == ["'a", "'b", "'c"]
    assert poly_names(2, {"'a"}) == ["'b", "'c"]
    names = poly_names(28)
    assert names[25] == "'z"
    assert names[26:] == ["'a1", "'b1"]


def test_bind_explicit_scopes_poly_names():
    unit = bind_explicit(parse_unit("'a metre"), "square")
    assert normalize(unit) == {METRE: 1, Var(ExplicitAbs("'a", "square")): 1}
    assert not is_monomorphic(unit)
    assert is_monomorphic(parse_unit("metre / sec"))
