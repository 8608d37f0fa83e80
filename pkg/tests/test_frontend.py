import pytest
from conftest import data_path

from frontend import parse_annotation, parse_file, parse_source, print_source, resolve_aliases
from frontend.ast import (
    FUNCTION,
    MODULE,
    PROGRAM,
    AnnotationLine,
    Assignment,
    BinaryOp,
    FunctionCall,
    IfBlock,
    Literal,
    TypeDeclaration,
    UnitAlias,
    UnitSpec,
)
from frontend.lexer import NEWLINE, tokenize
from units.core import BaseUnit, normalize
from utils.errors import AliasCycleError, AnnotationError, ParseError

METRE = BaseUnit("metre")
SEC = BaseUnit("sec")


def declarations(unit):
    return [item for item in unit.spec if isinstance(item, TypeDeclaration)]


def test_tokenize_positions_and_separators():
    tokens = tokenize("x = 1; y = 2\n")
    assert [(t.text, t.line, t.col) for t in tokens[:4]] == [("x", 1, 1), ("=", 1, 3), ("1", 1, 5), (";", 1, 6)]
    assert tokens[3].kind == NEWLINE


def test_tokenize_joins_continuation_lines():
    tokens = tokenize("x = a + &\n    b\n")
    assert [t.text for t in tokens if t.kind != NEWLINE][:5] == ["x", "=", "a", "+", "b"]


def test_parse_ballistics_declarations():
    source = parse_file(data_path("ballistics1.f90"))
    (unit,) = source.units
    assert unit.kind == PROGRAM
    assert unit.name == "ballistics"
    decls = declarations(unit)
    assert decls[0].attributes == ("parameter",)
    x0 = decls[0].entities[0]
    assert (x0.name, x0.span.line, x0.span.col) == ("x0", 3, 22)
    assert isinstance(x0.init, Literal)
    assert [(e.name, e.span.col) for e in decls[3].entities] == [("x", 11), ("t", 14)]
    (assignment,) = unit.body
    assert isinstance(assignment, Assignment)
    assert assignment.span.line == 7


def test_expression_precedence():
    source = parse_source("program p\n  real :: x, a, t\n  x = a * t**2 + -t\nend program p\n")
    value = source.units[0].body[0].value
    assert isinstance(value, BinaryOp) and value.op == "+"
    product = value.left
    assert product.op == "*"
    assert product.right.op == "**"


def test_parse_module_with_function_and_annotations():
    source = parse_file(data_path("helper.f90"))
    (module,) = source.units
    assert module.kind == MODULE
    (square,) = module.contains
    assert square.kind == FUNCTION
    assert square.result_name == "square"
    assert [p.name for p in square.params] == ["n"]
    annotations = [item.annotation for item in module.spec if isinstance(item, AnnotationLine)]
    assert isinstance(annotations[0], UnitAlias)
    assert annotations[1] == UnitSpec(METRE, ("x0",))


def test_same_line_statement_after_declaration():
    source = parse_file(data_path("ballistics.f90"))
    program = source.units[0]
    assert program.uses() == ["helper"]
    (assignment,) = program.body
    assert assignment.span.line == 6
    assert isinstance(assignment.value.left, FunctionCall)


def test_else_if_becomes_nested_if():
    text = (
        "program p\n  real :: x\n"
        "  if (x > 1) then\n    x = 1\n  else if (x < 0) then\n    x = 0\n  else\n    x = 2\n  end if\n"
        "end program p\n"
    )
    (block,) = parse_source(text).units[0].body
    assert isinstance(block, IfBlock)
    (nested,) = block.else_body
    assert nested.is_else_if
    assert len(nested.else_body) == 1


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_source("program p\n  real :: x\n  x = (1 +\nend program p\n", "bad.f90")
    assert info.value.file == "bad.f90"
    assert info.value.line == 3


def test_malformed_annotation_is_reported_and_skipped():
    source = parse_source("program p\n  != unit metre / :: x\n  real :: x\nend program p\n", "a.f90")
    assert len(source.diagnostics) == 1
    assert "a.f90:2:3" in source.diagnostics[0]
    (line,) = [item for item in source.units[0].spec if isinstance(item, AnnotationLine)]
    assert line.annotation is None


def test_plain_bang_equals_comment_is_not_an_annotation():
    source = parse_source("program p\n  != note: tidy later\n  real :: x\nend program p\n")
    assert source.diagnostics == ()


def test_parse_annotation_forms():
    spec = parse_annotation("!= unit metre / sec :: v0, v1")
    assert spec.names == ("v0", "v1")
    assert normalize(spec.unit) == {METRE: 1, SEC: -1}
    alias = parse_annotation("!= unit :: speed = metre / sec")
    assert alias.name == "speed"
    with pytest.raises(AnnotationError):
        parse_annotation("!= unit :: bad = 'a metre")


def test_parse_annotation_holds_plain_units():
    assert parse_annotation("!= unit metre :: x").unit == METRE
    assert isinstance(parse_annotation("!= unit metre :: x").unit, BaseUnit)
    alias = parse_annotation("!= unit :: len = metre")
    assert alias.unit == METRE
    assert alias.name == "len"


def test_annotated_program_infers(infer_lines, tmp_path):
    path = tmp_path / "annotated.f90"
    path.write_text("program p\n  != unit metre :: x\n  real :: x\n  x = 1\nend program p\n")
    assert infer_lines(str(path)) == ["3:11 unit metre :: x"]


def test_resolve_aliases_substitutes_specs():
    source = resolve_aliases(parse_file(data_path("helper.f90")))
    specs = [
        item.annotation
        for item in source.units[0].spec
        if isinstance(item, AnnotationLine) and isinstance(item.annotation, UnitSpec)
    ]
    assert normalize(specs[1].unit) == {METRE: 1, SEC: -1}


def test_alias_cycle_is_an_error():
    text = "module m\n  != unit :: a = b\n  != unit :: b = a\n  real :: x\nend module m\n"
    with pytest.raises(AliasCycleError):
        resolve_aliases(parse_source(text))


def test_printer_round_trip():
    for name in ("ballistics2.f90", "helper.f90", "ballistics.f90"):
        printed = print_source(parse_file(data_path(name)))
        assert print_source(parse_source(printed)) == printed
