import pytest

from analysis import ConstraintGenerator, IdSource
from frontend import parse_source, resolve_aliases
from summaries.intrinsics import intrinsic_templates
from units.core import UNITLESS, BaseUnit, LitOrVar, ParamAbs, ParamUse, Var, constraint_atoms, normalize
from utils.errors import ArityMismatch, MissingDefinition, UndeclaredIdentifier, UnsupportedConstruct


def generate(text: str, name: str = "t.f90"):
    source = resolve_aliases(parse_source(text, name))
    generator = ConstraintGenerator(IdSource(), {}, intrinsic_templates())
    return generator.gen_program_unit(source.units[0], name)


def program(*lines: str) -> str:
    return "\n".join(["program p", "  implicit none", *lines, "end program p", ""])


def module(*lines: str) -> str:
    return "\n".join(["module m", "  implicit none", "contains", *lines, "end module m", ""])


def reasons(constraints) -> list[str]:
    return [c.provenance.reason for c in constraints]


def test_literal_initializer_adds_no_constraint():
    entry = generate(program("  real :: inchestocm = 2.54", "  real :: zero = 0"))
    assert entry.constraints == []


def test_literal_in_expression_gets_fresh_unit_at_program_level():
    entry = generate(program("  real :: x, y", "  x = 2.0 * y"))
    (assignment,) = entry.constraints
    atoms = normalize(assignment.rhs)
    literals = [a for a in atoms if isinstance(a.kind, LitOrVar) and a.kind.is_literal]
    assert len(literals) == 1


def test_addition_constraint_has_operand_span():
    entry = generate(program("  real :: x, y, z", "  z = x + y"))
    addition = next(c for c in entry.constraints if c.provenance.reason == "addition-operands")
    assert addition.lhs == Var(LitOrVar("p/x"))
    assert addition.rhs == Var(LitOrVar("p/y"))
    assert (addition.provenance.span.line, addition.provenance.span.col) == (4, 7)


def test_annotation_constrains_declared_variable():
    entry = generate(program("  != unit metre :: x", "  real :: x"))
    (annotation,) = entry.constraints
    assert annotation.provenance.reason == "annotation"
    assert annotation.lhs == Var(LitOrVar("p/x"))
    assert annotation.rhs == BaseUnit("metre")
    (decl,) = entry.declarations
    assert decl.annotated


def test_function_template_links_and_literals():
    entry = generate(module("  real function f(x)", "    real :: x", "    f = x + 2", "  end function f"))
    template = entry.templates["f"]
    assert template.arity == 1
    assert template.first_slot == 0
    assert reasons(template.links) == ["parameter-link", "parameter-link"]
    assert template.links[1].lhs == Var(ParamAbs("f", "x"))
    assert template.links[1].rhs == Var(ParamAbs("f", 1))
    addition = next(c for c in template.body if c.provenance.reason == "addition-operands")
    assert addition.rhs == UNITLESS


def test_zero_literal_stays_polymorphic_inside_function():
    entry = generate(module("  real function f(x)", "    real :: x", "    f = x + 0.0", "  end function f"))
    addition = next(c for c in entry.templates["f"].body if c.provenance.reason == "addition-operands")
    assert isinstance(addition.rhs.kind, ParamAbs)
    assert addition.rhs.kind.slot.startswith("#")


def test_call_produces_instance_units():
    text = module(
        "  real function sq(n)",
        "    real :: n",
        "    sq = n * n",
        "  end function sq",
        "  subroutine s(a)",
        "    real :: a, b",
        "    b = sq(a) + sq(b)",
        "  end subroutine s",
    )
    body = generate(text).templates["s"].body
    uses = {
        atom.kind.call_id
        for c in body
        for atom in constraint_atoms(c)
        if isinstance(atom, Var) and isinstance(atom.kind, ParamUse)
    }
    assert len(uses) == 2
    assert "call-argument" in reasons(body)


def test_declarations_carry_roles_and_positions():
    lines = [
        "module helper",
        "  real :: g",
        "contains",
        "  real function square(n)",
        "    real :: n",
        "    square = n * n",
        "  end function square",
        "end module helper",
    ]
    text = "\n".join([*lines, ""])
    entry = generate(text)
    found = {(d.name, d.role): (d.span.line, d.span.col) for d in entry.declarations}
    assert found[("g", "variable")] == (2, 11)
    assert found[("square", "result")] == (4, 3)
    assert found[("n", "parameter")] == (5, 13)


def test_undeclared_identifier_offers_suggestions():
    with pytest.raises(UndeclaredIdentifier) as info:
        generate(program("  real :: velocity, x", "  x = velocty"))
    assert "velocity" in info.value.suggestions


def test_arity_and_missing_definitions():
    with pytest.raises(ArityMismatch):
        generate(program("  real :: x", "  x = sqrt(x, x)"))
    with pytest.raises(MissingDefinition):
        generate(program("  real :: x", "  x = nosuch(x)"))


def test_non_integer_exponent_is_rejected():
    with pytest.raises(UnsupportedConstruct):
        generate(program("  real :: x, y", "  x = y**1.5"))
