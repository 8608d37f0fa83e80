import pytest
from conftest import constraint

from analysis import ConstraintGenerator, Expander, IdSource, expand_instances, expand_template, instantiate
from analysis.instantiate import Instance
from frontend import parse_source
from units.core import ExplicitAbs, ExplicitUse, LitOrVar, ParamAbs, ParamUse, Var, constraint_atoms
from utils.errors import MissingDefinition

SOURCE = """module m
  implicit none
contains
  real function sq(n)
    real :: n
    sq = n * n
  end function sq
  subroutine s(a)
    real :: a, b
    b = sq(a) + sq(b)
  end subroutine s
  real function r(x) result(y)
    real :: x
    y = r(x)
  end function r
end module m
"""


@pytest.fixture
def module_templates():
    ids = IdSource()
    entry = ConstraintGenerator(ids).gen_program_unit(parse_source(SOURCE).units[0], "m.f90")
    return entry.templates, ids


def uses_of(constraints, fs: str) -> set:
    return {
        atom.kind
        for c in constraints
        for atom in constraint_atoms(c)
        if isinstance(atom, Var) and isinstance(atom.kind, ParamUse) and atom.kind.fs == fs
    }


def test_instantiate_rewrites_only_abstract_units():
    assert instantiate(Var(ParamAbs("f", 1)), 5) == Var(ParamUse("f", 1, 5))
    assert instantiate(Var(ExplicitAbs("'a", "f")), 5) == Var(ExplicitUse("'a", "f", 5))
    assert instantiate(Var(LitOrVar("p/x")), 5) == Var(LitOrVar("p/x"))


def test_template_expansion_includes_each_call(module_templates):
    templates, ids = module_templates
    constraints = expand_template(templates, "s", ids)
    call_ids = {kind.call_id for kind in uses_of(constraints, "sq")}
    assert len(call_ids) == 2
    # the body of sq appears once per call, on that call's units
    for call_id in call_ids:
        assert ParamUse("sq", "n", call_id) in uses_of(constraints, "sq")


def test_instance_gets_fresh_inner_call_ids(module_templates):
    templates, ids = module_templates
    template_ids = {kind.call_id for kind in uses_of(templates["s"].body, "sq")}
    base = [constraint(Var(LitOrVar("p/q")), Var(ParamUse("s", 1, 99)))]
    constraints = expand_instances(base, templates, ids)
    assert ParamUse("s", "a", 99) in uses_of(constraints, "s")
    inner = {kind.call_id for kind in uses_of(constraints, "sq")}
    assert len(inner) == 2
    assert inner.isdisjoint(template_ids)


def test_recursive_call_is_cut(module_templates):
    templates, ids = module_templates
    expander = Expander(templates, ids)
    constraints = expander.subst_instance(Instance("r", None))
    cut = [c for c in constraints if c.provenance.reason == "recursive-call"]
    assert {c.rhs for c in cut} == {Var(ParamAbs("r", 0)), Var(ParamAbs("r", 1))}
    assert expander.expansions == 1
    # cut constraints point at the recursive call
    assert {c.provenance.span.line for c in cut} == {14}


def test_cycle_without_call_site_adds_nothing():
    assert Expander.cut_cycle(Instance("r", 3), Instance("r", None), ()) == []


def test_missing_template_is_reported():
    with pytest.raises(MissingDefinition):
        Expander({}, IdSource()).subst_instance(Instance("nope", 1))
