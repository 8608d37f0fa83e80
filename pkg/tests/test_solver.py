import itertools
import random

from conftest import constraint
from sympy import Matrix

from solver import AugMatrix, check_consistency, constraints_to_matrix, format_matrix, hnf, is_hnf, solve
from solver.core import minimal_core
from solver.solution import integer_kernel
from units.core import UNITLESS, BaseUnit, GeneratedUnit, LitOrVar, ParamAbs, Power, Var, mul, normalize
from utils.config import Config

METRE = BaseUnit("metre")
SEC = BaseUnit("sec")
KG = BaseUnit("kg")
BASES = (METRE, SEC, KG)


def lit_var(name: str) -> Var:
    return Var(LitOrVar(f"p/{name}"))


def slot(k: int) -> Var:
    return Var(ParamAbs("f", k))


def power_product(pairs) -> object:
    return mul(*(Power(atom, exp) for atom, exp in pairs if exp))


# ============================================================================
# WORKED EXAMPLE
# ============================================================================


def worked_example():
    v, w, x, y = (lit_var(name) for name in "vwxy")
    constraints = [
        constraint(v, y, 1),
        constraint(w, Power(y, 4), 2),
        constraint(Power(y, 4), Power(x, 6), 3),
    ]
    return constraints, [v, w, x, y]


def test_worked_example_initial_hnf():
    constraints, order = worked_example()
    reduced = hnf(constraints_to_matrix(constraints, order=order))
    assert reduced.rows == [[1, 0, 0, -1], [0, 1, 0, -4], [0, 0, 6, -4]]
    assert is_hnf(reduced)


def test_worked_example_modified_hnf():
    constraints, order = worked_example()
    v, w, x, y = order
    result = solve(constraints, order=order)
    assert result.ok
    (iteration,) = result.trace
    assert iteration.recorded == [(2, 2)]
    assert iteration.appended == [[0, 0, 1, 0, -2]]

    (alpha,) = result.solution.generated
    units = result.solution.units
    assert units[v] == {alpha: 3}
    assert units[w] == {alpha: 12}
    assert units[x] == {alpha: 2}
    assert units[y] == {alpha: 3}
    assert result.solution.critical == frozenset({y})


# ============================================================================
# CONSISTENCY AND CORES
# ============================================================================


def test_mismatch_reports_both_sides_and_core():
    x = lit_var("x")
    result = solve([constraint(x, METRE, 1), constraint(x, SEC, 2)])
    assert not result.ok
    assert result.inconsistency.kind == "mismatch"
    assert result.inconsistency.sides() == [({METRE: 1}, {SEC: 1})]
    assert [c.provenance.span.line for c in result.inconsistency.core] == [1, 2]


def test_fractional_exponent_is_reported():
    x = lit_var("x")
    result = solve([constraint(Power(x, 2), METRE)])
    assert not result.ok
    assert result.inconsistency.kind == "non-integer"


def test_even_pivot_dividing_row_is_scaled():
    x = lit_var("x")
    result = solve([constraint(Power(x, 2), Power(SEC, 2))])
    assert result.ok
    assert result.solution.units[x] == {SEC: 1}


def test_minimal_core_drops_unrelated_constraints():
    x, y, z = lit_var("x"), lit_var("y"), lit_var("z")
    constraints = [
        constraint(x, METRE, 1),
        constraint(y, SEC, 2),
        constraint(x, y, 3),
        constraint(z, KG, 4),
    ]
    assert not check_consistency(constraints_to_matrix(constraints)).ok
    assert minimal_core(constraints, range(4), threshold=0) == [0, 1, 2]


def test_critical_variables_are_pivotless_named_columns():
    x, y = lit_var("x"), lit_var("y")
    result = solve([constraint(x, y)])
    assert result.ok
    assert result.solution.critical == frozenset({y})
    assert result.solution.unsolved == frozenset({x, y})


def test_free_parameter_slot_becomes_generated_unit():
    result = solve([constraint(slot(0), Power(slot(1), 2))])
    units = result.solution.units
    (g,) = result.solution.generated
    assert units[slot(1)] == {g: 1}
    assert units[slot(0)] == {g: 2}


def test_integer_kernel_basis():
    assert integer_kernel([[1, 1]], 2) == [[1, -1]]
    assert integer_kernel([[2, 4]], 2) == [[2, -1]]
    assert integer_kernel([[1, 0], [0, 1]], 2) == []


def test_relations_among_generated_units_settle():
    f0, f1, f2, f3 = (slot(k) for k in range(4))
    constraints = [
        constraint(Power(f0, 2), mul(f1, Power(f3, 6)), 1),
        constraint(mul(Power(f0, 4), Power(f2, -3)), mul(Power(f2, 6), Power(f1, -1)), 2),
        constraint(Power(mul(f1, Power(f2, 5)), -1), UNITLESS, 3),
    ]
    result = solve(constraints, [f0, f1, f2, f3], order=[f0, f1, f2, f3])
    assert result.ok
    assert not result.solution.unsolved
    assert all(satisfied(result.solution, c) for c in constraints)
    assert all(isinstance(g, GeneratedUnit) for g in result.solution.generated)


def test_format_matrix_shows_columns():
    x = lit_var("x")
    text = format_matrix(constraints_to_matrix([constraint(x, METRE)]))
    assert text.splitlines()[0].split() == ["x", "|", "metre"]


# ============================================================================
# RANDOMISED PROPERTIES
# ============================================================================


def random_system(rng: random.Random, max_unknowns: int = 8, homogeneous: bool = False):
    n = rng.randint(1, max_unknowns)
    unknowns = [slot(k) for k in range(n)]
    constraints = []
    for line in range(rng.randint(1, n + 1)):
        chosen = rng.sample(unknowns, rng.randint(1, min(3, n)))
        lhs = power_product((u, rng.randint(-6, 6)) for u in chosen)
        if homogeneous:
            others = rng.sample(unknowns, rng.randint(0, min(2, n)))
            rhs = power_product((u, rng.randint(-6, 6)) for u in others)
        else:
            rhs = power_product((b, rng.randint(-6, 6)) for b in rng.sample(BASES, rng.randint(0, 2)))
        constraints.append(constraint(lhs, rhs, line + 1))
    return constraints, unknowns


def all_integers(m: AugMatrix) -> bool:
    return all(type(v) is int for row in m.rows for v in row)


def satisfied(solution, c) -> bool:
    lhs = solution.substitute(normalize(c.lhs))
    rhs = solution.substitute(normalize(c.rhs))
    return lhs is not None and lhs == rhs


def test_random_systems_properties(monkeypatch):
    monkeypatch.setattr(Config, "SOLVER_CHECKS", True)
    rng = random.Random(20180704)
    checked = 0
    for _ in range(500):
        constraints, unknowns = random_system(rng)
        result = solve(constraints, unknowns)

        # integer matrices at every recorded step
        assert all_integers(result.matrix)
        assert all(all_integers(it.result) for it in result.trace)

        # every iteration records at least one pivot, so the loop is bounded by the pivots it splits
        recorded = sum(len(it.recorded) for it in result.trace)
        assert len(result.trace) <= recorded + 1

        # a split pivot column always ends with pivot 1
        for it in result.trace:
            for _, j in it.recorded:
                assert any(AugMatrix.pivot(row) == j and row[j] == 1 for row in it.result.rows)

        if not result.ok or result.solution.unsolved:
            continue
        checked += 1
        assert all(satisfied(result.solution, c) for c in constraints)
    assert checked > 0


def test_two_term_rows_give_two_unit_pivots():
    rng = random.Random(7)
    seen = 0
    for _ in range(300):
        constraints, unknowns = random_system(rng, max_unknowns=4, homogeneous=True)
        result = solve(constraints, unknowns)
        previous = hnf(constraints_to_matrix(constraints, unknowns))
        for it in result.trace:
            clean = not any(it.result.is_lhs_zero(r) for r in it.result.rows)
            if len(it.recorded) == 1 and clean:
                (i, j) = it.recorded[0]
                row = previous.rows[i]
                nonzero = [k for k, v in enumerate(row) if v]
                others = {AugMatrix.pivot(r) for n, r in enumerate(previous.rows) if n != i}
                if len(nonzero) == 2 and nonzero[1] < previous.n_lhs and nonzero[1] not in others:
                    k = nonzero[1]
                    seen += 1
                    pivots = {AugMatrix.pivot(r): r for r in it.result.rows}
                    assert pivots[j][j] == 1
                    assert pivots[k][k] == 1
            previous = it.result
    assert seen > 0


def brute_force_solutions(rows: list[list[int]], n: int, bound: int = 2) -> list[tuple[int, ...]]:
    out = []
    for vector in itertools.product(range(-bound, bound + 1), repeat=n):
        if any(vector) and all(sum(c * v for c, v in zip(row, vector)) == 0 for row in rows):
            out.append(vector)
    return out


def test_agrees_with_brute_force_on_small_systems():
    rng = random.Random(1618)
    for _ in range(150):
        constraints, unknowns = random_system(rng, max_unknowns=4, homogeneous=True)
        result = solve(constraints, unknowns, order=unknowns)
        assert result.ok
        solution = result.solution
        assert not solution.unsolved

        m = constraints_to_matrix(constraints, order=unknowns)
        generated = list(solution.generated)
        assert all(isinstance(g, GeneratedUnit) for g in generated)
        assert all(set(solution.units[u]) <= set(generated) for u in unknowns)
        found = brute_force_solutions(m.rows, len(unknowns))
        if not generated:
            assert not found, f"solver found no free units but {found[0]} solves the system"
            continue

        basis = Matrix([[solution.units[u].get(g, 0) for g in generated] for u in unknowns])

        # every basis vector solves the system
        c = Matrix(m.rows) if m.rows else Matrix.zeros(1, len(unknowns))
        assert c * basis == Matrix.zeros(c.rows, len(generated))

        # every small integer solution lies in the span of the basis
        if found:
            combined = basis.row_join(Matrix([list(v) for v in found]).T)
            assert combined.rank() == basis.rank()
