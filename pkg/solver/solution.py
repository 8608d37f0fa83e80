"""
Solution Module
Reads unit assignments off the reduced matrix and drives one complete solve.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

from solver.core import minimal_core
from solver.hnf import Iteration, check_consistency, hnf, modified_hnf
from solver.matrix import AugMatrix, constraints_to_matrix, format_matrix
from units.core import Atom, Constraint, GeneratedUnit, LitOrVar, ParamAbs, UnitMap, Var, combine, is_rhs_atom
from units.syntax import atom_name
from utils.config import Config

logger = logging.getLogger("Solver")


@dataclass
class Solution:
    """Units of solved unknowns over base, explicit and generated units."""

    units: dict[Atom, UnitMap] = field(default_factory=dict)
    unsolved: frozenset[Atom] = frozenset()
    critical: frozenset[Atom] = frozenset()
    generated: tuple[GeneratedUnit, ...] = ()

    def unit_of(self, atom: Atom) -> UnitMap | None:
        return self.units.get(atom)

    def substitute(self, unit: UnitMap) -> UnitMap | None:
        """Replace every solved unknown in `unit`; None if one is unsolved."""
        parts = []
        for atom, exponent in unit.items():
            if not is_rhs_atom(atom):
                solved = self.units.get(atom)
                if solved is None:
                    return None
                parts.append((solved, exponent))
            else:
                parts.append(({atom: 1}, exponent))
        return combine(*parts)


@dataclass
class Inconsistency:
    """Contradictory constraints: `mismatch` rows read 0 = units, `non-integer` needs fractional exponents."""

    kind: str
    witnesses: list[UnitMap]
    core: tuple[Constraint, ...]

    def sides(self) -> list[tuple[UnitMap, UnitMap]]:
        """Each witness split into the two units found to differ."""
        return [
            ({a: e for a, e in w.items() if e > 0}, {a: -e for a, e in w.items() if e < 0}) for w in self.witnesses
        ]


@dataclass
class SolveResult:
    matrix: AugMatrix
    solution: Solution | None = None
    inconsistency: Inconsistency | None = None
    trace: list[Iteration] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.inconsistency is None


def is_param_abs(atom: Atom) -> bool:
    return isinstance(atom, Var) and isinstance(atom.kind, ParamAbs)


def is_critical_candidate(atom: Atom) -> bool:
    """Named monomorphic variables: the unknowns an annotation can pin down."""
    return isinstance(atom, Var) and isinstance(atom.kind, LitOrVar) and not atom.kind.is_literal


def _rhs_reading(m: AugMatrix, row: Sequence[int]) -> UnitMap:
    reading = {}
    for k, label in enumerate(m.rhs_cols):
        value = row[m.n_lhs + k]
        if value:
            reading[label] = m.rhs_sign(label) * value
    return reading


# ============================================================================
# EXTRACTION
# ============================================================================


def extract_solution(m: AugMatrix, shiftable: Callable[[Atom], bool] = is_param_abs) -> tuple[Solution, list[int]]:
    """Read unknowns off a matrix in final reduced form.

    Pivotless columns accepted by `shiftable` become fresh generated units and the pivot rows
    are read against them. Rows with zero lhs that involve non-generated units cannot be met
    with integer exponents; their indices are returned.
    """
    n = m.n_lhs
    next_index = m.next_generated_index()
    pivots: dict[int, int] = {}
    non_integer: list[int] = []
    relations: list[int] = []
    for i, row in enumerate(m.rows):
        j = AugMatrix.pivot(row)
        if j is None:
            continue
        if j < n:
            pivots[j] = i
        elif all(isinstance(m.rhs_cols[k - n], GeneratedUnit) for k in range(n, m.width) if row[k]):
            relations.append(i)
        else:
            non_integer.append(i)

    shifted: dict[int, GeneratedUnit] = {}
    unsolved: set[Atom] = set()
    for col, label in enumerate(m.lhs_cols):
        if col in pivots:
            continue
        if shiftable(label):
            shifted[col] = GeneratedUnit(next_index, origin=f"free {atom_name(label)}")
            next_index += 1
        else:
            unsolved.add(label)

    units: dict[Atom, UnitMap] = {}
    for col, unit in shifted.items():
        units[m.lhs_cols[col]] = {unit: 1}
    for col, i in pivots.items():
        row = m.rows[i]
        label = m.lhs_cols[col]
        if row[col] != 1:
            logger.warning(f"[SOLVER] pivot {row[col]} left under {atom_name(label)}")
            unsolved.add(label)
            continue
        reading: dict = {}
        free = False
        for k in range(col + 1, n):
            if not row[k]:
                continue
            if k in shifted:
                reading[shifted[k]] = reading.get(shifted[k], 0) - row[k]
            else:
                free = True
        if free:
            unsolved.add(label)
            continue
        reading = combine((reading, 1), (_rhs_reading(m, row), 1))
        units[label] = reading

    if relations:
        units = _apply_relations(m, relations, units, next_index)

    generated = sorted(
        {atom for unit in units.values() for atom in unit if isinstance(atom, GeneratedUnit)},
        key=lambda g: g.index,
    )
    return Solution(units, frozenset(unsolved), frozenset(), tuple(generated)), non_integer


def integer_kernel(rows: Sequence[Sequence[int]], width: int) -> list[list[int]]:
    """A basis over the integers of `{v : rows . v = 0}`.

    The transpose is stacked against the identity and reduced with unimodular row operations;
    rows whose transposed part vanishes carry the basis.
    """
    height = len(rows)
    stacked = [[rows[i][k] for i in range(height)] + [int(k == c) for c in range(width)] for k in range(width)]
    reduced = hnf(AugMatrix(list(range(height)), list(range(width)), stacked, [frozenset()] * width))
    return [row[height:] for row in reduced.rows if reduced.is_lhs_zero(row)]


def _apply_relations(m: AugMatrix, relations: list[int], units: dict, next_index: int) -> dict:
    """Rewrite generated units tied by zero-lhs rows over a free basis of their solutions."""
    n = m.n_lhs
    involved = [k for k in range(n, m.width) if any(m.rows[i][k] for i in relations)]
    labels = [m.rhs_cols[k - n] for k in involved]
    rows = [[m.rhs_sign(m.rhs_cols[k - n]) * m.rows[i][k] for k in involved] for i in relations]
    logger.debug(f"[SOLVER] {len(relations)} relation(s) among {len(labels)} generated unit(s)")

    replacement: dict[Atom, UnitMap] = {label: {} for label in labels}
    for vector in integer_kernel(rows, len(labels)):
        support = [k for k, v in enumerate(vector) if v]
        if len(support) == 1 and vector[support[0]] == 1:
            free = labels[support[0]]
        else:
            free = GeneratedUnit(next_index, origin="relation")
            next_index += 1
        for k in support:
            replacement[labels[k]][free] = vector[k]

    def rewrite(unit: UnitMap) -> UnitMap:
        return combine(*((replacement.get(atom, {atom: 1}), exponent) for atom, exponent in unit.items()))

    return {atom: rewrite(unit) for atom, unit in units.items()}


# ============================================================================
# SOLVE
# ============================================================================


def solve(
    constraints: Iterable[Constraint],
    extra_unknowns: Iterable[Atom] = (),
    order: Sequence[Atom] | None = None,
    shiftable: Callable[[Atom], bool] = is_param_abs,
) -> SolveResult:
    """Consistency check, critical variables, modified HNF and read-off for one constraint system."""
    constraints = tuple(constraints)
    m = constraints_to_matrix(constraints, extra_unknowns, order)
    logger.info(f"[SOLVER] {len(m.rows)} row(s), {m.n_lhs} unknown(s), {len(m.rhs_cols)} unit column(s)")
    if Config.DUMP_MATRICES:
        logger.debug(f"[SOLVER] augmented matrix\n{format_matrix(m)}")

    consistency = check_consistency(m)
    if not consistency.ok:
        reduced = consistency.reduced
        witnesses = [_rhs_reading(reduced, reduced.rows[i]) for i in consistency.witnesses]
        involved = frozenset().union(*(reduced.provenance[i] for i in consistency.witnesses))
        core = minimal_core(constraints, involved)
        logger.info(f"[SOLVER] inconsistent system, core of {len(core)} constraint(s)")
        return SolveResult(m, inconsistency=Inconsistency("mismatch", witnesses, tuple(constraints[k] for k in core)))

    reduced = consistency.reduced
    pivot_cols = {AugMatrix.pivot(row) for row in reduced.rows}
    critical = frozenset(
        label for col, label in enumerate(reduced.lhs_cols) if col not in pivot_cols and is_critical_candidate(label)
    )

    trace: list[Iteration] = []
    final, generated = modified_hnf(reduced, trace)
    solution, non_integer = extract_solution(final, shiftable)
    solution.critical = critical
    if non_integer:
        witnesses = [_rhs_reading(final, final.rows[i]) for i in non_integer]
        involved = frozenset().union(*(final.provenance[i] for i in non_integer))
        logger.info(f"[SOLVER] {len(non_integer)} row(s) need non-integer exponents")
        return SolveResult(
            final,
            inconsistency=Inconsistency("non-integer", witnesses, tuple(constraints[k] for k in sorted(involved))),
            trace=trace,
        )

    logger.info(
        f"[SOLVER] solved {len(solution.units)} unknown(s), {len(solution.unsolved)} unsolved, "
        f"{len(generated)} generated by pivot splitting"
    )
    return SolveResult(final, solution, trace=trace)
