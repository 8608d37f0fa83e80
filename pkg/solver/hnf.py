"""
Hermite Normal Form Module
Integer row reduction, rank-based consistency and the modified HNF that introduces
generated polymorphic units for pivots greater than one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from sympy import igcd

from solver.matrix import AugMatrix, format_matrix
from units.core import GeneratedUnit
from utils.config import Config

logger = logging.getLogger("Solver")


# ============================================================================
# HNF
# ============================================================================


def _subtract(rows, provenance, target: int, source: int, factor: int, start: int) -> None:
    pivot_row = rows[source]
    row = rows[target]
    for k in range(start, len(row)):
        if pivot_row[k]:
            row[k] -= factor * pivot_row[k]
    provenance[target] = provenance[target] | provenance[source]


def hnf(m: AugMatrix) -> AugMatrix:
    """Hermite normal form over the full augmented width; zero rows are dropped.

    Pivots are positive, pivot columns increase down the rows and entries above a pivot lie in
    [0, pivot). Only unimodular row operations are used.
    """
    rows = [list(row) for row in m.rows]
    provenance = list(m.provenance)
    height, width = len(rows), m.width
    top = 0
    for col in range(width):
        if top >= height:
            break
        found = False
        while True:
            nonzero = [i for i in range(top, height) if rows[i][col]]
            if not nonzero:
                break
            found = True
            best = min(nonzero, key=lambda i: (abs(rows[i][col]), i))
            rows[top], rows[best] = rows[best], rows[top]
            provenance[top], provenance[best] = provenance[best], provenance[top]
            others = [i for i in range(top + 1, height) if rows[i][col]]
            if not others:
                break
            p = rows[top][col]
            for i in others:
                _subtract(rows, provenance, i, top, rows[i][col] // p, col)
        if not found:
            continue
        if rows[top][col] < 0:
            rows[top] = [-v for v in rows[top]]
        p = rows[top][col]
        for i in range(top):
            q = rows[i][col] // p
            if q:
                _subtract(rows, provenance, i, top, q, col)
        top += 1

    kept = [i for i in range(height) if any(rows[i])]
    result = m.with_rows([rows[i] for i in kept], [provenance[i] for i in kept])
    if Config.SOLVER_CHECKS:
        result.assert_integral()
    return result


def is_hnf(m: AugMatrix) -> bool:
    last = -1
    for r, row in enumerate(m.rows):
        col = AugMatrix.pivot(row)
        if col is None or col <= last or row[col] <= 0:
            return False
        if any(not 0 <= m.rows[i][col] < row[col] for i in range(r)):
            return False
        last = col
    return True


# ============================================================================
# CONSISTENCY
# ============================================================================


@dataclass
class Consistency:
    rank_lhs: int
    rank_augmented: int
    reduced: AugMatrix
    witnesses: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.rank_lhs == self.rank_augmented


def lhs_rank(m: AugMatrix) -> int:
    """Rank of the C part of a matrix already in HNF."""
    return sum(1 for row in m.rows if not m.is_lhs_zero(row))


def check_consistency(m: AugMatrix) -> Consistency:
    """Compare rank(C) with rank([C|B]); witnesses are HNF rows reading 0 = nonzero units."""
    reduced = hnf(m)
    rank_lhs = lhs_rank(reduced)
    witnesses = [i for i, row in enumerate(reduced.rows) if reduced.is_lhs_zero(row)]
    if witnesses:
        logger.debug(f"[SOLVER] inconsistent: rank(C)={rank_lhs}, rank([C|B])={len(reduced.rows)}")
    return Consistency(rank_lhs, len(reduced.rows), reduced, witnesses)


# ============================================================================
# MODIFIED HNF
# ============================================================================


@dataclass
class Iteration:
    """One pass of the modified HNF loop, kept for inspection and tests."""

    recorded: list[tuple[int, int]]
    appended: list[list[int]]
    result: AugMatrix


def _scale_dividing_pivots(m: AugMatrix, record: bool) -> list[tuple[int, int]]:
    """Divide rows by their lhs pivot where it divides the whole row; return the other pivots > 1."""
    recorded = []
    for i, row in enumerate(m.rows):
        j = AugMatrix.pivot(row)
        if j is None or j >= m.n_lhs or row[j] <= 1:
            continue
        p = row[j]
        if all(v % p == 0 for v in row):
            m.rows[i] = [v // p for v in row]
        elif record:
            recorded.append((i, j))
    return recorded


def _dump(title: str, m: AugMatrix) -> None:
    if Config.DUMP_MATRICES:
        logger.debug(f"[SOLVER] {title}\n{format_matrix(m)}")


def modified_hnf(m: AugMatrix, trace: list[Iteration] | None = None) -> tuple[AugMatrix, list[GeneratedUnit]]:
    """Reduce until every lhs pivot is 1, adding a generated unit column for each pivot that is not.

    A recorded pivot p at row i, column j gets a new row with 1 at j and -d in a fresh column,
    where a is the smallest nonzero magnitude right of j in row i and d = a / gcd(p, a).
    Generated columns are inverted: the value read off for them is negated.
    """
    current = hnf(m)
    _dump("initial HNF", current)
    generated: list[GeneratedUnit] = []
    next_index = current.next_generated_index()
    while True:
        recorded = _scale_dividing_pivots(current, record=True)
        if not recorded:
            current = hnf(current)
            break
        appended = []
        rows_before = [list(row) for row in current.rows]
        for i, j in recorded:
            row = rows_before[i]
            p = row[j]
            a = min(abs(v) for v in row[j + 1 :] if v)
            d = a // igcd(p, a)
            label = GeneratedUnit(next_index, origin=f"pivot {p} at column {j}")
            next_index += 1
            generated.append(label)
            column = current.add_rhs_column(label, inverted=True)
            new_row = [0] * current.width
            new_row[j] = 1
            new_row[column] = -d
            current.rows.append(new_row)
            current.provenance.append(current.provenance[i])
            appended.append(new_row)
            logger.debug(f"[SOLVER] pivot {p} at column {j}: a={a}, d={d}, new unit {label.index}")
        current = hnf(current)
        _scale_dividing_pivots(current, record=False)
        current = hnf(current)
        if Config.SOLVER_CHECKS:
            current.assert_integral()
        _dump("modified HNF pass", current)
        if trace is not None:
            trace.append(Iteration(recorded, appended, current.copy()))
    return current, generated
