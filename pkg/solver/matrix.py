"""
Augmented Matrix Module
Converts unit constraints to an exact-integer augmented matrix [C | B]
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from units.core import (
    Atom,
    Constraint,
    GeneratedUnit,
    LitOrVar,
    ParamAbs,
    Var,
    atom_sort_key,
    combine,
    constraint_atoms,
    is_rhs_atom,
    normalize,
)
from units.syntax import atom_name


@dataclass
class AugMatrix:
    """Rows of integers over labelled unknown (lhs) and base-unit (rhs) columns.

    A row `[c | b]` reads `sum(c_j * X_j) = sum(b_k * U_k)`, except that columns listed in
    `inverted` contribute `-b_k * U_k`.
    """

    lhs_cols: list[Atom]
    rhs_cols: list[Atom]
    rows: list[list[int]] = field(default_factory=list)
    provenance: list[frozenset[int]] = field(default_factory=list)
    inverted: frozenset[Atom] = frozenset()
    constraints: tuple[Constraint, ...] = ()

    @property
    def n_lhs(self) -> int:
        return len(self.lhs_cols)

    @property
    def width(self) -> int:
        return len(self.lhs_cols) + len(self.rhs_cols)

    @property
    def labels(self) -> list[Atom]:
        return self.lhs_cols + self.rhs_cols

    def copy(self) -> AugMatrix:
        return AugMatrix(
            list(self.lhs_cols),
            list(self.rhs_cols),
            [list(row) for row in self.rows],
            list(self.provenance),
            self.inverted,
            self.constraints,
        )

    def with_rows(self, rows: list[list[int]], provenance: list[frozenset[int]]) -> AugMatrix:
        return AugMatrix(list(self.lhs_cols), list(self.rhs_cols), rows, provenance, self.inverted, self.constraints)

    @staticmethod
    def pivot(row: Sequence[int]) -> int | None:
        for index, value in enumerate(row):
            if value:
                return index
        return None

    def is_lhs_zero(self, row: Sequence[int]) -> bool:
        return not any(row[: self.n_lhs])

    def next_generated_index(self) -> int:
        indices = [atom.index for atom in self.labels if isinstance(atom, GeneratedUnit)]
        return max(indices, default=0) + 1

    def add_rhs_column(self, label: Atom, inverted: bool = False) -> int:
        self.rhs_cols.append(label)
        for row in self.rows:
            row.append(0)
        if inverted:
            self.inverted = self.inverted | {label}
        return self.width - 1

    def rhs_sign(self, label: Atom) -> int:
        return -1 if label in self.inverted else 1

    def assert_integral(self) -> None:
        for row in self.rows:
            for value in row:
                if type(value) is not int:
                    raise AssertionError(f"non-integer matrix entry {value!r}")


def column_group(atom: Atom) -> int:
    """Literal unknowns first, then other unknowns, then result slots, then parameter slots."""
    kind = atom.kind if isinstance(atom, Var) else None
    if isinstance(kind, LitOrVar) and kind.is_literal:
        return 0
    if isinstance(kind, ParamAbs):
        if isinstance(kind.slot, str):
            return 0 if kind.slot.startswith("#") else 1
        return 2 if kind.slot == 0 else 3
    return 1


def constraints_to_matrix(
    constraints: Iterable[Constraint],
    extra_unknowns: Iterable[Atom] = (),
    order: Sequence[Atom] | None = None,
) -> AugMatrix:
    """One row per nontrivial constraint: lhs minus rhs, with base-unit terms moved right."""
    constraints = tuple(constraints)
    seen: dict[Atom, int] = {}
    rhs_atoms: set[Atom] = set()
    for constraint in constraints:
        for atom in constraint_atoms(constraint):
            if is_rhs_atom(atom):
                rhs_atoms.add(atom)
            elif atom not in seen:
                seen[atom] = len(seen)

    if order is not None:
        lhs_cols = list(order)
        lhs_cols.extend(atom for atom in seen if atom not in set(order))
    else:
        lhs_cols = sorted(seen, key=lambda atom: (column_group(atom), seen[atom]))
    present = set(lhs_cols)
    for atom in extra_unknowns:
        if atom not in present and not is_rhs_atom(atom):
            lhs_cols.append(atom)
            present.add(atom)
    rhs_cols = sorted(rhs_atoms, key=atom_sort_key)

    lhs_index = {atom: i for i, atom in enumerate(lhs_cols)}
    rhs_index = {atom: len(lhs_cols) + i for i, atom in enumerate(rhs_cols)}
    width = len(lhs_cols) + len(rhs_cols)

    rows, provenance = [], []
    for index, constraint in enumerate(constraints):
        difference = combine((normalize(constraint.lhs), 1), (normalize(constraint.rhs), -1))
        if not difference:
            continue
        row = [0] * width
        for atom, coefficient in difference.items():
            if atom in lhs_index:
                row[lhs_index[atom]] = coefficient
            else:
                row[rhs_index[atom]] = -coefficient
        rows.append(row)
        provenance.append(frozenset({index}))
    return AugMatrix(lhs_cols, rhs_cols, rows, provenance, frozenset(), constraints)


def format_matrix(m: AugMatrix, names=None) -> str:
    """Aligned grid with column headers and a bar between the C and B parts."""
    namer = names or atom_name
    headers = [namer(atom) for atom in m.lhs_cols] + ["|"] + [namer(atom) for atom in m.rhs_cols]
    body = [[str(v) for v in row[: m.n_lhs]] + ["|"] + [str(v) for v in row[m.n_lhs :]] for row in m.rows]
    widths = [max(len(line[i]) for line in [headers, *body]) for i in range(len(headers))]
    return "\n".join(" ".join(cell.rjust(w) for cell, w in zip(line, widths)) for line in [headers, *body])
