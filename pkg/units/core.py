"""
Units Core Module
Unit expressions, unit variables, constraints and the Abelian normal form
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from typing import Union

# ============================================================================
# SOURCE LOCATIONS
# ============================================================================


@dataclass(frozen=True, order=True)
class Span:
    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    def contains(self, other: Span) -> bool:
        return (
            self.file == other.file
            and (self.line, self.col) <= (other.line, other.col)
            and (other.end_line, other.end_col) <= (self.end_line, self.end_col)
        )

    def to(self, other: Span) -> Span:
        """Span running from the start of this span to the end of `other`."""
        return Span(self.file, self.line, self.col, other.end_line, other.end_col)

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Provenance:
    span: Span
    reason: str

    @property
    def file(self) -> str:
        return self.span.file


# ============================================================================
# UNIT VARIABLES
# ============================================================================


@dataclass(frozen=True)
class LitOrVar:
    """Monomorphic unknown of a variable (`scope/name`) or a literal (`#id`)."""

    ident: str

    @property
    def is_literal(self) -> bool:
        return self.ident.startswith("#")

    @property
    def name(self) -> str:
        return self.ident.rsplit("/", 1)[-1]


@dataclass(frozen=True)
class ParamAbs:
    """Abstract unit of a procedure slot: parameter index, variable name or literal id."""

    fs: str
    slot: int | str


@dataclass(frozen=True)
class ParamUse:
    fs: str
    slot: int | str
    call_id: int


@dataclass(frozen=True)
class ExplicitAbs:
    """Explicit polymorphic annotation variable such as `'a`, scoped to its owning procedure."""

    alpha: str
    owner: str = ""


@dataclass(frozen=True)
class ExplicitUse:
    alpha: str
    owner: str
    call_id: int


UnitVarKind = Union[LitOrVar, ParamAbs, ParamUse, ExplicitAbs, ExplicitUse]


# ============================================================================
# UNIT EXPRESSIONS
# ============================================================================


@dataclass(frozen=True)
class BaseUnit:
    name: str


@dataclass(frozen=True)
class Unitless:
    pass


UNITLESS = Unitless()


@dataclass(frozen=True)
class Product:
    left: UnitExpr
    right: UnitExpr


@dataclass(frozen=True)
class Power:
    base: UnitExpr
    exponent: int


@dataclass(frozen=True)
class Var:
    kind: UnitVarKind


@dataclass(frozen=True)
class GeneratedUnit:
    """Fresh polymorphic unit introduced by the solver; `origin` only aids debugging."""

    index: int
    origin: str = field(default="", compare=False)


UnitExpr = Union[BaseUnit, Unitless, Product, Power, Var, GeneratedUnit]
Atom = Union[BaseUnit, Var, GeneratedUnit]
UnitMap = dict  # Atom -> int, zero exponents omitted


@dataclass(frozen=True)
class Constraint:
    lhs: UnitExpr
    rhs: UnitExpr
    provenance: Provenance

    def __str__(self) -> str:
        from units.syntax import format_unit

        return f"{format_unit(self.lhs)} === {format_unit(self.rhs)}"


# ============================================================================
# CONSTRUCTION HELPERS
# ============================================================================


def mul(*units: UnitExpr) -> UnitExpr:
    result: UnitExpr | None = None
    for unit in units:
        result = unit if result is None else Product(result, unit)
    return UNITLESS if result is None else result


def div(numerator: UnitExpr, denominator: UnitExpr) -> UnitExpr:
    return Product(numerator, Power(denominator, -1))


def var(kind: UnitVarKind) -> Var:
    return Var(kind)


# ============================================================================
# NORMAL FORM
# ============================================================================


def atom_sort_key(atom: Atom) -> tuple:
    """Base units, then explicit poly vars, then generated vars, then unknowns."""
    if isinstance(atom, BaseUnit):
        return (0, atom.name, "", 0)
    if isinstance(atom, GeneratedUnit):
        return (2, "", "", atom.index)
    kind = atom.kind
    if isinstance(kind, ExplicitAbs):
        return (1, kind.alpha, kind.owner, -1)
    if isinstance(kind, ExplicitUse):
        return (1, kind.alpha, kind.owner, kind.call_id)
    if isinstance(kind, ParamAbs):
        return (3, kind.fs, str(kind.slot), -1)
    if isinstance(kind, ParamUse):
        return (4, kind.fs, str(kind.slot), kind.call_id)
    return (5, kind.ident, "", 0)


def _accumulate(unit: UnitExpr, scale: int, out: dict) -> None:
    if isinstance(unit, Unitless):
        return
    if isinstance(unit, Product):
        _accumulate(unit.left, scale, out)
        _accumulate(unit.right, scale, out)
        return
    if isinstance(unit, Power):
        if not isinstance(unit.exponent, int):
            raise TypeError(f"unit exponents must be integers, got {unit.exponent!r}")
        if unit.exponent:
            _accumulate(unit.base, scale * unit.exponent, out)
        return
    out[unit] = out.get(unit, 0) + scale


def normalize(unit: UnitExpr) -> UnitMap:
    """Map atoms to nonzero integer exponents, in deterministic atom order."""
    raw: dict = {}
    _accumulate(unit, 1, raw)
    return {atom: raw[atom] for atom in sorted(raw, key=atom_sort_key) if raw[atom]}


def denormalize(mapping: Mapping[Atom, int]) -> UnitExpr:
    factors = [
        atom if exponent == 1 else Power(atom, exponent)
        for atom, exponent in sorted(mapping.items(), key=lambda item: atom_sort_key(item[0]))
        if exponent
    ]
    return mul(*factors)


def units_equal(u1: UnitExpr, u2: UnitExpr) -> bool:
    return normalize(u1) == normalize(u2)


def combine(*weighted: tuple[Mapping[Atom, int], int]) -> UnitMap:
    """Pointwise sum of scaled normal forms."""
    out: dict = {}
    for mapping, scale in weighted:
        for atom, exponent in mapping.items():
            out[atom] = out.get(atom, 0) + scale * exponent
    return {atom: out[atom] for atom in sorted(out, key=atom_sort_key) if out[atom]}


# ============================================================================
# TRAVERSAL
# ============================================================================


def map_atoms(unit: UnitExpr, fn: Callable[[Atom], UnitExpr]) -> UnitExpr:
    """Rebuild `unit` with every atom replaced by `fn(atom)`."""
    if isinstance(unit, Unitless):
        return unit
    if isinstance(unit, Product):
        return Product(map_atoms(unit.left, fn), map_atoms(unit.right, fn))
    if isinstance(unit, Power):
        return Power(map_atoms(unit.base, fn), unit.exponent)
    return fn(unit)


def map_constraint(constraint: Constraint, fn: Callable[[Atom], UnitExpr]) -> Constraint:
    return Constraint(map_atoms(constraint.lhs, fn), map_atoms(constraint.rhs, fn), constraint.provenance)


def iter_atoms(unit: UnitExpr) -> Iterable[Atom]:
    if isinstance(unit, Unitless):
        return
    if isinstance(unit, Product):
        yield from iter_atoms(unit.left)
        yield from iter_atoms(unit.right)
    elif isinstance(unit, Power):
        yield from iter_atoms(unit.base)
    else:
        yield unit


def constraint_atoms(constraint: Constraint) -> Iterable[Atom]:
    yield from iter_atoms(constraint.lhs)
    yield from iter_atoms(constraint.rhs)


def is_abstract(atom: Atom) -> bool:
    return isinstance(atom, Var) and isinstance(atom.kind, (ParamAbs, ExplicitAbs))


def is_monomorphic(unit: UnitExpr) -> bool:
    """True when `unit` mentions no parametric (abstract) unit variables."""
    return not any(is_abstract(atom) for atom in iter_atoms(unit))


def is_rhs_atom(atom: Atom) -> bool:
    """Atoms that act as constants in the linear system: base units and explicit abstract variables."""
    if isinstance(atom, (BaseUnit, GeneratedUnit)):
        return True
    return isinstance(atom.kind, ExplicitAbs)


def bind_explicit(unit: UnitExpr, owner: str) -> UnitExpr:
    """Scope every explicit polymorphic variable in `unit` to `owner`."""

    def bind(atom: Atom) -> UnitExpr:
        if isinstance(atom, Var) and isinstance(atom.kind, ExplicitAbs):
            return Var(ExplicitAbs(atom.kind.alpha, owner))
        return atom

    return map_atoms(unit, bind)
