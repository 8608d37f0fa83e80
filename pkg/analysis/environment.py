"""
Type environment: an ordered sequence of entries where later entries shadow earlier ones.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from units.core import UNITLESS, LitOrVar, ParamAbs, UnitExpr, Var

REAL = "real"
INTEGER = "integer"
ARRAY = "array"
EXTERNAL = "external"
PROCEDURE = "procedure"

VARIABLE_KINDS = (REAL, INTEGER, ARRAY)


@dataclass(frozen=True)
class EnvEntry:
    name: str
    kind: str
    unit: UnitExpr = UNITLESS
    scope: str = ""
    arity: int | None = None
    variadic: bool = False
    procedure_kind: str | None = None

    @property
    def is_param_entry(self) -> bool:
        """Entries whose unit is an abstract parameter unit mark a polymorphic scope."""
        return isinstance(self.unit, Var) and isinstance(self.unit.kind, ParamAbs)

    @property
    def is_variable(self) -> bool:
        return self.kind in VARIABLE_KINDS


class TypeEnv:
    """Immutable ordered environment; `extend` returns a new environment."""

    __slots__ = ("entries", "_index", "_last_param")

    def __init__(self, entries: tuple[EnvEntry, ...] = ()):
        self.entries = entries
        self._index: dict[str, EnvEntry] = {}
        self._last_param: str | None = None
        for entry in entries:
            self._index[entry.name] = entry
            if entry.is_param_entry:
                self._last_param = entry.unit.kind.fs

    def extend(self, *entries: EnvEntry) -> TypeEnv:
        env = TypeEnv.__new__(TypeEnv)
        env.entries = self.entries + entries
        env._index = dict(self._index)
        env._last_param = self._last_param
        for entry in entries:
            env._index[entry.name] = entry
            if entry.is_param_entry:
                env._last_param = entry.unit.kind.fs
        return env

    def lookup(self, name: str) -> EnvEntry | None:
        return self._index.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __iter__(self) -> Iterator[EnvEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def names(self) -> list[str]:
        return list(self._index)

    def variable_names(self) -> list[str]:
        return [name for name, entry in self._index.items() if entry.is_variable]

    @property
    def current_function(self) -> str | None:
        """Procedure owning the most recent parameter entry, if any."""
        return self._last_param


def polycontext(fs: str, env: TypeEnv) -> bool:
    """True iff `fs` owns a parameter entry and no other procedure's parameter entry follows it."""
    return env.current_function == fs


def current_function(env: TypeEnv) -> str | None:
    return env.current_function


def variable_atom(scope: str, name: str, polymorphic: bool) -> Var:
    """Unit unknown of a variable declared in `scope`."""
    if polymorphic:
        return Var(ParamAbs(scope, name))
    return Var(LitOrVar(f"{scope}/{name}"))
