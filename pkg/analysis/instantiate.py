"""
Polymorphic instantiation: expands procedure templates at each call instance,
recursing down the call graph and cutting recursion at call-graph cycles.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass

from analysis.constraint_gen import IdSource, Template
from units.core import (
    Atom,
    Constraint,
    ExplicitAbs,
    ExplicitUse,
    ParamAbs,
    ParamUse,
    Provenance,
    UnitExpr,
    Var,
    constraint_atoms,
    map_atoms,
    map_constraint,
)
from utils.errors import MissingDefinition

logger = logging.getLogger("Instantiate")


@dataclass(frozen=True)
class Instance:
    """A procedure at one call site; `call_id` None stands for the abstract template itself."""

    fs: str
    call_id: int | None


def _instantiate_atom(atom: Atom, call_id: int) -> UnitExpr:
    if isinstance(atom, Var):
        kind = atom.kind
        if isinstance(kind, ParamAbs):
            return Var(ParamUse(kind.fs, kind.slot, call_id))
        if isinstance(kind, ExplicitAbs):
            return Var(ExplicitUse(kind.alpha, kind.owner, call_id))
    return atom


def instantiate(unit: UnitExpr, call_id: int) -> UnitExpr:
    """Rewrite abstract units to their uses at `call_id`; all other atoms are unchanged."""
    return map_atoms(unit, lambda atom: _instantiate_atom(atom, call_id))


def instantiate_constraint(constraint: Constraint, call_id: int) -> Constraint:
    return map_constraint(constraint, lambda atom: _instantiate_atom(atom, call_id))


def _call_ids(constraints) -> list[int]:
    ids = set()
    for constraint in constraints:
        for atom in constraint_atoms(constraint):
            if isinstance(atom, Var) and isinstance(atom.kind, (ParamUse, ExplicitUse)) and atom.kind.call_id:
                ids.add(atom.kind.call_id)
    return sorted(ids)


def find_instances(constraints, exclude: Instance | None = None) -> list[Instance]:
    """Call instances mentioned by ParamUse atoms, ordered by call id then name."""
    found = set()
    for constraint in constraints:
        for atom in constraint_atoms(constraint):
            if isinstance(atom, Var) and isinstance(atom.kind, ParamUse):
                found.add(Instance(atom.kind.fs, atom.kind.call_id))
    found.discard(exclude)
    return sorted(found, key=lambda inst: (inst.call_id, inst.fs))


def _slots_of(constraints, inst: Instance) -> list:
    slots = set()
    for constraint in constraints:
        for atom in constraint_atoms(constraint):
            kind = getattr(atom, "kind", None)
            if isinstance(kind, ParamUse) and kind.fs == inst.fs and kind.call_id == inst.call_id:
                slots.add(kind.slot)
    return sorted(slots, key=lambda slot: (isinstance(slot, str), str(slot) if isinstance(slot, str) else slot))


class Expander:
    """Expands instances against a template map, drawing fresh call ids from `ids`."""

    def __init__(self, templates: Mapping[str, Template], ids: IdSource):
        self.templates = templates
        self.ids = ids
        self.expanded_external: set[str] = set()
        self.expansions = 0

    def subst_instance(self, inst: Instance, chain: tuple[Instance, ...] = ()) -> list[Constraint]:
        template = self.templates.get(inst.fs)
        if template is None:
            raise MissingDefinition(inst.fs)
        self.expansions += 1
        body = list(template.constraints)

        if inst.call_id is not None:
            remap = {old: self.ids.next_call() for old in _call_ids(body)}

            def rename(atom: Atom) -> UnitExpr:
                if isinstance(atom, Var) and isinstance(atom.kind, ParamUse) and atom.kind.call_id in remap:
                    kind = atom.kind
                    return Var(ParamUse(kind.fs, kind.slot, remap[kind.call_id]))
                return _instantiate_atom(atom, inst.call_id)

            body = [map_constraint(c, rename) for c in body]

        out = list(body)
        chain = (*chain, inst)
        for inner in find_instances(body, exclude=inst):
            out.extend(self.expand(inner, chain, body))
        return out

    def expand(self, inst: Instance, chain: tuple[Instance, ...], context=()) -> list[Constraint]:
        ancestor = next((a for a in reversed(chain) if a.fs == inst.fs), None)
        if ancestor is not None:
            return self.cut_cycle(inst, ancestor, context)
        if inst.call_id == 0:
            if inst.fs in self.expanded_external or inst.fs not in self.templates:
                return []
            self.expanded_external.add(inst.fs)
        return self.subst_instance(inst, chain)

    @staticmethod
    def cut_cycle(inst: Instance, ancestor: Instance, context) -> list[Constraint]:
        """Identify a recursive call's units with those of the enclosing instance."""
        span = _call_site_span(context, inst)
        if span is None:
            return []
        out = []
        provenance = Provenance(span, "recursive-call")
        for slot in _slots_of(context, inst):
            use = Var(ParamUse(inst.fs, slot, inst.call_id))
            if ancestor.call_id is None:
                outer = Var(ParamAbs(inst.fs, slot))
            else:
                outer = Var(ParamUse(inst.fs, slot, ancestor.call_id))
            out.append(Constraint(use, outer, provenance))
        logger.debug(f"[INST] cycle at {inst.fs}@{inst.call_id}: {len(out)} slot(s) identified")
        return out


def _call_site_span(constraints, inst: Instance):
    """Span of the first constraint that mentions the call; None when the call is absent."""
    for constraint in constraints:
        for atom in constraint_atoms(constraint):
            kind = getattr(atom, "kind", None)
            if isinstance(kind, ParamUse) and kind.fs == inst.fs and kind.call_id == inst.call_id:
                return constraint.provenance.span
    return None


def subst_instance(templates: Mapping[str, Template], inst: Instance, ids: IdSource) -> list[Constraint]:
    return Expander(templates, ids).subst_instance(inst)


def expand_instances(
    constraints,
    templates: Mapping[str, Template],
    ids: IdSource,
    expander: Expander | None = None,
) -> list[Constraint]:
    """Constraints generated by expanding every call instance mentioned in `constraints`."""
    expander = expander or Expander(templates, ids)
    out: list[Constraint] = []
    for inst in find_instances(constraints):
        out.extend(expander.expand(inst, ()))
    return out


def expand_template(templates: Mapping[str, Template], fs: str, ids: IdSource, expander: Expander | None = None):
    """The abstract template of `fs` together with the expansions of the calls it makes."""
    expander = expander or Expander(templates, ids)
    return expander.subst_instance(Instance(fs, None))
