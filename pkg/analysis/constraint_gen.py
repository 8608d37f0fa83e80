"""
Constraint Generation Module
Walks the syntax tree and produces unit equality constraints, per-procedure
templates and module-map entries.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

from analysis.environment import (
    ARRAY,
    EXTERNAL,
    INTEGER,
    PROCEDURE,
    REAL,
    EnvEntry,
    TypeEnv,
    polycontext,
    variable_atom,
)
from frontend.ast import (
    FUNCTION,
    MODULE,
    PROGRAM,
    AnnotationLine,
    Assignment,
    BinaryOp,
    CallStatement,
    CommentLine,
    DimensionDeclaration,
    DoWhile,
    Entity,
    ExternalDeclaration,
    FunctionCall,
    IfBlock,
    ImplicitNone,
    Literal,
    Name,
    ProgramUnit,
    Return,
    SourceFile,
    Subscript,
    TypeDeclaration,
    UnaryOp,
    UnitSpec,
    UseStatement,
)
from units.core import (
    UNITLESS,
    Constraint,
    LitOrVar,
    ParamAbs,
    ParamUse,
    Power,
    Product,
    Provenance,
    Span,
    UnitExpr,
    Var,
    bind_explicit,
    constraint_atoms,
    div,
    is_monomorphic,
)
from utils.errors import (
    AnalysisError,
    ArityMismatch,
    MissingDefinition,
    UndeclaredIdentifier,
    UnsupportedConstruct,
)
from utils.helpers import get_best_suggestions

logger = logging.getLogger("Constraints")

# ============================================================================
# RESULT TYPES
# ============================================================================


class IdSource:
    """Global counters for call ids (from 1; 0 is reserved for external calls) and literal ids."""

    def __init__(self):
        self.call = 0
        self.literal = 0

    def next_call(self) -> int:
        self.call += 1
        return self.call

    def next_literal(self) -> str:
        self.literal += 1
        return f"#{self.literal}"


@dataclass(frozen=True)
class Template:
    """Stored constraints of a procedure: body constraints plus parameter links."""

    name: str
    kind: str
    arity: int
    body: tuple[Constraint, ...] = ()
    links: tuple[Constraint, ...] = ()
    origin: str = ""
    variadic: bool = False

    @property
    def first_slot(self) -> int:
        return 0 if self.kind == FUNCTION else 1

    @property
    def constraints(self) -> tuple[Constraint, ...]:
        return self.body + self.links

    def entry(self, scope: str = "") -> EnvEntry:
        return EnvEntry(
            self.name, PROCEDURE, scope=scope, arity=self.arity, variadic=self.variadic, procedure_kind=self.kind
        )


@dataclass(frozen=True)
class Declaration:
    """A named unit unknown that reports can print: variable, parameter or function result."""

    name: str
    scope: str
    atom: Var
    span: Span
    role: str
    statement_line: int
    function: str | None = None
    annotated: bool = False

    @property
    def file(self) -> str:
        return self.span.file


@dataclass
class ModuleEntry:
    """Module-map entry: module-variable constraints and the templates of contained procedures."""

    name: str
    kind: str
    file: str
    constraints: list[Constraint] = field(default_factory=list)
    templates: dict[str, Template] = field(default_factory=dict)
    declarations: list[Declaration] = field(default_factory=list)
    variables: dict[str, EnvEntry] = field(default_factory=dict)
    uses: tuple[str, ...] = ()
    origin: str = "source"

    def procedure_entries(self) -> list[EnvEntry]:
        return [template.entry(self.name) for template in self.templates.values()]


# ============================================================================
# GENERATOR
# ============================================================================


def _is_literal_expr(expr) -> bool:
    if isinstance(expr, UnaryOp) and expr.op in ("-", "+"):
        return _is_literal_expr(expr.operand)
    return isinstance(expr, Literal)


def _literal_of(expr) -> Literal:
    while isinstance(expr, UnaryOp):
        expr = expr.operand
    return expr


def _integer_exponent(expr) -> int | None:
    sign = 1
    while isinstance(expr, UnaryOp) and expr.op in ("-", "+"):
        sign = -sign if expr.op == "-" else sign
        expr = expr.operand
    if isinstance(expr, Literal) and expr.is_integer:
        return sign * int(expr.text.split("_")[0])
    return None


class ConstraintGenerator:
    """Implements the constraint rules for one analysis run.

    `modules` maps names of modules available to `use` (from source or summaries) to their
    entries; `intrinsics` maps intrinsic names to templates and is consulted only for
    names absent from the environment.
    """

    def __init__(
        self,
        ids: IdSource | None = None,
        modules: Mapping[str, ModuleEntry] | None = None,
        intrinsics: Mapping[str, Template] | None = None,
    ):
        self.ids = ids or IdSource()
        self.modules = modules if modules is not None else {}
        self.intrinsics = intrinsics or {}
        self.declarations: list[Declaration] = []
        self._annotated: set[tuple[str, str]] = set()
        self._scope_annotations: dict[str, UnitExpr] = {}
        self._declared: set[tuple[str, str]] = set()
        self._procedure = ""
        self._owner = ""

    # ========================================================================
    # HELPERS
    # ========================================================================

    @staticmethod
    def _constraint(lhs: UnitExpr, rhs: UnitExpr, span: Span, reason: str) -> Constraint:
        return Constraint(lhs, rhs, Provenance(span, reason))

    def _undeclared(self, env: TypeEnv, name: str, span: Span) -> UndeclaredIdentifier:
        return UndeclaredIdentifier(name, span, get_best_suggestions(name, env.variable_names()))

    # ========================================================================
    # EXPRESSIONS
    # ========================================================================

    def gen_literal(self, env: TypeEnv, literal: Literal) -> UnitExpr:
        fs = env.current_function
        in_poly = fs is not None and polycontext(fs, env)
        if in_poly and literal.is_zero:
            return Var(ParamAbs(fs, self.ids.next_literal()))
        if in_poly:
            return UNITLESS
        return Var(LitOrVar(self.ids.next_literal()))

    def gen_expr(self, env: TypeEnv, expr) -> tuple[UnitExpr, list[Constraint]]:
        if isinstance(expr, Literal):
            return self.gen_literal(env, expr), []

        if isinstance(expr, Name):
            entry = env.lookup(expr.name)
            if entry is None:
                raise self._undeclared(env, expr.name, expr.span)
            if not entry.is_variable:
                raise UnsupportedConstruct(f"'{expr.name}' is a procedure and cannot be used as a value", expr.span)
            return entry.unit, []

        if isinstance(expr, UnaryOp):
            return self.gen_expr(env, expr.operand)

        if isinstance(expr, BinaryOp):
            return self.gen_binary(env, expr)

        if isinstance(expr, Subscript):
            return self.gen_subscript(env, expr.name, expr.indices, expr.span)

        if isinstance(expr, FunctionCall):
            entry = env.lookup(expr.name)
            if entry is not None and entry.kind == ARRAY:
                return self.gen_subscript(env, expr.name, expr.args, expr.span)
            if entry is not None and entry.is_variable:
                raise UnsupportedConstruct(f"'{expr.name}' is not an array or function", expr.span)
            result, constraints = self.gen_call(env, expr.name, expr.args, expr.span, result_slot=True)
            return result, constraints

        raise UnsupportedConstruct(f"unsupported expression {type(expr).__name__}", getattr(expr, "span", None))

    def gen_binary(self, env: TypeEnv, expr: BinaryOp) -> tuple[UnitExpr, list[Constraint]]:
        u1, c1 = self.gen_expr(env, expr.left)
        if expr.op == "**":
            exponent = _integer_exponent(expr.right)
            if exponent is None:
                raise UnsupportedConstruct("exponent of '**' must be an integer literal", expr.right.span)
            return Power(u1, exponent), c1

        u2, c2 = self.gen_expr(env, expr.right)
        constraints = c1 + c2
        if expr.op in ("+", "-"):
            constraints.append(self._constraint(u1, u2, expr.span, "addition-operands"))
            return u1, constraints
        if expr.op == "*":
            return Product(u1, u2), constraints
        if expr.op == "/":
            return div(u1, u2), constraints
        constraints.append(self._constraint(u1, u2, expr.span, "comparison-operands"))
        return UNITLESS, constraints

    def gen_subscript(self, env: TypeEnv, name: str, indices, span: Span) -> tuple[UnitExpr, list[Constraint]]:
        entry = env.lookup(name)
        if entry is None:
            raise self._undeclared(env, name, span)
        constraints: list[Constraint] = []
        for index in indices:
            unit, cs = self.gen_expr(env, index)
            constraints.extend(cs)
            if unit != UNITLESS:
                constraints.append(self._constraint(unit, UNITLESS, index.span, "array-index"))
        return entry.unit, constraints

    def resolve_procedure(self, env: TypeEnv, name: str, span: Span) -> tuple[EnvEntry, bool]:
        """Callee entry and whether the call is external (shared call id 0)."""
        entry = env.lookup(name)
        if entry is not None and entry.kind == EXTERNAL:
            return entry, True
        if entry is not None and entry.kind == PROCEDURE:
            return entry, False
        if entry is None and name in self.intrinsics:
            return self.intrinsics[name].entry("intrinsic"), False
        if entry is not None:
            raise UnsupportedConstruct(f"'{name}' is not a procedure", span)
        raise MissingDefinition(name, span)

    def gen_call(self, env: TypeEnv, name: str, args, span: Span, result_slot: bool):
        entry, external = self.resolve_procedure(env, name, span)
        if entry.arity is not None:
            too_few = len(args) < entry.arity
            if (entry.variadic and too_few) or (not entry.variadic and len(args) != entry.arity):
                raise ArityMismatch(name, entry.arity, len(args), span)

        call_id = 0 if external else self.ids.next_call()
        constraints: list[Constraint] = []
        for j, arg in enumerate(args, start=1):
            unit, cs = self.gen_expr(env, arg)
            constraints.extend(cs)
            constraints.append(self._constraint(unit, Var(ParamUse(name, j, call_id)), arg.span, "call-argument"))
            if entry.variadic and j >= 2:
                constraints.append(
                    self._constraint(
                        Var(ParamUse(name, j, call_id)), Var(ParamUse(name, 1, call_id)), arg.span, "variadic-argument"
                    )
                )
        logger.debug(f"[GEN] call {name}@{call_id} with {len(args)} argument(s)")
        result = Var(ParamUse(name, 0, call_id)) if result_slot else UNITLESS
        return result, constraints

    # ========================================================================
    # STATEMENTS
    # ========================================================================

    def _literal_exception_applies(self, target_unit: UnitExpr, acc: list[Constraint]) -> bool:
        if not (isinstance(target_unit, Var) and isinstance(target_unit.kind, LitOrVar)):
            return False
        annotated = self._scope_annotations.get(target_unit.kind.ident)
        if annotated is not None and not is_monomorphic(annotated):
            return False
        for constraint in acc:
            if target_unit in constraint_atoms(constraint) and not (
                is_monomorphic(constraint.lhs) and is_monomorphic(constraint.rhs)
            ):
                return False
        return True

    def gen_assignment(self, env: TypeEnv, acc: list[Constraint], target_unit: UnitExpr, value, span: Span):
        if _is_literal_expr(value):
            literal = _literal_of(value)
            if literal.is_zero:
                return []
            if self._literal_exception_applies(target_unit, acc):
                return []
        unit, constraints = self.gen_expr(env, value)
        constraints.append(self._constraint(target_unit, unit, span, "assignment"))
        return constraints

    def gen_stmt(self, env: TypeEnv, acc: list[Constraint], stmt) -> list[Constraint]:
        """Constraints contributed by one statement; `acc` holds those generated so far."""
        if isinstance(stmt, Assignment):
            target = stmt.target
            if isinstance(target, Subscript):
                target_unit, constraints = self.gen_subscript(env, target.name, target.indices, target.span)
            else:
                entry = env.lookup(target.name)
                if entry is None:
                    raise self._undeclared(env, target.name, target.span)
                if not entry.is_variable:
                    raise UnsupportedConstruct(f"cannot assign to procedure '{target.name}'", target.span)
                target_unit, constraints = entry.unit, []
            return constraints + self.gen_assignment(env, acc + constraints, target_unit, stmt.value, stmt.span)

        if isinstance(stmt, CallStatement):
            _, constraints = self.gen_call(env, stmt.name, stmt.args, stmt.span, result_slot=False)
            return constraints

        if isinstance(stmt, IfBlock):
            unit, constraints = self.gen_expr(env, stmt.condition)
            if unit != UNITLESS:
                constraints.append(self._constraint(unit, UNITLESS, stmt.condition.span, "if-condition"))
            constraints.extend(self.gen_statements(env, acc + constraints, stmt.then_body))
            constraints.extend(self.gen_statements(env, acc + constraints, stmt.else_body))
            return constraints

        if isinstance(stmt, DoWhile):
            _, constraints = self.gen_expr(env, stmt.condition)
            constraints.extend(self.gen_statements(env, acc + constraints, stmt.body))
            return constraints

        if isinstance(stmt, AnnotationLine):
            return self.gen_annotation(env, stmt)

        if isinstance(stmt, (CommentLine, Return)):
            return []

        raise UnsupportedConstruct(f"unsupported statement {type(stmt).__name__}", getattr(stmt, "span", None))

    def gen_statements(self, env: TypeEnv, acc: list[Constraint], statements) -> list[Constraint]:
        out: list[Constraint] = []
        for stmt in statements:
            out.extend(self.gen_stmt(env, acc + out, stmt))
        return out

    # ========================================================================
    # BLOCKS: DECLARATIONS AND ANNOTATIONS
    # ========================================================================

    def gen_annotation(self, env: TypeEnv, line: AnnotationLine) -> list[Constraint]:
        if not isinstance(line.annotation, UnitSpec):
            return []
        unit = bind_explicit(line.annotation.unit, self._owner)
        constraints = []
        for name in line.annotation.names:
            entry = env.lookup(name)
            if entry is None or not entry.is_variable:
                raise AnalysisError(f"unit annotation names undeclared variable '{name}'", line.span)
            constraints.append(self._constraint(entry.unit, unit, line.span, "annotation"))
        return constraints

    @staticmethod
    def _names_declared(env: TypeEnv, spec: UnitSpec) -> bool:
        return all((entry := env.lookup(name)) is not None and entry.is_variable for name in spec.names)

    def gen_block(self, env: TypeEnv, acc: list[Constraint], items, scope: str, polymorphic: bool, role_of=None):
        """Thread the environment and constraints through a specification block.

        Annotations naming variables that are declared later in the block are applied once the
        block's declarations are complete.
        """
        out: list[Constraint] = []
        deferred: list[AnnotationLine] = []
        for item in items:
            if isinstance(item, AnnotationLine):
                if isinstance(item.annotation, UnitSpec) and self._names_declared(env, item.annotation):
                    out.extend(self.gen_annotation(env, item))
                elif isinstance(item.annotation, UnitSpec):
                    deferred.append(item)
            elif isinstance(item, (CommentLine, ImplicitNone, UseStatement)):
                continue
            elif isinstance(item, TypeDeclaration):
                kind = INTEGER if item.type_name.startswith(INTEGER) else REAL
                for entity in item.entities:
                    env = self.declare(env, entity, kind, scope, polymorphic, item.span.line, role_of)
                    if entity.init is not None:
                        target = env.lookup(entity.name).unit
                        out.extend(self.gen_assignment(env, acc + out, target, entity.init, entity.span))
            elif isinstance(item, DimensionDeclaration):
                for entity in item.entities:
                    env = self.declare(env, entity, ARRAY, scope, polymorphic, item.span.line, role_of)
                    for dim in entity.dims:
                        _, cs = self.gen_expr(env, dim)
                        out.extend(cs)
            elif isinstance(item, ExternalDeclaration):
                for entity in item.entities:
                    env = env.extend(EnvEntry(entity.name, EXTERNAL, scope=scope))
            else:
                raise UnsupportedConstruct(f"unsupported declaration {type(item).__name__}", item.span)
        for line in deferred:
            out.extend(self.gen_annotation(env, line))
        return env, out

    def record(self, name: str, scope: str, atom: Var, span: Span, role: str, statement_line: int):
        if (scope, name) in self._declared:
            return
        self._declared.add((scope, name))
        self.declarations.append(
            Declaration(
                name,
                scope,
                atom,
                span,
                role,
                statement_line,
                self._procedure or None,
                (scope, name) in self._annotated,
            )
        )

    def declare(self, env, entity: Entity, kind, scope, polymorphic, statement_line, role_of=None) -> TypeEnv:
        existing = env.lookup(entity.name)
        if existing is not None and existing.scope == scope and existing.is_variable:
            unit = existing.unit
            kind = ARRAY if ARRAY in (kind, existing.kind) else kind
        else:
            unit = variable_atom(scope, entity.name, polymorphic)
        role = role_of(entity.name) if role_of else "variable"
        self.record(entity.name, scope, unit, entity.span, role, statement_line)
        return env.extend(EnvEntry(entity.name, kind, unit, scope))

    def _collect_annotated(self, scope: str, items) -> None:
        self._scope_annotations = {}
        for item in items:
            if isinstance(item, AnnotationLine) and isinstance(item.annotation, UnitSpec):
                for name in item.annotation.names:
                    self._annotated.add((scope, name))
                    self._scope_annotations[f"{scope}/{name}"] = item.annotation.unit

    # ========================================================================
    # PROGRAM UNITS
    # ========================================================================

    def use_module(self, env: TypeEnv, module: str, span: Span, seen: set[str] | None = None) -> TypeEnv:
        seen = seen if seen is not None else set()
        if module in seen:
            return env
        seen.add(module)
        entry = self.modules.get(module)
        if entry is None:
            raise AnalysisError(f"module '{module}' not found (no source or summary on the search path)", span)
        for used in entry.uses:
            env = self.use_module(env, used, span, seen)
        env = env.extend(*entry.variables.values())
        return env.extend(*entry.procedure_entries())

    def gen_program_unit(self, unit: ProgramUnit, file: str, env: TypeEnv | None = None) -> ModuleEntry:
        """Module-map entry for a program or module, including contained procedure templates."""
        if unit.kind not in (PROGRAM, MODULE):
            raise UnsupportedConstruct(f"{unit.kind} '{unit.name}' must be contained in a module or program", unit.span)
        env = env or TypeEnv()
        scope = unit.name
        self._procedure = ""
        self._owner = scope
        entry = ModuleEntry(unit.name, unit.kind, file, uses=tuple(unit.uses()))
        first_declaration = len(self.declarations)

        for item in unit.spec:
            if isinstance(item, UseStatement):
                env = self.use_module(env, item.module, item.span)

        self._collect_annotated(scope, (*unit.leading, *unit.spec, *unit.body))
        env, constraints = self.gen_block(env, [], (*unit.leading, *unit.spec), scope, polymorphic=False)
        for decl in self.declarations[first_declaration:]:
            entry.variables[decl.name] = env.lookup(decl.name)

        procedures = []
        for inner in unit.contains:
            if any(p.name == inner.name for p in procedures):
                raise AnalysisError(f"duplicate procedure '{inner.name}' in {unit.kind} '{unit.name}'", inner.span)
            procedures.append(
                EnvEntry(inner.name, PROCEDURE, scope=scope, arity=len(inner.params), procedure_kind=inner.kind)
            )
        env = env.extend(*procedures)

        if unit.kind == PROGRAM:
            constraints.extend(self.gen_statements(env, constraints, unit.body))

        for inner in unit.contains:
            entry.templates[inner.name] = self.gen_procedure(env, inner, origin=unit.name)
            self._procedure = ""
            self._owner = scope

        entry.constraints = constraints
        entry.declarations = self.declarations[first_declaration:]
        logger.info(
            f"[GEN] {unit.kind} '{unit.name}': {len(constraints)} constraint(s), {len(entry.templates)} template(s)"
        )
        return entry

    def gen_procedure(self, env: TypeEnv, proc: ProgramUnit, origin: str = "") -> Template:
        fs = proc.name
        if proc.contains:
            raise UnsupportedConstruct(f"procedures contained in '{fs}' are not supported", proc.span)
        polymorphic = proc.kind == FUNCTION or bool(proc.params)
        self._procedure = fs
        self._owner = fs
        result = proc.result_name
        params = [p.name for p in proc.params]
        if len(set(params)) != len(params):
            raise AnalysisError(f"duplicate parameter names in '{fs}'", proc.span)

        def role_of(name: str) -> str:
            if name == result:
                return "result"
            return "parameter" if name in params else "variable"

        self._collect_annotated(fs, (*proc.leading, *proc.spec, *proc.body))
        if result is not None and (fs, result) in self._annotated:
            self._annotated.add((fs, fs))
        header = Span(proc.span.file, proc.span.line, proc.span.col, proc.span.line, proc.span.col)

        slots: list[tuple[int, EnvEntry]] = []
        if result is not None:
            atom = Var(ParamAbs(fs, result))
            slots.append((0, EnvEntry(result, REAL, atom, fs)))
            # results are reported under the function name at the function statement
            self.record(fs, fs, atom, header, "result", proc.span.line)
            self._declared.add((fs, result))
        for j, param in enumerate(proc.params, start=1):
            slots.append((j, EnvEntry(param.name, REAL, variable_atom(fs, param.name, polymorphic), fs)))
        env = env.extend(*(entry for _, entry in slots))

        env, body = self.gen_block(env, [], (*proc.leading, *proc.spec), fs, polymorphic, role_of)
        body.extend(self.gen_statements(env, body, proc.body))

        for param in proc.params:
            self.record(param.name, fs, env.lookup(param.name).unit, param.span, "parameter", proc.span.line)

        links = tuple(
            self._constraint(entry.unit, Var(ParamAbs(fs, j)), proc.span, "parameter-link") for j, entry in slots
        )
        logger.debug(f"[GEN] template {fs}: {len(body)} body constraint(s), {len(links)} link(s)")
        return Template(fs, proc.kind, len(proc.params), tuple(body), links, origin)


def generate_file(source: SourceFile, generator: ConstraintGenerator) -> list[ModuleEntry]:
    """Module-map entries for every program unit in `source`, in file order."""
    return [generator.gen_program_unit(unit, source.path) for unit in source.units]
