"""
Parser Module
Recursive-descent parser for the Fortran subset: program units, declarations,
statements, expressions and `!= unit` annotation comments.
"""

from __future__ import annotations

import logging

from frontend.annotations import is_unit_annotation, parse_annotation
from frontend.ast import (
    FUNCTION,
    MODULE,
    PROGRAM,
    SUBROUTINE,
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
    UseStatement,
)
from frontend.lexer import ANNOTATION, COMMENT, EOF, INT, NAME, NEWLINE, OP, REAL, Token, tokenize
from units.core import Span
from utils.errors import AnnotationError, ParseError

logger = logging.getLogger("Parser")

TYPE_NAMES = ("real", "integer")
UNIT_KINDS = (PROGRAM, MODULE, FUNCTION, SUBROUTINE)
RELATIONAL = ("==", "/=", "<", "<=", ">", ">=")
ATTRIBUTES = ("parameter", "intent", "save", "optional", "target")


class TokenStream:
    """Cursor over the token list with lookahead and expectation helpers."""

    def __init__(self, tokens: list[Token], file: str):
        self.tokens = tokens
        self.file = file
        self.pos = 0
        self.last = tokens[0]

    def peek(self, offset: int = 0) -> Token:
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != EOF:
            self.pos += 1
        self.last = token
        return token

    def at(self, *values: str, offset: int = 0) -> bool:
        token = self.peek(offset)
        return token.kind in (NAME, OP) and token.value in values

    def accept(self, value: str) -> Token | None:
        if self.at(value):
            return self.advance()
        return None

    def expect(self, value: str, what: str | None = None) -> Token:
        if not self.at(value):
            self.error(f"expected {what or repr(value)}")
        return self.advance()

    def expect_name(self, what: str = "a name") -> Token:
        if self.peek().kind != NAME:
            self.error(f"expected {what}")
        return self.advance()

    def at_line_end(self) -> bool:
        return self.peek().kind in (NEWLINE, COMMENT, ANNOTATION, EOF)

    def error(self, message: str, token: Token | None = None):
        token = token or self.peek()
        raise ParseError(message, self.file, token.line, token.col, str(token))


class Parser:
    def __init__(self, text: str, file: str):
        self.file = file
        self.stream = TokenStream(tokenize(text, file), file)
        self.arrays: list[set[str]] = [set()]
        self.diagnostics: list[str] = []

    # ========================================================================
    # HELPERS
    # ========================================================================

    def span(self, start: Token, end: Token | None = None) -> Span:
        end = end or self.stream.last
        return Span(self.file, start.line, start.col, end.end_line, end.end_col)

    def skip_blank_lines(self):
        while self.stream.peek().kind == NEWLINE:
            self.stream.advance()

    def comment_item(self, token: Token) -> CommentLine | AnnotationLine:
        span = self.span(token, token)
        if token.kind != ANNOTATION or not is_unit_annotation(token.text):
            return CommentLine(token.text, span)
        try:
            return AnnotationLine(token.text, span, parse_annotation(token.text))
        except AnnotationError as e:
            message = f"{self.file}:{span.line}:{span.col}: {e.message}"
            self.diagnostics.append(message)
            logger.warning(f"[PARSE] {message}")
            return AnnotationLine(token.text, span, None, e.message)

    def end_statement(self) -> list:
        """Consume the end of a statement line, returning a trailing comment item if present."""
        stream = self.stream
        items = []
        if stream.peek().kind in (COMMENT, ANNOTATION):
            items.append(self.comment_item(stream.advance()))
        if stream.peek().kind == EOF:
            return items
        if stream.peek().kind != NEWLINE:
            stream.error("expected end of statement")
        stream.advance()
        return items

    def at_comment_line(self) -> bool:
        return self.stream.peek().kind in (COMMENT, ANNOTATION)

    def take_comment_line(self):
        item = self.comment_item(self.stream.advance())
        self.end_statement()
        return item

    def is_array(self, name: str) -> bool:
        return any(name in scope for scope in self.arrays)

    # ========================================================================
    # SOURCE FILES AND PROGRAM UNITS
    # ========================================================================

    def parse_file(self) -> SourceFile:
        units = []
        pending = []
        while True:
            self.skip_blank_lines()
            if self.stream.peek().kind == EOF:
                break
            if self.at_comment_line():
                pending.append(self.take_comment_line())
                continue
            units.append(self.parse_program_unit(tuple(pending)))
            pending = []
        logger.debug(f"[PARSE] {self.file}: {len(units)} program unit(s)")
        return SourceFile(self.file, tuple(units), tuple(pending), tuple(self.diagnostics))

    def at_unit_header(self) -> bool:
        stream = self.stream
        if stream.at(*TYPE_NAMES) and stream.at(FUNCTION, offset=1):
            return True
        return stream.at(*UNIT_KINDS) and stream.peek(1).kind == NAME

    def parse_program_unit(self, leading: tuple) -> ProgramUnit:
        stream = self.stream
        start = stream.peek()
        if not self.at_unit_header():
            stream.error("expected 'program', 'module', 'function' or 'subroutine'")
        if stream.at(*TYPE_NAMES):
            stream.advance()
        kind = stream.advance().value
        name = stream.expect_name(f"{kind} name").value

        params: list[Entity] = []
        result = None
        if kind in (FUNCTION, SUBROUTINE) and stream.accept("("):
            if not stream.at(")"):
                while True:
                    token = stream.expect_name("parameter name")
                    params.append(Entity(token.value, self.span(token, token)))
                    if not stream.accept(","):
                        break
            stream.expect(")")
        if kind == FUNCTION and stream.accept("result"):
            stream.expect("(")
            result = stream.expect_name("result variable").value
            stream.expect(")")
        header_span = self.span(start)
        header_trailing = self.end_statement()

        self.arrays.append(set())
        spec, body = self.parse_unit_body(kind, header_trailing)
        contains, trailing = [], []
        if stream.accept("contains"):
            self.end_statement()
            contains, trailing = self.parse_contains()
        end_token = self.parse_unit_end(kind, name)
        self.arrays.pop()

        return ProgramUnit(
            kind=kind,
            name=name,
            span=header_span.to(self.span(end_token, end_token)),
            params=tuple(params),
            result=result,
            spec=tuple(spec),
            body=tuple(body),
            contains=tuple(contains),
            leading=leading,
            trailing=tuple(trailing),
        )

    def parse_unit_body(self, kind: str, spec: list) -> tuple[list, list]:
        stream = self.stream
        body: list = []
        in_spec = True
        while True:
            self.skip_blank_lines()
            if self.at_comment_line():
                (spec if in_spec else body).append(self.take_comment_line())
                continue
            if stream.peek().kind == EOF:
                stream.error(f"missing 'end' for {kind}")
            if self.at_end_keyword() or stream.at("contains"):
                return spec, body
            if in_spec and self.at_spec_statement():
                spec.extend(self.parse_spec_statement())
                continue
            if kind == MODULE:
                stream.error("executable statements are not allowed in a module specification part")
            in_spec = False
            body.extend(self.parse_statement())

    def parse_contains(self) -> tuple[list, list]:
        stream = self.stream
        units, pending = [], []
        while True:
            self.skip_blank_lines()
            if self.at_comment_line():
                pending.append(self.take_comment_line())
                continue
            if self.at_end_keyword():
                return units, pending
            if stream.peek().kind == EOF:
                stream.error("missing 'end' after 'contains'")
            units.append(self.parse_program_unit(tuple(pending)))
            pending = []

    def at_end_keyword(self) -> bool:
        stream = self.stream
        if stream.at("end"):
            return not stream.at("if", "do", offset=1)
        return stream.at(*(f"end{kind}" for kind in UNIT_KINDS))

    def parse_unit_end(self, kind: str, name: str) -> Token:
        stream = self.stream
        token = stream.advance()
        if token.value == "end":
            if stream.at(*UNIT_KINDS):
                if stream.peek().value != kind:
                    stream.error(f"expected 'end {kind}'")
                stream.advance()
            elif not stream.at_line_end():
                stream.error(f"expected 'end {kind}'")
        elif token.value != f"end{kind}":
            stream.error(f"expected 'end {kind}'", token)
        if stream.peek().kind == NAME:
            closing = stream.advance()
            if closing.value != name:
                stream.error(f"'end {kind}' names '{closing.value}', expected '{name}'", closing)
        end_token = stream.last
        self.end_statement()
        return end_token

    # ========================================================================
    # SPECIFICATION STATEMENTS
    # ========================================================================

    def at_spec_statement(self) -> bool:
        stream = self.stream
        if stream.at(*TYPE_NAMES):
            return not stream.at(FUNCTION, offset=1) and not stream.at("=", offset=1)
        if stream.at("dimension", "external", "use"):
            return not stream.at("=", "(", offset=1)
        return stream.at("implicit") and stream.at("none", offset=1)

    def parse_spec_statement(self) -> list:
        stream = self.stream
        start = stream.advance()
        keyword = start.value
        if keyword in TYPE_NAMES:
            item = self.parse_type_declaration(start)
        elif keyword == "dimension":
            stream.accept("::")
            entities = self.parse_entities(dims_required=True)
            item = DimensionDeclaration(tuple(entities), self.span(start))
        elif keyword == "external":
            stream.accept("::")
            entities = self.parse_entities(allow_init=False)
            item = ExternalDeclaration(tuple(entities), self.span(start))
        elif keyword == "use":
            module = stream.expect_name("module name").value
            item = UseStatement(module, self.span(start))
        else:
            stream.expect("none")
            item = ImplicitNone(self.span(start))
        return [item, *self.end_statement()]

    def parse_type_declaration(self, start: Token) -> TypeDeclaration:
        stream = self.stream
        type_name = start.value
        if stream.at("("):
            type_name += self.skip_parenthesized()
        attributes = []
        while stream.accept(","):
            attr = stream.expect_name("attribute")
            if attr.value == "dimension":
                stream.error("array bounds must be declared with 'dimension :: name(...)'", attr)
            if attr.value not in ATTRIBUTES:
                stream.error(f"unsupported attribute '{attr.text}'", attr)
            text = attr.value
            if stream.at("("):
                text += self.skip_parenthesized()
            attributes.append(text)
        stream.accept("::")
        entities = self.parse_entities(allow_init=True, dims_allowed=False)
        return TypeDeclaration(type_name, tuple(attributes), tuple(entities), self.span(start))

    def skip_parenthesized(self) -> str:
        """Consume a balanced `( ... )` group and return its text without spaces."""
        stream = self.stream
        depth = 0
        parts = []
        while True:
            token = stream.advance()
            if token.kind in (NEWLINE, EOF):
                stream.error("unbalanced parentheses", token)
            parts.append(token.text.lower())
            depth += token.text == "("
            depth -= token.text == ")"
            if depth == 0:
                return "".join(parts)

    def parse_entities(self, allow_init=False, dims_required=False, dims_allowed=True) -> list[Entity]:
        stream = self.stream
        entities = []
        while True:
            token = stream.expect_name("a variable name")
            name = token.value
            dims: tuple = ()
            if stream.at("("):
                if not dims_allowed:
                    stream.error("array bounds must be declared with 'dimension :: name(...)'")
                stream.advance()
                dims = tuple(self.parse_arguments())
                self.arrays[-1].add(name)
            elif dims_required:
                stream.error(f"expected array bounds for '{name}'")
            init = None
            if allow_init and stream.accept("="):
                init = self.parse_expression()
            entities.append(Entity(name, self.span(token, token), dims, init))
            if not stream.accept(","):
                return entities

    # ========================================================================
    # EXECUTABLE STATEMENTS
    # ========================================================================

    def parse_block(self) -> list:
        """Statements up to (not including) the next `else` / `end ...` line."""
        stream = self.stream
        items = []
        while True:
            self.skip_blank_lines()
            if self.at_comment_line():
                items.append(self.take_comment_line())
                continue
            if stream.peek().kind == EOF:
                stream.error("unexpected end of file inside a block")
            if stream.at("else", "elseif", "endif", "enddo", "end", "contains"):
                return items
            items.extend(self.parse_statement())

    def parse_statement(self) -> list:
        stream = self.stream
        start = stream.peek()
        if stream.at("if") and stream.at("(", offset=1):
            return [self.parse_if(stream.advance())]
        if stream.at("do") and stream.at("while", offset=1):
            return [self.parse_do_while(stream.advance())]
        if stream.at("do") and stream.peek(1).kind in (NAME, NEWLINE):
            stream.error("only 'do while' loops are supported")
        statement = self.parse_simple_statement()
        logger.debug(f"[PARSE] {type(statement).__name__} at {start.line}:{start.col}")
        return [statement, *self.end_statement()]

    def parse_simple_statement(self):
        stream = self.stream
        start = stream.peek()
        if stream.at("call") and stream.peek(1).kind == NAME:
            stream.advance()
            name = stream.advance().value
            args: list = []
            if stream.accept("("):
                args = self.parse_arguments()
            return CallStatement(name, tuple(args), self.span(start))
        if stream.at("return") and stream.peek(1).kind in (NEWLINE, COMMENT, ANNOTATION, EOF):
            stream.advance()
            return Return(self.span(start))
        if stream.peek().kind != NAME:
            stream.error("expected a statement")
        target_token = stream.advance()
        target: Name | Subscript = Name(target_token.value, self.span(target_token, target_token))
        if stream.accept("("):
            indices = self.parse_arguments()
            target = Subscript(target_token.value, tuple(indices), self.span(target_token))
        stream.expect("=", "'=' in assignment")
        value = self.parse_expression()
        return Assignment(target, value, self.span(start))

    def parse_if(self, start: Token, is_else_if: bool = False) -> IfBlock:
        stream = self.stream
        stream.expect("(")
        condition = self.parse_expression()
        stream.expect(")")
        if not stream.at("then"):
            # logical if: a single statement on the same line
            statement = self.parse_simple_statement()
            span = self.span(start)
            self.end_statement()
            return IfBlock(condition, (statement,), (), span, is_else_if)
        stream.advance()
        then_body = [*self.end_statement(), *self.parse_block()]
        else_body: list = []
        if stream.at("elseif") or (stream.at("else") and stream.at("if", offset=1)):
            else_start = stream.advance()
            if else_start.value == "else":
                stream.advance()
            nested = self.parse_if(else_start, is_else_if=True)
            span = Span(self.file, start.line, start.col, nested.span.end_line, nested.span.end_col)
            return IfBlock(condition, tuple(then_body), (nested,), span, is_else_if)
        if stream.accept("else"):
            else_body = [*self.end_statement(), *self.parse_block()]
        self.expect_block_end("if")
        span = self.span(start)
        self.end_statement()
        return IfBlock(condition, tuple(then_body), tuple(else_body), span, is_else_if)

    def parse_do_while(self, start: Token) -> DoWhile:
        stream = self.stream
        stream.expect("while")
        stream.expect("(")
        condition = self.parse_expression()
        stream.expect(")")
        body = [*self.end_statement(), *self.parse_block()]
        self.expect_block_end("do")
        span = self.span(start)
        self.end_statement()
        return DoWhile(condition, tuple(body), span)

    def expect_block_end(self, keyword: str):
        stream = self.stream
        if stream.accept(f"end{keyword}"):
            return
        if stream.at("end") and stream.at(keyword, offset=1):
            stream.advance()
            stream.advance()
            return
        stream.error(f"expected 'end {keyword}'")

    # ========================================================================
    # EXPRESSIONS
    # ========================================================================

    def parse_arguments(self) -> list:
        """Comma-separated expressions after an opening parenthesis, consuming the closing one."""
        stream = self.stream
        args = []
        if stream.accept(")"):
            return args
        while True:
            args.append(self.parse_expression())
            if stream.accept(")"):
                return args
            stream.expect(",", "',' or ')'")

    def parse_expression(self):
        stream = self.stream
        start = stream.peek()
        left = self.parse_additive()
        if stream.at(*RELATIONAL):
            op = stream.advance().value
            right = self.parse_additive()
            left = BinaryOp(op, left, right, self.span(start))
        return left

    def parse_additive(self):
        stream = self.stream
        start = stream.peek()
        left = self.parse_term()
        while stream.at("+", "-"):
            op = stream.advance().value
            right = self.parse_term()
            left = BinaryOp(op, left, right, self.span(start))
        return left

    def parse_term(self):
        stream = self.stream
        start = stream.peek()
        left = self.parse_factor()
        while stream.at("*", "/"):
            op = stream.advance().value
            right = self.parse_factor()
            left = BinaryOp(op, left, right, self.span(start))
        return left

    def parse_factor(self):
        stream = self.stream
        start = stream.peek()
        if stream.at("-", "+"):
            op = stream.advance().value
            operand = self.parse_factor()
            return UnaryOp(op, operand, self.span(start))
        base = self.parse_primary()
        if stream.accept("**"):
            exponent = self.parse_factor()
            return BinaryOp("**", base, exponent, self.span(start))
        return base

    def parse_primary(self):
        stream = self.stream
        token = stream.peek()
        if token.kind in (INT, REAL):
            stream.advance()
            return Literal(token.text, self.span(token, token))
        if token.kind == NAME:
            stream.advance()
            if stream.accept("("):
                args = tuple(self.parse_arguments())
                node = Subscript if self.is_array(token.value) else FunctionCall
                return node(token.value, args, self.span(token))
            return Name(token.value, self.span(token, token))
        if token.kind == OP and token.text == "(":
            stream.advance()
            inner = self.parse_expression()
            stream.expect(")")
            return inner
        if token.kind in (NEWLINE, EOF, COMMENT, ANNOTATION):
            stream.error("unexpected end of expression")
        stream.error("expected an expression")


def parse_source(text: str, file: str = "<input>") -> SourceFile:
    """Parse one source file; raises ParseError on the first syntax error."""
    return Parser(text, file).parse_file()


def parse_file(path: str) -> SourceFile:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    return parse_source(text, path)
