"""
Lexer Module
Splits free-form Fortran source into tokens with 1-based line/column positions
"""

from __future__ import annotations

import bisect
import logging
import re
from dataclasses import dataclass

from utils.errors import ParseError

logger = logging.getLogger("Lexer")

# ============================================================================
# TOKEN CATEGORIES
# ============================================================================

ANNOTATION = "ANNOTATION"
COMMENT = "COMMENT"
NEWLINE = "NEWLINE"
REAL = "REAL"
INT = "INT"
NAME = "NAME"
OP = "OP"
EOF = "EOF"

_TOKEN_SPEC = [
    ("CONT", r"&[ \t]*(?:![^\r\n]*)?(?:\r\n?|\n)(?:[ \t]*(?:\r\n?|\n))*[ \t]*&?"),
    (ANNOTATION, r"!=[^\r\n]*"),
    (COMMENT, r"![^\r\n]*"),
    (NEWLINE, r"\r\n?|\n|;"),
    (REAL, r"(?:\d+\.\d*|\.\d+)(?:[eEdD][+-]?\d+)?(?:_\w+)?|\d+[eEdD][+-]?\d+(?:_\w+)?"),
    (INT, r"\d+(?:_\w+)?"),
    (NAME, r"[A-Za-z][A-Za-z0-9_]*"),
    (OP, r"\*\*|==|/=|<=|>=|::|[-+*/=<>(),:]"),
    ("SKIP", r"[ \t]+"),
    ("MISMATCH", r"."),
]

TOKEN_REGEX = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    end_line: int
    end_col: int

    @property
    def value(self) -> str:
        """Case-folded text for names; literal text otherwise."""
        return self.text.lower() if self.kind == NAME else self.text

    def __str__(self) -> str:
        if self.kind == EOF:
            return "end of input"
        if self.kind == NEWLINE:
            return "end of line" if self.text != ";" else "';'"
        return self.text


class LineIndex:
    """Maps character offsets to 1-based (line, column) pairs."""

    def __init__(self, text: str):
        self.starts = [0]
        for match in re.finditer(r"\r\n?|\n", text):
            self.starts.append(match.end())

    def position(self, offset: int) -> tuple[int, int]:
        line = bisect.bisect_right(self.starts, offset) - 1
        return line + 1, offset - self.starts[line] + 1


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    """Tokenize `text`; the result always ends with a NEWLINE and an EOF token."""
    index = LineIndex(text)
    tokens: list[Token] = []

    for match in TOKEN_REGEX.finditer(text):
        kind = match.lastgroup
        if kind in ("SKIP", "CONT"):
            continue
        line, col = index.position(match.start())
        end_line, end_col = index.position(match.end())
        if kind == "MISMATCH":
            raise ParseError(f"unexpected character {match.group()!r}", file, line, col, match.group())
        tokens.append(Token(kind, match.group(), line, col, end_line, end_col))

    last_line, last_col = index.position(len(text))
    if not tokens or tokens[-1].kind != NEWLINE:
        tokens.append(Token(NEWLINE, "", last_line, last_col, last_line, last_col))
    tokens.append(Token(EOF, "", last_line, last_col, last_line, last_col))
    logger.debug(f"[LEX] {file}: {len(tokens)} tokens")
    return tokens
