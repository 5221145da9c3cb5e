"""Tokenizer for scene files and expressions."""

import math
import re
from dataclasses import dataclass

from ..errors import DslSyntaxError, UnknownCharacter

NUM, IDENT, OP, NEWLINE, EOF = "num", "ident", "op", "newline", "eof"

_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_OPS = set("+-*/^(),;:=[]")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    value: float = None

    def __repr__(self):
        return f"{self.kind} {self.text!r}" if self.kind != NUM else f"num {self.value!r}"


def tokenize(text):
    """Split ``text`` into tokens with 1-based line/column positions.

    ``#`` starts a comment running to the end of the line. Newlines are
    kept as tokens because scene statements are line-oriented.

    >>> [t.text for t in tokenize("sin(2*t)")][:-1]
    ['sin', '(', '2', '*', 't', ')']
    """
    tokens = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            tokens.append(Token(NEWLINE, "\n", line, col))
            line, col, i = line + 1, 1, i + 1
            continue
        if ch in " \t\r\f\v":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        m = _NUMBER.match(text, i)
        if m:
            value = float(m.group())
            if not math.isfinite(value):
                raise DslSyntaxError(f"number {m.group()!r} is not finite", line, col)
            tokens.append(Token(NUM, m.group(), line, col, value))
        else:
            m = _IDENT.match(text, i)
            if m:
                tokens.append(Token(IDENT, m.group(), line, col))
            elif ch in _OPS:
                tokens.append(Token(OP, ch, line, col))
                i, col = i + 1, col + 1
                continue
            else:
                raise UnknownCharacter(f"unknown character {ch!r}", line, col)
        i += len(m.group())
        col += len(m.group())
    tokens.append(Token(EOF, "", line, col))
    return tokens
