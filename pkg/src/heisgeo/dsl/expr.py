"""Expression AST, recursive-descent parser, pretty-printer and jet evaluator.

Precedence from loosest to tightest: ``+ -``, ``* /``, unary ``-``, ``^``.
``^`` is right-associative and binds tighter than unary minus, so ``-t^2``
is ``-(t^2)`` and ``2^-1`` is ``2^(-1)``.
"""

import math
from dataclasses import dataclass, field

from ..errors import DomainError, DslSyntaxError, UnboundIdentifier
from ..numerics import jet as _jet
from ..numerics.jet import Jet
from .lexer import EOF, IDENT, NUM, OP, tokenize

MAX_DEPTH = 200    # height of the finished tree
MAX_NESTING = 100  # parser recursion: parentheses, calls, prefix signs, exponents

FUNCTIONS = {
    "sin": _jet.sin, "cos": _jet.cos, "tan": _jet.tan, "exp": _jet.exp,
    "log": _jet.log, "sqrt": _jet.sqrt, "abs": _jet.jabs,
}
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Num:
    value: float
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Name:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: object
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: object
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def at(self, kind, text=None):
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def accept(self, kind, text=None):
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind, text=None, what=None):
        tok = self.peek()
        if self.at(kind, text):
            return self.next()
        wanted = what or (repr(text) if text else kind)
        found = "end of input" if tok.kind == EOF else ("end of line" if tok.kind == "newline" else repr(tok.text))
        raise DslSyntaxError(f"expected {wanted}, found {found}", tok.line, tok.col)


class _Parser:
    def __init__(self, stream):
        self.ts = stream
        self.depth = 0

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            tok = self.ts.peek()
            raise DslSyntaxError(f"expression nested deeper than {MAX_NESTING}", tok.line, tok.col)

    def expr(self):
        self._enter()
        node = self.term()
        while self.ts.at(OP, "+") or self.ts.at(OP, "-"):
            tok = self.ts.next()
            node = BinOp(tok.text, node, self.term(), tok.line, tok.col)
        self.depth -= 1
        return node

    def term(self):
        node = self.unary()
        while self.ts.at(OP, "*") or self.ts.at(OP, "/"):
            tok = self.ts.next()
            node = BinOp(tok.text, node, self.unary(), tok.line, tok.col)
        return node

    def unary(self):
        tok = self.ts.accept(OP, "-")
        if tok:
            self._enter()
            node = Neg(self.unary(), tok.line, tok.col)
            self.depth -= 1
            return node
        if self.ts.accept(OP, "+"):
            self._enter()
            node = self.unary()
            self.depth -= 1
            return node
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.ts.accept(OP, "^")
        if tok:
            self._enter()
            node = BinOp("^", base, self.unary(), tok.line, tok.col)
            self.depth -= 1
            return node
        return base

    def atom(self):
        tok = self.ts.peek()
        if tok.kind == NUM:
            self.ts.next()
            return Num(tok.value, tok.line, tok.col)
        if tok.kind == IDENT:
            self.ts.next()
            if self.ts.at(OP, "("):
                if tok.text not in FUNCTIONS:
                    raise DslSyntaxError(f"unknown function {tok.text!r}", tok.line, tok.col)
                self.ts.next()
                if self.ts.at(OP, ")"):
                    raise DslSyntaxError(f"{tok.text}() takes exactly one argument, got none",
                                         tok.line, tok.col)
                arg = self.expr()
                if self.ts.at(OP, ","):
                    raise DslSyntaxError(f"{tok.text}() takes exactly one argument", tok.line, tok.col)
                self.ts.expect(OP, ")")
                return Call(tok.text, arg, tok.line, tok.col)
            if tok.text in FUNCTIONS:
                raise DslSyntaxError(f"function {tok.text!r} needs an argument list", tok.line, tok.col)
            return Name(tok.text, tok.line, tok.col)
        if self.ts.accept(OP, "("):
            node = self.expr()
            self.ts.expect(OP, ")")
            return node
        self.ts.expect(NUM, what="a number, name or '('")


def height(node):
    """Height of the expression tree, computed without recursion."""
    best = 0
    stack = [(node, 1)]
    while stack:
        n, h = stack.pop()
        best = max(best, h)
        if isinstance(n, Neg):
            stack.append((n.operand, h + 1))
        elif isinstance(n, BinOp):
            stack.extend(((n.left, h + 1), (n.right, h + 1)))
        elif isinstance(n, Call):
            stack.append((n.arg, h + 1))
    return best


def parse_stream(stream):
    """Parse one expression from ``stream``, leaving the following token unread.

    Nesting beyond ``MAX_NESTING`` and trees taller than ``MAX_DEPTH``
    (very long operator chains) are rejected so that the parser and later
    recursive walks stay well inside the interpreter's recursion limit.
    """
    start = stream.peek()
    try:
        node = _Parser(stream).expr()
    except RecursionError:
        raise DslSyntaxError("expression nested too deeply", start.line, start.col) from None
    if height(node) > MAX_DEPTH:
        raise DslSyntaxError(f"expression nested deeper than {MAX_DEPTH}", start.line, start.col)
    return node


def parse_expr(source):
    """Parse a whole string (or token list) as one expression.

    >>> to_source(parse_expr("-t^2"))
    '(-(t ^ 2))'
    """
    tokens = tokenize(source) if isinstance(source, str) else list(source)
    ts = TokenStream([t for t in tokens if t.kind != "newline"])
    node = parse_stream(ts)
    ts.expect(EOF, what="end of expression")
    return node


def free_names(node, out=None):
    """Identifiers other than the built-in constants, with their first node."""
    out = {} if out is None else out
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Name):
            if n.name not in CONSTANTS:
                out.setdefault(n.name, n)
        elif isinstance(n, Neg):
            stack.append(n.operand)
        elif isinstance(n, BinOp):
            stack.extend((n.right, n.left))
        elif isinstance(n, Call):
            stack.append(n.arg)
    return out


def to_source(node):
    """Fully parenthesized source text that parses back to ``node``."""
    if isinstance(node, Num):
        v = float(node.value)
        return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node, env):
    """Evaluate ``node`` with ``env`` mapping names to numbers, arrays or Jets."""
    def ev(n):
        if isinstance(n, Num):
            return n.value
        if isinstance(n, Name):
            if n.name in env:
                return env[n.name]
            if n.name in CONSTANTS:
                return CONSTANTS[n.name]
            raise UnboundIdentifier(f"unbound identifier {n.name!r}", n.line, n.col)
        try:
            if isinstance(n, Neg):
                return -ev(n.operand)
            if isinstance(n, Call):
                return FUNCTIONS[n.func](ev(n.arg))
            a, b = ev(n.left), ev(n.right)
            if n.op == "+":
                return a + b
            if n.op == "-":
                return a - b
            if n.op == "*":
                return a * b
            if n.op == "/":
                if not isinstance(b, Jet) and not isinstance(a, Jet):
                    _jet._check(b == 0, "division by zero", b)
                return a / b
            return _power(a, b)
        except DomainError as exc:
            if getattr(exc, "located", False):
                raise
            err = DomainError(f"{exc} (line {n.line}, col {n.col})", exc.value)
            err.located = True
            raise err from None

    return ev(node)


def _power(a, b):
    if isinstance(a, Jet) or isinstance(b, Jet):
        return a ** b
    import numpy as np

    a_arr, b_arr = np.asarray(a, float), np.asarray(b, float)
    integral = np.all(b_arr == np.round(b_arr))
    if not integral:
        _jet._check(a_arr <= 0, f"non-positive base for exponent {b}", a)
    elif np.any(b_arr < 0):
        _jet._check(a_arr == 0, "zero to a negative power", a)
    return a_arr ** b_arr if np.ndim(a_arr) or np.ndim(b_arr) else float(a_arr ** b_arr)


def eval_jet(node, var_value, params=None, var=None):
    """Evaluate ``node`` as a Jet in its single free variable.

    ``var_value`` is a Jet or a number (seeded as the active variable).
    The variable name is ``var`` if given, else the one free name of
    ``node`` not bound in ``params``.

    >>> float(eval_jet(parse_expr("R*sin(s/R)"), 3.141592653589793, {"R": 2.0}).v0)
    2.0
    """
    params = dict(params or {})
    if not isinstance(var_value, Jet):
        var_value = Jet.variable(var_value)
    if var is None:
        names = [k for k in free_names(node) if k not in params]
        if len(names) > 1:
            n = free_names(node)[names[1]]
            raise UnboundIdentifier(f"expression has several free names {sorted(names)}", n.line, n.col)
        var = names[0] if names else None
    env = params
    if var is not None:
        env[var] = var_value
    out = evaluate(node, env)
    return out if isinstance(out, Jet) else Jet.constant(out + 0.0 * var_value.v0)
