"""Small recursive-descent parser for infix algebra expressions.

Grammar (precedence low to high)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | power
    power  := atom ('^' nonneg-int)?
    atom   := name | int | '#' int | '(' expr ')'

``*`` is left-associative and never reordered, so the same parser serves both
commutative coefficient expressions and noncommutative extension elements.
The caller supplies the semantics through an :class:`Algebra` adapter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Generic, Optional, TypeVar

from .errors import BadParameter

T = TypeVar("T")

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<id>#\d+)|(?P<op>[-+*/^()]))"
)


@dataclass
class Algebra(Generic[T]):
    """Operations the parser needs to evaluate an expression.

    Division is optional; when provided it is right-division by a unit and
    binds like multiplication.
    """

    atom: Callable[[str], T]        # resolve a name ("x", "y", ...)
    const: Callable[[int], T]       # integer literal
    by_id: Callable[[int], T]       # '#k' literal (finite-ring element id)
    add: Callable[[T, T], T]
    sub: Callable[[T, T], T]
    neg: Callable[[T], T]
    mul: Callable[[T, T], T]
    pow: Callable[[T, int], T]
    div: Optional[Callable[[T, T], T]] = None


def tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise BadParameter(f"cannot tokenize expression at: {text[pos:]!r}")
        tokens.append(m.group().strip())
        pos = m.end()
    return tokens


class _Parser(Generic[T]):
    def __init__(self, tokens: list[str], algebra: Algebra[T]):
        self.tokens = tokens
        self.pos = 0
        self.alg = algebra

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise BadParameter("unexpected end of expression")
        self.pos += 1
        return tok

    def expr(self) -> T:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = self.alg.add(value, rhs) if op == "+" else self.alg.sub(value, rhs)
        return value

    def term(self) -> T:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            if op == "*":
                value = self.alg.mul(value, rhs)
            else:
                if self.alg.div is None:
                    raise BadParameter("division is not supported in this context")
                value = self.alg.div(value, rhs)
        return value

    def factor(self) -> T:
        if self.peek() == "-":
            self.take()
            return self.alg.neg(self.factor())
        return self.power()

    def power(self) -> T:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise BadParameter(f"exponent must be a nonnegative integer, got {tok!r}")
            return self.alg.pow(base, int(tok))
        return base

    def atom(self) -> T:
        tok = self.take()
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise BadParameter("unbalanced parenthesis")
            return value
        if tok.isdigit():
            return self.alg.const(int(tok))
        if tok.startswith("#"):
            return self.alg.by_id(int(tok[1:]))
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            return self.alg.atom(tok)
        raise BadParameter(f"unexpected token {tok!r}")


def parse_expression(text: str, algebra: Algebra[T]) -> T:
    parser = _Parser(tokenize(text), algebra)
    value = parser.expr()
    if parser.peek() is not None:
        raise BadParameter(f"trailing input after expression: {parser.tokens[parser.pos:]}")
    return value
