"""Recursive-descent parser for the polynomial expression grammar.

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | VAR | "(" expr ")"

Variables are ``x``, ``y0``..``y9`` and ``d`` (plus ``t`` for univariate
family members). Implicit multiplication is rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional, Sequence

from expandlab.errors import ArityError, PolySyntaxError, UnknownVariableError
from expandlab.polyalg.multipoly import MultiPoly, default_variables
from expandlab.polyalg.unipoly import UniPoly

GRAMMAR_VARIABLES = ("x", "d", "t") + tuple(f"y{i}" for i in range(10))

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise PolySyntaxError(message, tok[2], self.text)

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while True:
            kind, val, _ = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                p = p * self.unary()
            elif kind in ("int", "name") or (kind, val) == ("op", "("):
                self.fail("implicit multiplication is not allowed")
            else:
                return p

    def unary(self):
        kind, val, _ = self.peek()
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.unary()
        if (kind, val) == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                self.fail("expected nonnegative integer exponent")
            self.take()
            return base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.peek()
                if den[0] != "int":
                    self.fail("expected integer denominator")
                self.take()
                if int(den[1]) == 0:
                    self.fail("zero denominator", den)
                return MultiPoly.const(Fraction(int(val), int(den[1])), self.variables)
            return MultiPoly.const(int(val), self.variables)
        if kind == "name":
            if val not in GRAMMAR_VARIABLES:
                raise UnknownVariableError(f"unknown variable {val!r} at offset {tok[2]}")
            if val not in self.variables:
                raise ArityError(
                    f"variable {val!r} at offset {tok[2]} is outside {', '.join(self.variables)}"
                )
            return MultiPoly.var(val, self.variables)
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return p
        if kind == "end":
            self.i -= 1
            self.fail("unexpected end of input")
        self.i -= 1
        self.fail(f"unexpected {val!r}")


def parse_poly(text: str, arity: Optional[int] = None, variables: Optional[Sequence[str]] = None) -> MultiPoly:
    """Parse ``text`` into a MultiPoly over x, y0..y{arity-2} (or ``variables``).

    Without ``arity`` the y block runs up to the highest y index used.
    """
    if variables is None:
        if arity is None:
            used = [int(m) for m in re.findall(r"y(\d)", text)]
            arity = 2 + max(used) if used else 1
        variables = default_variables(arity)
    return _Parser(text, variables).parse()


def parse_unipoly(text: str) -> UniPoly:
    """Parse a univariate expression written in ``t`` or ``x``."""
    try:
        return parse_poly(text, variables=("t",)).to_uni()
    except ArityError:
        return parse_poly(text, variables=("x",)).to_uni()


def parse_any(text: str):
    """UniPoly when the text has no y variable, otherwise a MultiPoly over x, y0, ..."""
    if re.search(r"y\d", text):
        return parse_poly(text)
    return parse_unipoly(text)


def load_family_file(path) -> list:
    """One univariate expression per line; ``#`` starts a comment."""
    polys = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                polys.append(parse_unipoly(line))
    return polys
