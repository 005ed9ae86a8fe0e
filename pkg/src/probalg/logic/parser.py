"""Recursive-descent parser and canonical printer for formulas.

Terms use ``~`` (tightest), ``/\\`` then ``\\/``, both left associative.
Formulas combine ``mu(t)``, ``d(t, t)``, rationals ``p`` or ``p/q``, the
truncated operators ``-.`` and ``+.`` (left associative), ``|f - g|``,
``min(...)``, ``max(...)``, postfix ``/2`` and ``sup x . f`` / ``inf x . f``,
whose body extends as far right as possible.
"""
from __future__ import annotations

import re
from fractions import Fraction

from ..errors import FormulaSyntaxError, UnknownSymbol
from .ast import (
    AbsDiff,
    Compl,
    Const,
    Dist,
    Formula,
    Half,
    Inf,
    Join,
    Max,
    Meet,
    Min,
    Minus,
    Mu,
    One,
    Plus,
    Sup,
    Term,
    Var,
    Zero,
)

RESERVED = frozenset({"mu", "d", "min", "max", "sup", "inf"})

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>/\\|\\/|-\.|\+\.|[~(),|.\-/])
    """,
    re.VERBOSE,
)


def tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, value):
        return self.tok[1] == value and self.tok[0] != "eof"

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        if not self.peek(value):
            found = self.tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {value!r}, found {found!r}", self.tok[2])
        return self.advance()

    def fail(self, what):
        found = self.tok[1] or "end of input"
        raise FormulaSyntaxError(f"expected {what}, found {found!r}", self.tok[2])

    # ----------------------------------------------------------- formulas
    def formula(self) -> Formula:
        if self.tok[0] == "ident" and self.tok[1] in ("sup", "inf"):
            q = self.advance()[1]
            if self.tok[0] != "ident" or self.tok[1] in RESERVED:
                self.fail("a variable name")
            var = self.advance()[1]
            self.expect(".")
            body = self.formula()
            return Sup(var, body) if q == "sup" else Inf(var, body)
        left = self.postfix()
        while self.peek("-.") or self.peek("+."):
            op = self.advance()[1]
            if self.tok[0] == "ident" and self.tok[1] in ("sup", "inf"):
                right = self.formula()
            else:
                right = self.postfix()
            left = Minus(left, right) if op == "-." else Plus(left, right)
        return left

    def postfix(self) -> Formula:
        f = self.primary()
        while self.peek("/"):
            self.advance()
            # "x/2/2" tokenises as "/" followed by the rational "2/2"
            if self.tok[0] != "num" or self.tok[1] not in ("2", "2/2"):
                self.fail("'2' after '/'")
            halvings = 1 if self.advance()[1] == "2" else 2
            for _ in range(halvings):
                f = Half(f)
        return f

    def primary(self) -> Formula:
        kind, val, pos = self.tok
        if kind == "num":
            self.advance()
            q = Fraction(val)
            if not 0 <= q <= 1:
                raise FormulaSyntaxError(f"constant {val} is outside [0,1]", pos)
            return Const(q)
        if kind == "ident":
            if val == "mu":
                self.advance()
                self.expect("(")
                t = self.term()
                self.expect(")")
                return Mu(t)
            if val == "d":
                self.advance()
                self.expect("(")
                a = self.term()
                self.expect(",")
                b = self.term()
                self.expect(")")
                return Dist(a, b)
            if val in ("min", "max"):
                self.advance()
                self.expect("(")
                args = [self.formula()]
                while self.peek(","):
                    self.advance()
                    args.append(self.formula())
                self.expect(")")
                if len(args) < 2:
                    raise FormulaSyntaxError(f"{val} needs at least two arguments", pos)
                return Min(tuple(args)) if val == "min" else Max(tuple(args))
            if self.toks[self.i + 1][1] == "(":
                raise UnknownSymbol(f"unknown function {val!r} at position {pos}")
            raise FormulaSyntaxError(f"identifier {val!r} is not a formula", pos)
        if val == "|" and kind == "op":
            self.advance()
            a = self.formula()
            self.expect("-")
            b = self.formula()
            self.expect("|")
            return AbsDiff(a, b)
        if val == "(" and kind == "op":
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        self.fail("a formula")

    # -------------------------------------------------------------- terms
    def term(self) -> Term:
        left = self.meet()
        while self.peek("\\/"):
            self.advance()
            left = Join(left, self.meet())
        return left

    def meet(self) -> Term:
        left = self.unary()
        while self.peek("/\\"):
            self.advance()
            left = Meet(left, self.unary())
        return left

    def unary(self) -> Term:
        if self.peek("~"):
            self.advance()
            return Compl(self.unary())
        kind, val, pos = self.tok
        if kind == "num" and val in ("0", "1"):
            self.advance()
            return Zero() if val == "0" else One()
        if kind == "ident":
            if val in RESERVED:
                raise FormulaSyntaxError(f"reserved word {val!r} used as an event", pos)
            self.advance()
            return Var(val)
        if self.peek("("):
            self.advance()
            t = self.term()
            self.expect(")")
            return t
        self.fail("a term")


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.tok[0] != "eof":
        p.fail("end of input")
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.tok[0] != "eof":
        p.fail("end of input")
    return t


# ----------------------------------------------------------------- printing


def pretty_term(t: Term) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Compl):
        inner = pretty_term(t.arg)
        return "~" + (f"({inner})" if isinstance(t.arg, (Meet, Join)) else inner)
    if isinstance(t, Meet):
        left = pretty_term(t.left)
        right = pretty_term(t.right)
        if isinstance(t.left, Join):
            left = f"({left})"
        if isinstance(t.right, (Meet, Join)):
            right = f"({right})"
        return f"{left} /\\ {right}"
    if isinstance(t, Join):
        right = pretty_term(t.right)
        if isinstance(t.right, Join):
            right = f"({right})"
        return f"{pretty_term(t.left)} \\/ {right}"
    raise TypeError(f"not a term: {t!r}")


def _const(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _operand(f: Formula, right: bool) -> str:
    s = pretty(f)
    if isinstance(f, (Sup, Inf)) or (right and isinstance(f, (Minus, Plus))):
        return f"({s})"
    return s


def pretty(f: Formula) -> str:
    if isinstance(f, Mu):
        return f"mu({pretty_term(f.term)})"
    if isinstance(f, Dist):
        return f"d({pretty_term(f.left)}, {pretty_term(f.right)})"
    if isinstance(f, Const):
        return _const(f.value)
    if isinstance(f, Half):
        inner = pretty(f.arg)
        if not isinstance(f.arg, (Mu, Dist, AbsDiff, Min, Max, Half)):
            inner = f"({inner})"
        return f"{inner}/2"
    if isinstance(f, (Minus, Plus)):
        op = "-." if isinstance(f, Minus) else "+."
        return f"{_operand(f.left, False)} {op} {_operand(f.right, True)}"
    if isinstance(f, AbsDiff):
        return f"|{pretty(f.left)} - {pretty(f.right)}|"
    if isinstance(f, (Min, Max)):
        name = "min" if isinstance(f, Min) else "max"
        return f"{name}(" + ", ".join(pretty(a) for a in f.args) + ")"
    if isinstance(f, (Sup, Inf)):
        q = "sup" if isinstance(f, Sup) else "inf"
        return f"{q} {f.var} . {pretty(f.body)}"
    raise TypeError(f"not a formula: {f!r}")
