"""Laurent polynomials over F_q and a parser for their text form.

Grammar (whitespace is ignored)::

    poly   := ["+"|"-"] term (("+"|"-") term)*
    term   := factor ("*" factor)*
    factor := INT | "g" ["^" exp] | "x" INT ["^" exp]
    exp    := ["-"] INT | "(" ["-"] INT ")"

Integer coefficients map through Z -> F_p; ``g^i`` is a power of the base
field's primitive element.  Example: ``x1 + g^3*x1^-1*x2``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .ffield import FiniteField

__all__ = ["LaurentPoly", "ParseError", "parse_laurent", "parse_coefficient"]


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected: str) -> None:
        self.text = text
        self.pos = pos
        self.expected = expected
        found = repr(text[pos]) if pos < len(text) else "end of input"
        super().__init__(f"at position {pos}: expected {expected}, found {found}")


@dataclass(frozen=True)
class LaurentPoly:
    """Terms are (exponent vector, coefficient) with coefficients as codes of ``field``."""

    field: FiniteField
    nvars: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self) -> None:
        seen = set()
        for exps, c in self.terms:
            if len(exps) != self.nvars:
                raise ValueError("exponent vector length differs from nvars")
            if c == 0:
                raise ValueError("zero coefficient stored")
            if exps in seen:
                raise ValueError(f"duplicate exponent vector {exps}")
            seen.add(exps)

    @classmethod
    def from_terms(cls, field: FiniteField, nvars: int, terms) -> LaurentPoly:
        """Combine like terms and drop zeros."""
        acc: dict[tuple[int, ...], int] = {}
        for exps, c in terms:
            exps = tuple(exps) + (0,) * (nvars - len(exps))
            acc[exps] = field.add(acc.get(exps, 0), c)
        return cls(field, nvars, tuple(sorted((e, c) for e, c in acc.items() if c)))

    @property
    def degree(self) -> int:
        """Largest total degree sum(|e_j|) over the terms."""
        return max((sum(abs(e) for e in exps) for exps, _ in self.terms), default=0)

    def evaluate(self, xs: tuple[int, ...], ext: FiniteField | None = None, emb=None) -> int:
        """Value at a torus point of ``ext`` (defaults to the coefficient field)."""
        F = ext or self.field
        lift = emb or (lambda c: c)
        acc = 0
        for exps, c in self.terms:
            v = lift(c)
            for x, e in zip(xs, exps):
                v = F.mul(v, F.pow(x, e))
            acc = F.add(acc, v)
        return acc

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms:
            factors = [] if c == 1 and any(exps) else [_coef_str(self.field, c)]
            for i, e in enumerate(exps, start=1):
                if e == 1:
                    factors.append(f"x{i}")
                elif e:
                    factors.append(f"x{i}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)


def _coef_str(F: FiniteField, c: int) -> str:
    if c < F.p:
        return str(c)
    return f"g^{F.log(c)}"


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<x>x)|(?P<g>g)|(?P<op>[-+*^()]))")


class _Parser:
    def __init__(self, text: str, field: FiniteField) -> None:
        self.text = text
        self.F = field
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            mt = _TOKEN.match(text, pos)
            if not mt:
                bad = len(text) - len(text[pos:].lstrip())
                raise ParseError(text, bad, "a number, 'x', 'g' or an operator")
            kind = mt.lastgroup
            start = mt.start(kind)
            self.tokens.append((kind, mt.group(kind), start))
            pos = mt.end()
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _pos(self) -> int:
        tok = self.peek()
        return tok[2] if tok else len(self.text)

    def expect(self, kind: str, value: str | None = None, what: str = "") -> str:
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            raise ParseError(self.text, self._pos(), what or (repr(value) if value else kind))
        self.i += 1
        return tok[1]

    def accept(self, kind: str, value: str) -> bool:
        tok = self.peek()
        if tok and tok[0] == kind and tok[1] == value:
            self.i += 1
            return True
        return False

    def exponent(self) -> int:
        paren = self.accept("op", "(")
        neg = self.accept("op", "-")
        e = int(self.expect("int", what="an integer exponent"))
        if paren:
            self.expect("op", ")", "')'")
        return -e if neg else e

    def factor(self, exps: dict[int, int]) -> int:
        tok = self.peek()
        if tok is None:
            raise ParseError(self.text, len(self.text), "a coefficient or variable")
        kind = tok[0]
        if kind == "int":
            self.i += 1
            return self.F.prime_element(int(tok[1]))
        if kind == "g":
            self.i += 1
            e = self.exponent() if self.accept("op", "^") else 1
            return self.F.pow(self.F.g, e)
        if kind == "x":
            self.i += 1
            idx = int(self.expect("int", what="a variable index after 'x'"))
            if idx < 1:
                raise ParseError(self.text, self.tokens[self.i - 1][2], "a variable index >= 1")
            e = self.exponent() if self.accept("op", "^") else 1
            exps[idx] = exps.get(idx, 0) + e
            return 1
        raise ParseError(self.text, tok[2], "a coefficient or variable")

    def term(self) -> tuple[dict[int, int], int]:
        exps: dict[int, int] = {}
        coef = self.factor(exps)
        while self.accept("op", "*"):
            coef = self.F.mul(coef, self.factor(exps))
        return exps, coef

    def poly(self) -> list[tuple[dict[int, int], int]]:
        out = []
        sign = 1
        if self.accept("op", "-"):
            sign = -1
        else:
            self.accept("op", "+")
        while True:
            exps, coef = self.term()
            if sign < 0:
                coef = self.F.neg(coef)
            out.append((exps, coef))
            if self.accept("op", "+"):
                sign = 1
            elif self.accept("op", "-"):
                sign = -1
            else:
                break
        if self.peek() is not None:
            raise ParseError(self.text, self._pos(), "'+', '-', '*' or end of input")
        return out


def parse_laurent(text: str, field: FiniteField, nvars: int | None = None) -> LaurentPoly:
    """Parse ``text`` into a Laurent polynomial over ``field``."""
    p = _Parser(text, field)
    if not p.tokens:
        raise ParseError(text, 0, "a polynomial")
    raw = p.poly()
    used = max((max(e) for e, _ in raw if e), default=1)
    if nvars is None:
        nvars = used
    elif used > nvars:
        raise ValueError(f"polynomial uses x{used} but nvars={nvars}")
    terms = [(tuple(e.get(i, 0) for i in range(1, nvars + 1)), c) for e, c in raw]
    return LaurentPoly.from_terms(field, nvars, terms)


def parse_coefficient(text: str, field: FiniteField) -> int:
    """Parse a constant such as ``3``, ``g^2`` or ``2*g``."""
    poly = parse_laurent(text, field, nvars=1)
    if any(any(e) for e, _ in poly.terms):
        raise ValueError(f"{text!r} is not a constant")
    return poly.terms[0][1] if poly.terms else 0
