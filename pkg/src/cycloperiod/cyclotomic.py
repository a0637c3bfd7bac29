"""Exact arithmetic in the cyclotomic field Q(zeta_m).

Elements are stored in the power basis ``1, zeta, ..., zeta^(phi(m)-1)``
reduced modulo the m-th cyclotomic polynomial, with :class:`fractions.Fraction`
coefficients, so equality is a plain coefficient comparison.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "CycNum",
    "ModulusMismatch",
    "cyclotomic_polynomial",
    "cyc_from_root_power",
    "zeta",
    "euler_phi",
    "units",
    "galois_apply",
    "invert",
    "embed_mod_ell",
    "lift",
    "element_of_order",
]


class ModulusMismatch(ValueError):
    """Raised when two cyclotomic numbers with different moduli are combined."""


# ---------------------------------------------------------------------------
# integer polynomials (coefficient lists, lowest degree first)

def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_exact_div(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Quotient of num by a monic den; raises if the division is not exact."""
    rem = list(num)
    dd = len(den) - 1
    assert den[-1] == 1
    quot = [0] * (len(rem) - dd)
    for i in range(len(quot) - 1, -1, -1):
        c = rem[i + dd]
        quot[i] = c
        if c:
            for j, d in enumerate(den):
                rem[i + j] -= c * d
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, constant term first.

    Obtained by dividing x^m - 1 by Phi_d for every proper divisor d of m.
    """
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_exact_div(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


@lru_cache(maxsize=None)
def units(m: int) -> tuple[int, ...]:
    """Residues in [1, m] coprime to m, i.e. the Galois group of Q(zeta_m)."""
    if m == 1:
        return (1,)
    return tuple(j for j in range(1, m) if gcd(j, m) == 1)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row e holds the power-basis coordinates of zeta_m^e, 0 <= e < m."""
    phi_poly = cyclotomic_polynomial(m)
    deg = len(phi_poly) - 1
    rows: list[tuple[int, ...]] = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi_poly[i]
    return tuple(rows)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class CycNum:
    """An element of Q(zeta_m); immutable and hashable."""

    __slots__ = ("m", "coeffs", "_hash")

    def __init__(self, m: int, coeffs: Iterable = ()) -> None:
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
        phi = euler_phi(m)
        cs = [_frac(c) for c in coeffs]
        if len(cs) > phi:
            cs = _reduce_long(m, cs)
        cs.extend([Fraction(0)] * (phi - len(cs)))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, m: int, x) -> CycNum:
        return cls(m, [_frac(x)])

    @classmethod
    def zero(cls, m: int) -> CycNum:
        return cls(m)

    @classmethod
    def one(cls, m: int) -> CycNum:
        return cls(m, [1])

    @classmethod
    def from_exponents(cls, m: int, counts: Sequence[int] | dict[int, int]) -> CycNum:
        """Sum of ``counts[e] * zeta_m^e``; the cheap path for character sums."""
        table = _power_table(m)
        acc = [0] * euler_phi(m)
        items = counts.items() if isinstance(counts, dict) else enumerate(counts)
        for e, c in items:
            if c:
                for i, v in enumerate(table[e % m]):
                    if v:
                        acc[i] += c * v
        return cls(m, acc)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def denominator(self) -> int:
        """Least common multiple of the coefficient denominators."""
        return lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> CycNum:
        if isinstance(other, CycNum):
            if other.m != self.m:
                raise ModulusMismatch(f"moduli differ: {self.m} vs {other.m}")
            return other
        if isinstance(other, (int, Rational)):
            return CycNum.rational(self.m, other)
        return NotImplemented

    def __add__(self, other) -> CycNum:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycNum(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum(self.m, [-a for a in self.coeffs])

    def __sub__(self, other) -> CycNum:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycNum(self.m, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other) -> CycNum:
        return (-self) + other

    def __mul__(self, other) -> CycNum:
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            f = _frac(other)
            return CycNum(self.m, [a * f for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_rational():
            return self * o.coeffs[0]
        if self.is_rational():
            return o * self.coeffs[0]
        phi = len(self.coeffs)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycNum(self.m, _reduce_long(self.m, prod))

    __rmul__ = __mul__

    def __truediv__(self, other) -> CycNum:
        if isinstance(other, (int, Rational)):
            return self * (1 / _frac(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * invert(o)

    def __rtruediv__(self, other) -> CycNum:
        return invert(self) * other

    def __pow__(self, e: int) -> CycNum:
        if e < 0:
            return invert(self) ** (-e)
        result = CycNum.one(self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, CycNum):
            return self.m == other.m and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.m, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    # -- field-level operations ------------------------------------------
    def conjugate(self, j: int) -> CycNum:
        return galois_apply(j, self)

    def norm(self) -> Fraction:
        """Absolute norm N_{Q(zeta_m)/Q}, the product of all conjugates."""
        prod = CycNum.one(self.m)
        for j in units(self.m):
            prod = prod * galois_apply(j, self)
        assert prod.is_rational()
        return prod.coeffs[0]

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {"m": self.m, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> CycNum:
        m = int(data["m"])
        coeffs = data["coeffs"]
        if len(coeffs) != euler_phi(m):
            raise ValueError(f"expected {euler_phi(m)} coefficients for m={m}, got {len(coeffs)}")
        return cls(m, [Fraction(str(c)) for c in coeffs])

    def __repr__(self) -> str:
        return f"CycNum({self.m}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _reduce_long(m: int, cs: Sequence[Fraction]) -> list[Fraction]:
    """Reduce a coefficient list of arbitrary length modulo Phi_m."""
    phi = euler_phi(m)
    table = _power_table(m)
    out = [Fraction(0)] * phi
    for e, c in enumerate(cs):
        if not c:
            continue
        if e < phi:
            out[e] += c
        else:
            for i, v in enumerate(table[e % m]):
                if v:
                    out[i] += c * v
    return out


# ---------------------------------------------------------------------------
# module-level operations

def cyc_from_root_power(m: int, e: int) -> CycNum:
    """zeta_m^e in the power basis."""
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    return CycNum(m, _power_table(m)[e % m])


zeta = cyc_from_root_power


def galois_apply(j: int, a: CycNum) -> CycNum:
    """Image of ``a`` under the automorphism zeta_m -> zeta_m^j."""
    m = a.m
    if gcd(j, m) != 1:
        raise ValueError(f"{j} is not a unit modulo {m}")
    j %= m
    if j == 1 % m or a.is_rational():
        return a
    table = _power_table(m)
    out = [Fraction(0)] * len(a.coeffs)
    for i, c in enumerate(a.coeffs):
        if c:
            for t, v in enumerate(table[(i * j) % m]):
                if v:
                    out[t] += c * v
    return CycNum(m, out)


def _qpoly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qpoly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        _qpoly_trim(a)
    return _qpoly_trim(q), a


def _qpoly_sub_mul(a: list[Fraction], q: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, x in enumerate(q):
        for j, y in enumerate(b):
            out[i + j] -= x * y
    return _qpoly_trim(out)


def invert(a: CycNum) -> CycNum:
    """Multiplicative inverse via the extended Euclidean algorithm against Phi_m."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in Q(zeta_m)")
    if a.is_rational():
        return CycNum.rational(a.m, 1 / a.coeffs[0])
    # invariant: s * a == r (mod Phi_m)
    r0 = [Fraction(c) for c in cyclotomic_polynomial(a.m)]
    r1 = _qpoly_trim(list(a.coeffs))
    s0: list[Fraction] = []
    s1 = [Fraction(1)]
    while len(r1) > 1:
        q, r = _qpoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qpoly_sub_mul(s0, q, s1)
    c = r1[0]
    return CycNum(a.m, [x / c for x in s1])


def lift(a: CycNum, m2: int) -> CycNum:
    """Re-express ``a`` in Q(zeta_m2) for m | m2, via zeta_m -> zeta_m2^(m2/m)."""
    if m2 % a.m:
        raise ValueError(f"cannot lift from modulus {a.m} to {m2}")
    step = m2 // a.m
    if step == 1:
        return a
    table = _power_table(m2)
    out = [Fraction(0)] * euler_phi(m2)
    for i, c in enumerate(a.coeffs):
        if c:
            for t, v in enumerate(table[(i * step) % m2]):
                if v:
                    out[t] += c * v
    return CycNum(m2, out)


def element_of_order(m: int, ell: int) -> int:
    """Smallest t in F_ell^x of multiplicative order exactly m (requires ell = 1 mod m)."""
    if (ell - 1) % m:
        raise ValueError(f"{ell} is not 1 modulo {m}")
    from sympy import factorint

    primes = list(factorint(m))
    for t in range(1, ell):
        if pow(t, m, ell) == 1 and all(pow(t, m // q, ell) != 1 for q in primes):
            return t
    raise ArithmeticError("no element of the requested order")  # unreachable for prime ell


def embed_mod_ell(a: CycNum, ell: int, t: int) -> int:
    """Image of an integral ``a`` under Z[zeta_m] -> F_ell, zeta_m -> t."""
    m = a.m
    if ell < 3 or (ell - 1) % m:
        raise ValueError(f"ell={ell} must be an odd prime congruent to 1 mod {m}")
    t %= ell
    if pow(t, m, ell) != 1 or any(pow(t, d, ell) == 1 for d in range(1, m) if m % d == 0):
        raise ValueError(f"t={t} does not have order {m} modulo {ell}")
    if not a.is_integral():
        raise ValueError("embed_mod_ell needs integral coefficients")
    acc = 0
    power = 1
    for c in a.coeffs:
        acc += c.numerator * power
        power = power * t % ell
    return acc % ell
