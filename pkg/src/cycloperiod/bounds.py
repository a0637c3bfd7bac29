"""The divisor bound R_{m,n} for virtual periods and the GL_n(F_ell) order bounds behind it."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

from sympy import factorint, isprime, primerange
from sympy.utilities.iterables import partitions

__all__ = [
    "BoundReport",
    "valuation",
    "floor_log",
    "e_exponent",
    "bound_R",
    "max_order_gln",
    "max_p_order",
    "gl_order",
]


def valuation(p: int, x: int) -> int:
    """Exponent of the prime p in the nonzero integer x."""
    if x == 0:
        raise ValueError("valuation of zero")
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def floor_log(p: int, num: int, den: int = 1) -> int:
    """Largest e >= 0 with p^e <= num/den (assumes num/den >= 1)."""
    if num < den:
        raise ValueError("floor_log needs an argument >= 1")
    e = 0
    while p ** (e + 1) * den <= num:
        e += 1
    return e


def e_exponent(m: int, n: int, p: int) -> int:
    """Exponent of p in R_{m,n} for even m and n > 1."""
    if m % 2:
        raise ValueError(f"e_exponent needs even m, got {m}")
    if n <= 1:
        raise ValueError(f"e_exponent needs n > 1, got {n}")
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if m % p == 0:
        if p == 2 and valuation(2, m) == 1:
            return 2 + floor_log(2, n)
        # p | m with m even and not the case above means 2p | m
        return valuation(p, m) + floor_log(p, n)
    if p > n + 1:
        return 0
    return 1 + floor_log(p, n, p - 1)


@dataclass(frozen=True)
class BoundReport:
    m: int
    n: int
    R: int
    factors: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "R": str(self.R),
            "factors": {str(p): e for p, e in sorted(self.factors.items())},
        }


def bound_R(m: int, n: int) -> BoundReport:
    """R_{m,n}: odd m is replaced by 2m, and R_{m,1} = m."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    mm = 2 * m if m % 2 else m
    if n == 1:
        factors = dict(factorint(mm))
    else:
        relevant = set(factorint(mm)) | set(primerange(2, n + 2))
        factors = {p: e for p in sorted(relevant) if (e := e_exponent(mm, n, p))}
    R = 1
    for p, e in factors.items():
        R *= p**e
    return BoundReport(m, n, R, dict(sorted(factors.items())))


def gl_order(n: int, ell: int) -> int:
    """|GL_n(F_ell)|."""
    out = 1
    for i in range(n):
        out *= ell**n - ell**i
    return out


def max_order_gln(n: int, ell: int) -> int:
    """Largest element order in GL_n(F_ell).

    Maximizes ell^t * lcm(ell^d_i - 1) over partitions of n written as
    sum k_i d_i with distinct parts d_i, t least with ell^t >= max k_i.
    """
    if n < 1 or not isprime(ell):
        raise ValueError("need n >= 1 and ell prime")
    best = 0
    for part in partitions(n):
        kmax = max(part.values())
        t = 0
        while ell**t < kmax:
            t += 1
        best = max(best, ell**t * lcm(*(ell**d - 1 for d in part)))
    return best


def max_p_order(p: int, ell: int, n: int) -> int:
    """max over d <= n of the p-adic valuation of ell^d - 1."""
    if p == ell:
        raise ValueError("the ell-part of an element order is not governed by this bound")
    return max(valuation(p, ell**d - 1) for d in range(1, n + 1))
