"""Small finite fields F_{p^d} with deterministic construction.

Elements are integer codes ``sum a_j p^j`` of their coordinates in the basis
``1, x, ..., x^(d-1)`` modulo the defining polynomial.  The defining
polynomial is the monic irreducible whose lower coefficients have the
smallest code, and ``g`` is the primitive element with the smallest code.
"""
from __future__ import annotations

from functools import cached_property, lru_cache
from math import isqrt

import numpy as np
from sympy import factorint, isprime

__all__ = ["FiniteField", "Embedding", "field_make", "embed", "FIELD_CAP"]

FIELD_CAP = 2**24


# -- polynomials over F_p as coefficient lists, lowest degree first ---------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _trim(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) > df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, y in enumerate(f):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, f, p)


def _ppowmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _pmulmod(base, base, f, p)
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test."""
    d = len(f) - 1
    x = [0, 1]
    if _ppowmod(x, p**d, f, p) != _pmod(x, f, p):
        return False
    for r in factorint(d):
        h = _ppowmod(x, p ** (d // r), f, p)
        diff = h + [0] * max(0, 2 - len(h))
        diff[1] -= 1
        if len(_pgcd(f, diff, p)) != 1:
            return False
    return True


class FiniteField:
    """F_{p^d}; construct through :func:`field_make`."""

    def __init__(self, p: int, d: int, modulus: tuple[int, ...], g: int) -> None:
        self.p = p
        self.d = d
        self.modulus = modulus
        self.g = g
        self.size = p**d

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, d={self.d}, modulus={list(self.modulus)}, g={self.g})"

    # -- codes <-> polynomials -------------------------------------------
    def to_poly(self, x: int) -> list[int]:
        out = []
        while x:
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def from_poly(self, a: list[int]) -> int:
        a = _pmod(list(a), list(self.modulus), self.p)
        code = 0
        for c in reversed(a):
            code = code * self.p + c
        return code

    def prime_element(self, c: int) -> int:
        """The image of the integer c under Z -> F_p -> F_{p^d}."""
        return c % self.p

    # -- arithmetic --------------------------------------------------------
    def add(self, x: int, y: int) -> int:
        a, b = self.to_poly(x), self.to_poly(y)
        n = max(len(a), len(b))
        a += [0] * (n - len(a))
        b += [0] * (n - len(b))
        return self.from_poly([u + v for u, v in zip(a, b)])

    def neg(self, x: int) -> int:
        return self.from_poly([-c for c in self.to_poly(x)])

    def mul(self, x: int, y: int) -> int:
        return self.from_poly(_pmulmod(self.to_poly(x), self.to_poly(y), list(self.modulus), self.p))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            x, e = self.inv(x), -e
        return self.from_poly(_ppowmod(self.to_poly(x), e, list(self.modulus), self.p))

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.pow(x, self.size - 2)

    def eval_poly(self, coeffs: list[int], x: int) -> int:
        """Evaluate a polynomial with F_p coefficients (lowest first) at x."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self.prime_element(c))
        return acc

    # -- trace, norm, logs -------------------------------------------------
    def frobenius(self, x: int, times: int = 1) -> int:
        return self.pow(x, self.p**times)

    def trace_to_prime(self, x: int) -> int:
        """sum_{i<d} x^(p^i), returned as an integer in [0, p)."""
        acc = 0
        y = x
        for _ in range(self.d):
            acc = self.add(acc, y)
            y = self.frobenius(y)
        if acc >= self.p:
            raise ArithmeticError("trace did not land in the prime field")
        return acc

    def trace_to(self, x: int, sub_degree: int) -> int:
        """Trace down to the subfield F_{p^sub_degree}, as an element of this field."""
        if self.d % sub_degree:
            raise ValueError("subfield degree must divide the field degree")
        q = self.p**sub_degree
        acc, y = 0, x
        for _ in range(self.d // sub_degree):
            acc = self.add(acc, y)
            y = self.pow(y, q)
        return acc

    def norm_to(self, x: int, sub_degree: int) -> int:
        """x^((Q-1)/(q-1)) for the subfield of size q = p^sub_degree."""
        if x == 0:
            raise ValueError("norm of zero is not in the multiplicative group")
        if self.d % sub_degree:
            raise ValueError("subfield degree must divide the field degree")
        q = self.p**sub_degree
        return self.pow(x, (self.size - 1) // (q - 1))

    @cached_property
    def _order_primes(self) -> tuple[int, ...]:
        return tuple(factorint(self.size - 1))

    def order(self, x: int) -> int:
        if x == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.size - 1
        for r in self._order_primes:
            while n % r == 0 and self.pow(x, n // r) == 1:
                n //= r
        return n

    @cached_property
    def _bsgs_table(self) -> tuple[int, dict[int, int]]:
        step = isqrt(self.size - 1) + 1
        baby: dict[int, int] = {}
        y = 1
        for j in range(step):
            baby.setdefault(y, j)
            y = self.mul(y, self.g)
        return step, baby

    def log(self, x: int) -> int:
        """Discrete log to base g by baby-step giant-step."""
        if x == 0:
            raise ValueError("log of zero")
        step, baby = self._bsgs_table
        giant = self.inv(self.pow(self.g, step))
        y = x
        for i in range(step + 1):
            if y in baby:
                return (i * step + baby[y]) % (self.size - 1)
            y = self.mul(y, giant)
        raise ArithmeticError("discrete log not found")

    # -- vectorised tables for character sums ------------------------------
    def _mult_matrix(self, x: int) -> np.ndarray:
        """Matrix of y -> x*y on coordinate row vectors (row i = x * basis_i)."""
        rows = []
        for i in range(self.d):
            basis = [0] * i + [1]
            prod = _pmulmod(basis, self.to_poly(x), list(self.modulus), self.p)
            rows.append(prod + [0] * (self.d - len(prod)))
        return np.array(rows, dtype=np.int64)

    @cached_property
    def trace_vector(self) -> np.ndarray:
        """Tr(basis_j) for each basis element, so Tr is a dot product with coordinates."""
        return np.array(
            [self.trace_to_prime(self.p**j) for j in range(self.d)], dtype=np.int64
        )

    @cached_property
    def trace_by_log(self) -> np.ndarray:
        """Array T with T[i] = Tr(g^i) for 0 <= i < size-1.

        Built block-wise: Tr(g^(aB+b)) = coords(g^b) . (Mult(g^(aB)) tv).
        """
        n = self.size - 1
        p = self.p
        B = isqrt(n) + 1
        A = -(-n // B)
        coords = np.zeros((B, self.d), dtype=np.int64)
        y = 1
        for b in range(B):
            poly = self.to_poly(y)
            coords[b, : len(poly)] = poly
            y = self.mul(y, self.g)
        gB = y
        tv = self.trace_vector
        U = np.zeros((self.d, A), dtype=np.int64)
        cur = 1
        for a in range(A):
            U[:, a] = self._mult_matrix(cur) @ tv % p
            cur = self.mul(cur, gB)
        out = np.empty(A * B, dtype=np.int8)
        chunk = max(1, (1 << 22) // B)
        for a0 in range(0, A, chunk):
            block = (coords @ U[:, a0 : a0 + chunk]) % p  # shape (B, chunk)
            out[a0 * B : (a0 + block.shape[1]) * B] = block.T.reshape(-1)
        return out[:n]


@lru_cache(maxsize=64)
def field_make(p: int, d: int) -> FiniteField:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if d < 1:
        raise ValueError("degree must be positive")
    if p**d > FIELD_CAP:
        raise ValueError(f"field size {p}^{d} exceeds the cap {FIELD_CAP}")
    modulus = None
    for code in range(p**d):
        low = []
        c = code
        for _ in range(d):
            c, r = divmod(c, p)
            low.append(r)
        f = low + [1]
        if f[0] != 0 or d == 1:
            if _is_irreducible(f, p):
                modulus = tuple(f)
                break
    assert modulus is not None
    F = FiniteField(p, d, modulus, 0)
    for code in range(1, p**d):
        if F.order(code) == p**d - 1:
            F.g = code
            return F
    raise ArithmeticError("no primitive element")  # unreachable


class Embedding:
    """Field embedding F_q -> F_{q^k} sending the small field's g to g_ext^exponent."""

    def __init__(self, base: FiniteField, ext: FiniteField, exponent: int) -> None:
        self.base = base
        self.ext = ext
        self.exponent = exponent

    def log_image(self, base_log: int) -> int:
        """Discrete log in ext of the image of base.g^base_log."""
        return base_log * self.exponent % (self.ext.size - 1)

    def __call__(self, x: int) -> int:
        if x == 0:
            return 0
        return self.ext.pow(self.ext.g, self.log_image(self.base.log(x)))

    def preimage(self, y: int) -> int:
        """Inverse of the embedding on its image."""
        if y == 0:
            return 0
        e = self.ext.log(y)
        if e % self.exponent_step:
            raise ValueError("element is not in the embedded subfield")
        u = self.exponent // self.exponent_step
        i = (e // self.exponent_step) * pow(u, -1, self.base.size - 1) % (self.base.size - 1)
        return self.base.pow(self.base.g, i)

    @property
    def exponent_step(self) -> int:
        return (self.ext.size - 1) // (self.base.size - 1)


@lru_cache(maxsize=64)
def embed(base: FiniteField, ext: FiniteField) -> Embedding:
    """Send base.g to the root of base's defining polynomial with the smallest log in ext."""
    if base.p != ext.p or ext.d % base.d:
        raise ValueError("base must be a subfield of ext")
    step = (ext.size - 1) // (base.size - 1)
    if base.d == ext.d and base.modulus == ext.modulus:
        return Embedding(base, ext, 1)
    if base.d == 1:
        # the prime field sits canonically inside every extension
        return Embedding(base, ext, ext.log(ext.prime_element(base.g)))
    # the image of g must be a root of g's minimal polynomial; base.modulus has root x,
    # so map x first and then g = g(x) follows
    root_exp = None
    for u in range(base.size - 1):
        e = u * step
        y = ext.pow(ext.g, e)
        if ext.eval_poly(list(base.modulus), y) == 0:
            root_exp = e
            break
    if root_exp is None:
        raise ArithmeticError("no root of the base modulus in the extension")
    # x -> ext.g^root_exp; base.g is a polynomial in x
    x_img = ext.pow(ext.g, root_exp)
    g_img = 0
    for c in reversed(base.to_poly(base.g)):
        g_img = ext.add(ext.mul(g_img, x_img), ext.prime_element(c))
    emb = Embedding(base, ext, ext.log(g_img))
    for a in range(min(base.size, 12)):
        for b in range(min(base.size, 12)):
            if emb(base.mul(a, b)) != ext.mul(emb(a), emb(b)) or emb(base.add(a, b)) != ext.add(emb(a), emb(b)):
                raise ArithmeticError("embedding is not a homomorphism")
    return emb
