"""Linear recurrence sequences over Q(zeta_m).

An :class:`Lrs` of dimension n is determined by coefficients ``c_1..c_n``
(with ``c_n != 0``) and initial terms ``a_0..a_{n-1}``; every later term is
``a_k = sum_i c_i a_{k-i}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from pathlib import Path
from typing import Sequence

from .cyclotomic import CycNum, ModulusMismatch, galois_apply, invert

__all__ = [
    "Lrs",
    "CompanionData",
    "MinimalRecurrence",
    "term",
    "terms",
    "term_by_matrix",
    "companion",
    "normalize_integral",
    "galois_difference",
    "minimal_recurrence",
    "load_lrs",
    "dump_lrs",
    "mat_mul",
    "mat_pow",
    "mat_det",
]

LRS_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Lrs:
    m: int
    coeffs: tuple[CycNum, ...]
    initial: tuple[CycNum, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("an LRS needs at least one coefficient")
        if len(self.coeffs) != len(self.initial):
            raise ValueError("need exactly as many initial terms as coefficients")
        for x in (*self.coeffs, *self.initial):
            if x.m != self.m:
                raise ModulusMismatch(f"entry with modulus {x.m} in an LRS over modulus {self.m}")
        if self.coeffs[-1].is_zero():
            raise ValueError("the last coefficient c_n must be nonzero")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @classmethod
    def make(cls, m: int, coeffs: Sequence, initial: Sequence) -> Lrs:
        """Build from CycNums or plain rationals."""
        conv = lambda x: x if isinstance(x, CycNum) else CycNum.rational(m, x)  # noqa: E731
        return cls(m, tuple(map(conv, coeffs)), tuple(map(conv, initial)))

    def to_json(self) -> dict:
        return {
            "version": LRS_FORMAT_VERSION,
            "m": self.m,
            "coeffs": [c.to_json() for c in self.coeffs],
            "initial": [a.to_json() for a in self.initial],
        }

    @classmethod
    def from_json(cls, data: dict) -> Lrs:
        if data.get("version") != LRS_FORMAT_VERSION:
            raise ValueError(f"unsupported LRS file version {data.get('version')!r}")
        m = int(data["m"])
        coeffs = tuple(CycNum.from_json(c) for c in data["coeffs"])
        initial = tuple(CycNum.from_json(a) for a in data["initial"])
        return cls(m, coeffs, initial)


def load_lrs(path: str | Path) -> Lrs:
    with open(path) as fh:
        return Lrs.from_json(json.load(fh))


def dump_lrs(L: Lrs, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(L.to_json(), fh, indent=1)


def terms(L: Lrs, count: int, start: int = 0) -> list[CycNum]:
    """``a_start, ..., a_{start+count-1}`` by forward iteration.

    A large ``start`` is reached by powering the companion matrix once.
    """
    if count <= 0:
        return []
    n = L.n
    if start <= n + 64:
        hist = list(L.initial)
        skip = start
    else:
        hist = _state_at(L, start - n)
        skip = n
    out = hist[skip:]
    hist = hist[-n:]
    m = L.m
    while len(out) < count:
        nxt = CycNum.zero(m)
        for i, c in enumerate(L.coeffs, start=1):
            nxt = nxt + c * hist[-i]
        hist.append(nxt)
        del hist[0]
        if skip > n:
            skip -= 1
            continue
        out.append(nxt)
    return out[:count]


def _state_at(L: Lrs, e: int) -> list[CycNum]:
    """``[a_e, ..., a_{e+n-1}]`` from the row vector u M^e = (a_{n-1+e}, ..., a_e)."""
    data = companion(L)
    row = mat_mul([list(data.u)], mat_pow(data.matrix(), e))[0]
    return list(reversed(row))


def term(L: Lrs, k: int) -> CycNum:
    if k < 0:
        raise ValueError("index must be nonnegative")
    if k < L.n:
        return L.initial[k]
    return terms(L, k + 1)[k]


# ---------------------------------------------------------------------------
# small dense matrices over Q(zeta_m)

Matrix = list[list[CycNum]]


def mat_identity(m: int, n: int) -> Matrix:
    return [[CycNum.one(m) if i == j else CycNum.zero(m) for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    m = A[0][0].m
    out = []
    for row in A:
        new = []
        for j in range(len(B[0])):
            acc = CycNum.zero(m)
            for t, x in enumerate(row):
                if x:
                    y = B[t][j]
                    if y:
                        acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def mat_pow(A: Matrix, e: int) -> Matrix:
    if e < 0:
        raise ValueError("negative matrix power")
    result = mat_identity(A[0][0].m, len(A))
    base = A
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def mat_det(A: Matrix) -> CycNum:
    """Determinant by Gaussian elimination over the field."""
    m = A[0][0].m
    M = [list(r) for r in A]
    n = len(M)
    det = CycNum.one(m)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return CycNum.zero(m)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col]
        inv = invert(M[col][col])
        for r in range(col + 1, n):
            if M[r][col]:
                f = M[r][col] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return det


@dataclass(frozen=True)
class CompanionData:
    """``M`` with first column c and superdiagonal ones; ``a_k = u M^(k+1-n) v``."""

    M: tuple[tuple[CycNum, ...], ...]
    u: tuple[CycNum, ...]
    v: tuple[CycNum, ...]

    def matrix(self) -> Matrix:
        return [list(r) for r in self.M]


def companion(L: Lrs) -> CompanionData:
    n, m = L.n, L.m
    zero, one = CycNum.zero(m), CycNum.one(m)
    M = []
    for i in range(n):
        row = [zero] * n
        row[0] = L.coeffs[i]
        if i + 1 < n:
            row[i + 1] = one
        M.append(tuple(row))
    u = tuple(reversed(L.initial))
    v = tuple(one if i == 0 else zero for i in range(n))
    return CompanionData(tuple(M), u, v)


def term_by_matrix(L: Lrs, k: int) -> CycNum:
    """Random access to a_k through binary powering of the companion matrix."""
    n = L.n
    if k < n - 1:
        return L.initial[k]
    data = companion(L)
    P = mat_pow(data.matrix(), k + 1 - n)
    # u * P * v only needs the first column of P
    acc = CycNum.zero(L.m)
    for ui, row in zip(data.u, P):
        acc = acc + ui * row[0]
    return acc


def normalize_integral(L: Lrs) -> tuple[int, Lrs]:
    """Clear denominators: returns (lam, L') with term(L', k) = lam^(k+1) term(L, k)."""
    lam = lcm(*(x.denominator() for x in (*L.coeffs, *L.initial)))
    if lam == 1:
        return 1, L
    coeffs = tuple(c * lam**i for i, c in enumerate(L.coeffs, start=1))
    initial = tuple(a * lam ** (i + 1) for i, a in enumerate(L.initial))
    return lam, Lrs(L.m, coeffs, initial)


def _charpoly(coeffs: Sequence[CycNum]) -> list[CycNum]:
    """x^n - c_1 x^(n-1) - ... - c_n, highest degree first."""
    m = coeffs[0].m
    return [CycNum.one(m)] + [-c for c in coeffs]


def _polymul(a: Sequence[CycNum], b: Sequence[CycNum]) -> list[CycNum]:
    m = a[0].m
    out = [CycNum.zero(m)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def galois_difference(L: Lrs, j: int) -> Lrs:
    """The dimension-2n LRS whose k-th term is sigma_j(a_k) - a_k."""
    sigma_coeffs = [galois_apply(j, c) for c in L.coeffs]
    prod = _polymul(_charpoly(L.coeffs), _charpoly(sigma_coeffs))
    coeffs = tuple(-c for c in prod[1:])
    first = terms(L, 2 * L.n)
    initial = tuple(galois_apply(j, a) - a for a in first)
    return Lrs(L.m, coeffs, initial)


@dataclass(frozen=True)
class MinimalRecurrence:
    """Shortest recurrence found for a finite window.

    ``certified`` is true when the window holds at least ``2*dimension + 2``
    terms; even then minimality is only relative to the window.
    """

    dimension: int
    coeffs: tuple[CycNum, ...]
    window_length: int
    certified: bool

    def to_lrs(self, window: Sequence[CycNum]) -> Lrs:
        if self.dimension == 0 or self.coeffs[-1].is_zero():
            raise ValueError("window is eventually zero; no recurrence with c_n != 0")
        return Lrs(window[0].m, self.coeffs, tuple(window[: self.dimension]))

    def regenerate(self, window: Sequence[CycNum]) -> list[CycNum]:
        out = list(window[: self.dimension])
        m = window[0].m
        while len(out) < len(window):
            k = len(out)
            acc = CycNum.zero(m)
            for i, c in enumerate(self.coeffs, start=1):
                acc = acc + c * out[k - i]
            out.append(acc)
        return out


def minimal_recurrence(window: Sequence[CycNum]) -> MinimalRecurrence:
    """Berlekamp-Massey over Q(zeta_m)."""
    if not window:
        raise ValueError("empty window")
    m = window[0].m
    zero, one = CycNum.zero(m), CycNum.one(m)
    C = [one]  # connection polynomial, C[0] = 1
    B = [one]
    L = 0
    shift = 1
    b = one
    for k, s in enumerate(window):
        d = s
        for i in range(1, L + 1):
            if i < len(C) and C[i]:
                d = d + C[i] * window[k - i]
        if d.is_zero():
            shift += 1
            continue
        coef = d * invert(b)
        T = list(C)
        need = len(B) + shift
        if len(C) < need:
            C = C + [zero] * (need - len(C))
        for i, x in enumerate(B):
            C[i + shift] = C[i + shift] - coef * x
        if 2 * L <= k:
            L = k + 1 - L
            B = T
            b = d
            shift = 1
        else:
            shift += 1
    C = C + [zero] * (L + 1 - len(C))
    coeffs = tuple(-c for c in C[1 : L + 1])
    return MinimalRecurrence(L, coeffs, len(window), len(window) >= 2 * L + 2)


def rational_window(m: int, values: Sequence[int | Fraction]) -> list[CycNum]:
    return [CycNum.rational(m, v) for v in values]
