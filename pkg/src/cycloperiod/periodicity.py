"""Detection and certification of virtual periods.

Everything here works on a finite window ``k = 0..K``.  The window alone can
only suggest a period; :func:`verify_against_bound` and
:func:`certified_multiple` record how much more is known about it.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from math import lcm
from typing import Any, Callable, Hashable, Sequence

from sympy import factorint, isprime, nextprime

from .bounds import bound_R, gl_order
from .cyclotomic import CycNum, element_of_order, embed_mod_ell, galois_apply, units
from .recurrence import Lrs, companion, normalize_integral, terms
from .subfields import SubfieldDesc, field_leq, fixing_subgroup

__all__ = [
    "Certification",
    "PeriodReport",
    "ZeroSetDecomposition",
    "SingularReduction",
    "find_split_prime",
    "reduce_matrix",
    "order_mod",
    "matrix_order_mod",
    "zero_set_decompose",
    "field_sequence",
    "detect_virtual_period",
    "verify_against_bound",
    "certified_multiple",
    "certify_with_multiple",
    "monotone_containment_failures",
    "default_window",
    "zero_indicator_period",
]

WINDOW_CAP = 10_000


class Certification(str, enum.Enum):
    WINDOW_ONLY = "WindowOnly"
    DIVIDES_BOUND = "DividesBound"
    CERTIFIED_MULTIPLE = "CertifiedMultiple"
    FAILED = "Failed"


class SingularReduction(ArithmeticError):
    """The matrix is not invertible modulo the chosen prime."""


@dataclass(frozen=True)
class PeriodReport:
    N: int | None
    r: int | None
    K: int
    certification: Certification = Certification.WINDOW_ONLY
    R: int | None = None
    s_ell: int | None = None
    ell: int | None = None
    bound_violation: bool = False
    index_base: int = 0

    @property
    def found(self) -> bool:
        return self.r is not None

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "K": self.K,
            "certification": self.certification.value,
            "R": None if self.R is None else str(self.R),
            "s_ell": self.s_ell,
            "ell": self.ell,
            "bound_violation": self.bound_violation,
            "index_base": self.index_base,
        }


@dataclass(frozen=True)
class ZeroSetDecomposition:
    """Zeros in ``[0, K]``: each ``(i, s)`` stands for ``{i, i+s, i+2s, ...}``."""

    progressions: tuple[tuple[int, int], ...]
    exceptional: tuple[int, ...]
    s: int
    K: int

    def zeros(self) -> list[int]:
        covered = set(self.exceptional)
        for i, s in self.progressions:
            covered.update(range(i, self.K + 1, s))
        return sorted(covered)

    def to_json(self) -> dict:
        return {
            "progressions": [list(p) for p in self.progressions],
            "exceptional": list(self.exceptional),
            "s": self.s,
            "K": self.K,
        }


# ---------------------------------------------------------------------------
# split primes and orders modulo them

def _as_int(avoid) -> int:
    if isinstance(avoid, Fraction):
        if avoid.denominator != 1:
            raise ValueError("avoid must be an integer")
        avoid = avoid.numerator
    return int(avoid)


def find_split_prime(m: int, avoid: int = 1, skip: Sequence[int] = ()) -> int:
    """Smallest prime ell > 2 with ell = 1 (mod m), ell not dividing ``avoid`` and not in ``skip``."""
    avoid = _as_int(avoid)
    if avoid == 0:
        raise ValueError("avoid must be nonzero")
    if m < 1:
        raise ValueError("m must be positive")
    ell = 2
    while True:
        ell = nextprime(ell)
        if (ell - 1) % m == 0 and avoid % ell and ell not in skip:
            return ell


IntMatrix = tuple[tuple[int, ...], ...]


def reduce_matrix(M: Sequence[Sequence[CycNum]], ell: int, t: int) -> IntMatrix:
    return tuple(tuple(embed_mod_ell(x, ell, t) for x in row) for row in M)


def _mat_mul_mod(A: IntMatrix, B: IntMatrix, ell: int) -> IntMatrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) % ell for col in cols) for row in A)


def _mat_pow_mod(A: IntMatrix, e: int, ell: int) -> IntMatrix:
    n = len(A)
    result = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    while e:
        if e & 1:
            result = _mat_mul_mod(result, A, ell)
        e >>= 1
        if e:
            A = _mat_mul_mod(A, A, ell)
    return result


def _det_mod(A: IntMatrix, ell: int) -> int:
    M = [list(r) for r in A]
    n = len(M)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] % ell), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col] % ell
        inv = pow(M[col][col], -1, ell)
        for r in range(col + 1, n):
            f = M[r][col] * inv % ell
            if f:
                M[r] = [(x - f * y) % ell for x, y in zip(M[r], M[col])]
    return det % ell


def order_mod(A: IntMatrix, ell: int) -> int:
    """Multiplicative order of an invertible matrix over F_ell.

    Starts from |GL_n(F_ell)| and strips prime factors while the power stays
    the identity.
    """
    n = len(A)
    if _det_mod(A, ell) == 0:
        raise SingularReduction(f"matrix is singular modulo {ell}")
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    s = gl_order(n, ell)
    for p, e in factorint(s).items():
        for _ in range(e):
            if _mat_pow_mod(A, s // p, ell) == ident:
                s //= p
            else:
                break
    return s


def matrix_order_mod(M: Sequence[Sequence[CycNum]], ell: int, t: int) -> int:
    """Order of the reduction of an integral matrix over Z[zeta_m] under zeta_m -> t."""
    return order_mod(reduce_matrix(M, ell, t), ell)


# ---------------------------------------------------------------------------
# zero sets and field sequences

def zero_set_decompose(
    L: Lrs, K: int, s: int, values: Sequence[CycNum] | None = None
) -> ZeroSetDecomposition:
    """Describe ``{k <= K : a_k = 0}`` as progressions modulo s plus exceptions.

    A residue class counts as a progression when every member in the second
    half of the window vanishes; its earlier non-vanishing members push the
    progression start forward and earlier zeros become exceptional.
    """
    if s < 1:
        raise ValueError("s must be positive")
    if K < 4 * s:
        raise ValueError(f"window K={K} too small for modulus s={s} (need K >= 4s)")
    vals = list(values) if values is not None else terms(L, K + 1)
    if len(vals) < K + 1:
        raise ValueError("not enough precomputed values")
    zero = [v.is_zero() for v in vals[: K + 1]]
    half = (K + 1) // 2
    progressions = []
    covered: set[int] = set()
    for i in range(s):
        members = range(i, K + 1, s)
        sampled = [k for k in members if k >= half]
        if sampled and all(zero[k] for k in sampled):
            start = sampled[0]
            while start - s >= 0 and zero[start - s]:
                start -= s
            progressions.append((start, s))
            covered.update(range(start, K + 1, s))
    exceptional = tuple(k for k in range(K + 1) if zero[k] and k not in covered)
    return ZeroSetDecomposition(tuple(progressions), exceptional, s, K)


def field_sequence(L: Lrs, K: int, values: Sequence[CycNum] | None = None) -> list[SubfieldDesc]:
    """``Q(a_k)`` for ``k = 0..K``, each as a fixing subgroup."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    vals = values if values is not None else terms(L, K + 1)
    return [fixing_subgroup(v) for v in vals[: K + 1]]


def detect_virtual_period(
    xs: Sequence[Hashable],
    index_base: int = 0,
    key: Callable[[Any], Hashable] | None = None,
) -> PeriodReport:
    """Smallest r (and then smallest N) with ``x_k = x_{k+r}`` for all ``N <= k`` in the window.

    A candidate only counts when its periodic tail holds at least two full
    periods and at least half of the window; otherwise every r would be
    trivially valid with N at the end of the window.
    """
    K = len(xs)
    if K < 2:
        raise ValueError("need at least two values")
    ids: dict[Hashable, int] = {}
    seq = [ids.setdefault(key(x) if key else x, len(ids)) for x in xs]
    min_tail = max(2, (K + 1) // 2)
    last = K - 1 + index_base
    for r in range(1, K // 2 + 1):
        k = K - r - 1
        while k >= 0 and seq[k] == seq[k + r]:
            k -= 1
        N = k + 1
        tail = K - N
        if tail >= 2 * r and tail >= min_tail:
            return PeriodReport(N + index_base, r, last, index_base=index_base)
    return PeriodReport(None, None, last, Certification.FAILED, index_base=index_base)


def verify_against_bound(report: PeriodReport, R: int) -> PeriodReport:
    if not report.found:
        raise ValueError("no period was detected")
    if report.r is not None and R % report.r == 0:
        cert = report.certification
        if cert in (Certification.WINDOW_ONLY, Certification.FAILED):
            cert = Certification.DIVIDES_BOUND
        return replace(report, certification=cert, R=R, bound_violation=False)
    return replace(report, R=R, bound_violation=True)


def certify_with_multiple(report: PeriodReport, ell: int, s_ell: int) -> PeriodReport:
    if not report.found:
        raise ValueError("no period was detected")
    out = replace(report, ell=ell, s_ell=s_ell)
    if s_ell % report.r == 0:
        out = replace(out, certification=Certification.CERTIFIED_MULTIPLE)
    return out


def certified_multiple(L: Lrs, ell: int | None = None, skip: Sequence[int] = ()) -> tuple[int, int]:
    """A prime ell and a multiple s_ell of every zero-set modulus and field-sequence period.

    s_ell is the lcm over all sigma_j of the order of sigma_j(M) modulo a
    prime above ell, for the companion matrix M of the integral normalization.
    """
    _, Ln = normalize_integral(L)
    m = Ln.m
    norm = Ln.coeffs[-1].norm()
    if ell is None:
        ell = find_split_prime(m, norm, skip)
    elif not isprime(ell) or ell < 3 or (ell - 1) % m or norm.numerator % ell == 0:
        raise ValueError(f"ell={ell} is not an odd split prime avoiding the norm of c_n")
    t = element_of_order(m, ell)
    M = companion(Ln).M
    s = 1
    for j in units(m):
        Mj = [[galois_apply(j, x) for x in row] for row in M]
        s = lcm(s, matrix_order_mod(Mj, ell, t))
    return ell, s


def monotone_containment_failures(fields: Sequence[SubfieldDesc], N: int, r: int) -> list[int]:
    """Indices k < N for which Q(a_k) is not inside Q(a_k') with k' = least index >= N, k' = k mod r."""
    bad = []
    for k in range(min(N, len(fields))):
        kp = k + ((N - k + r - 1) // r) * r
        if kp < len(fields) and not field_leq(fields[k], fields[kp]):
            bad.append(k)
    return bad


def default_window(m: int, n: int) -> int:
    return min(WINDOW_CAP, max(200, 8 * bound_R(m, min(n, 3)).R))


def zero_indicator_period(values: Sequence[CycNum]) -> int:
    """Detected period of the zero pattern, or 1 when none is found."""
    rep = detect_virtual_period([v.is_zero() for v in values])
    return rep.r if rep.found else 1

