"""Toric exponential sums over finite fields, evaluated exactly in Z[zeta_{pc}].

Conventions: psi(y) = zeta_p^y for y in F_p (lifted to 0..p-1), and
chi(g^i) = zeta_c^i for the primitive element g of the base field.  chi is
applied to the norm of the product x_1*...*x_m of the torus coordinates.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from .cyclotomic import CycNum, lift
from .ffield import FIELD_CAP, FiniteField, embed, field_make
from .laurent import LaurentPoly, parse_laurent
from .recurrence import MinimalRecurrence, minimal_recurrence, terms

__all__ = [
    "ExpSumSpec",
    "CapExceeded",
    "TORUS_CAP",
    "torus_size",
    "max_feasible_k",
    "exp_sum",
    "exp_sums",
    "affine_exp_sum",
    "gauss_sum",
    "kloosterman_poly",
    "kloosterman",
    "gauss_poly",
    "gauss_period_prediction",
    "gauss_degree_formula",
    "bombieri_bound",
    "extend_sequence",
]

TORUS_CAP = 10**8
_CHUNK = 1 << 20


class CapExceeded(ValueError):
    """The requested sum is beyond the desk-scale caps."""

    def __init__(self, message: str, largest_k: int | None = None) -> None:
        super().__init__(message)
        self.largest_k = largest_k


@dataclass(frozen=True)
class ExpSumSpec:
    poly: LaurentPoly
    c: int = 1

    def __post_init__(self) -> None:
        q = self.field.size
        if self.c < 1 or (q - 1) % self.c:
            raise ValueError(f"character order {self.c} must divide q-1 = {q - 1}")

    @property
    def field(self) -> FiniteField:
        return self.poly.field

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def modulus(self) -> int:
        return self.p * self.c

    @classmethod
    def parse(cls, p: int, f: int, text: str, c: int = 1, nvars: int | None = None) -> ExpSumSpec:
        return cls(parse_laurent(text, field_make(p, f), nvars), c)


def torus_size(spec: ExpSumSpec, k: int) -> int:
    return (spec.field.size**k - 1) ** spec.poly.nvars


def max_feasible_k(spec: ExpSumSpec, cap: int = TORUS_CAP) -> int:
    k = 0
    while spec.field.size ** (k + 1) <= FIELD_CAP and torus_size(spec, k + 1) <= cap:
        k += 1
    return k


def _sweep(
    trace_tab: np.ndarray,
    term_logs: Sequence[int],
    term_exps: np.ndarray,
    order: int,
    nvars: int,
    lo: int,
    hi: int,
    p: int,
    c: int,
    chi_mult: int,
    chi_mod: int,
) -> np.ndarray:
    """Histogram of zeta_{pc} exponents over flat torus indices [lo, hi)."""
    flat = np.arange(lo, hi, dtype=np.int64)
    coords = []
    rest = flat
    for _ in range(nvars):
        rest, r = np.divmod(rest, order)
        coords.append(r)
    tr = np.zeros(hi - lo, dtype=np.int64)
    for logc, exps in zip(term_logs, term_exps):
        idx = np.full(hi - lo, logc, dtype=np.int64)
        for x, e in zip(coords, exps):
            if e:
                idx += x * int(e)
        idx %= order
        tr += trace_tab[idx]
    tr %= p
    if c > 1:
        s = np.zeros(hi - lo, dtype=np.int64)
        for x in coords:
            s += x
        chi = (s % chi_mod) * chi_mult % c
        expo = (c * tr + p * chi) % (p * c)
    else:
        expo = tr
    return np.bincount(expo, minlength=p * c)


def exp_sum(spec: ExpSumSpec, k: int, threads: int = 1, cap: int = TORUS_CAP) -> CycNum:
    """S_k(f, chi) by brute force over the torus (F_{q^k}^x)^m."""
    if k < 1:
        raise ValueError("k must be positive")
    base = spec.field
    p, c = spec.p, spec.c
    size = torus_size(spec, k)
    if base.size**k > FIELD_CAP or size > cap:
        raise CapExceeded(
            f"S_{k} needs a torus of {size} points (cap {cap}, field cap {FIELD_CAP}); "
            f"largest feasible k is {max_feasible_k(spec, cap)}",
            max_feasible_k(spec, cap),
        )
    ext = field_make(p, base.d * k)
    emb = embed(base, ext)
    order = ext.size - 1
    nvars = spec.poly.nvars
    term_logs = [emb.log_image(base.log(coef)) for _, coef in spec.poly.terms]
    term_exps = np.array([exps for exps, _ in spec.poly.terms], dtype=np.int64).reshape(-1, nvars)
    # chi(N(x)) = zeta_c^(ind_g N(x)); N(g_ext^s) has index s * u^-1 mod q-1, where
    # the image of g is g_ext^(u * step)
    q1 = base.size - 1
    u = emb.exponent // emb.exponent_step
    chi_mult = pow(u, -1, q1) if q1 > 1 else 0
    trace_tab = ext.trace_by_log if term_logs else np.zeros(order, dtype=np.int8)
    bounds = list(range(0, size, _CHUNK)) + [size]
    jobs = list(zip(bounds[:-1], bounds[1:]))

    def run(job: tuple[int, int]) -> np.ndarray:
        return _sweep(trace_tab, term_logs, term_exps, order, nvars, job[0], job[1], p, c, chi_mult, q1 or 1)

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    counts = np.sum(parts, axis=0) if parts else np.zeros(p * c, dtype=np.int64)
    return CycNum.from_exponents(p * c, [int(v) for v in counts])


def exp_sums(spec: ExpSumSpec, kmax: int, threads: int = 1, cap: int = TORUS_CAP) -> list[CycNum]:
    """[S_1, ..., S_kmax]."""
    return [exp_sum(spec, k, threads, cap) for k in range(1, kmax + 1)]


def affine_exp_sum(spec: ExpSumSpec, k: int, threads: int = 1, cap: int = TORUS_CAP) -> CycNum:
    """The sum of psi(Tr f(x)) over all of F_{q^k}^m, for a polynomial f and trivial chi.

    Each face of the affine space where a set of coordinates vanishes
    contributes the toric sum of f restricted to the remaining coordinates.
    """
    if spec.c != 1:
        raise ValueError("affine sums are only defined here for trivial chi")
    poly = spec.poly
    if any(e < 0 for exps, _ in poly.terms for e in exps):
        raise ValueError("affine sums need nonnegative exponents")
    p = spec.p
    total = CycNum.zero(p)
    nv = poly.nvars
    for mask in range(1 << nv):
        keep = [i for i in range(nv) if mask >> i & 1]
        face_terms = [
            (tuple(exps[i] for i in keep), c)
            for exps, c in poly.terms
            if all(exps[i] == 0 for i in range(nv) if i not in keep)
        ]
        if keep:
            sub = LaurentPoly.from_terms(poly.field, len(keep), face_terms)
            total = total + exp_sum(ExpSumSpec(sub, 1), k, threads, cap)
        else:
            # the origin: f(0) is the constant term, an element of F_q
            const = next((c for exps, c in poly.terms if not any(exps)), 0)
            tr = k * poly.field.trace_to_prime(const) % p
            total = total + CycNum.from_exponents(p, {tr: 1})
    return total


def gauss_sum(field: FiniteField, e: int) -> CycNum:
    """tau(eta) for the character eta(g) = zeta_e, in Q(zeta_{pe})."""
    if e <= 1 or (field.size - 1) % e:
        raise ValueError(f"character order {e} must be > 1 and divide q-1 = {field.size - 1}")
    poly = LaurentPoly.from_terms(field, 1, [((1,), 1)])
    return exp_sum(ExpSumSpec(poly, e), 1)


def kloosterman_poly(field: FiniteField, n: int, a: int) -> LaurentPoly:
    """x_1 + ... + x_{n-1} + a / (x_1 ... x_{n-1})."""
    if n < 2:
        raise ValueError("Kloosterman sums need n >= 2")
    if a == 0:
        raise ValueError("a must be nonzero")
    nv = n - 1
    terms = [(tuple(int(i == j) for j in range(nv)), 1) for i in range(nv)]
    terms.append(((-1,) * nv, a))
    return LaurentPoly.from_terms(field, nv, terms)


def kloosterman(field: FiniteField, n: int, a: int, k: int, threads: int = 1, cap: int = TORUS_CAP) -> CycNum:
    """The n-dimensional Kloosterman sum S_k, returned at modulus 2p."""
    s = exp_sum(ExpSumSpec(kloosterman_poly(field, n, a), 1), k, threads, cap)
    return lift(s, 2 * field.p)


def gauss_poly(field: FiniteField, d: int, a: int) -> LaurentPoly:
    """x^d + a."""
    return LaurentPoly.from_terms(field, 1, [((d,), 1), ((0,), a)])


def gauss_period_prediction(p: int, q: int, d: int, a: int) -> int | None:
    """Predicted period of Q(S_k(x^d + a)), or None outside the covered cases.

    ``a`` is an element code of F_q.  When d divides both p-1 and
    (q-1)/(p-1) the (q-1)/(p-1) rows are used.
    """
    if (q - 1) % d:
        raise ValueError(f"d={d} must divide q-1={q - 1}")
    f = _degree_of(p, q)
    trace_zero = field_make(p, f).trace_to_prime(a) == 0
    if ((q - 1) // (p - 1)) % d == 0:
        return 1 if trace_zero else p
    if (p - 1) % d == 0:
        return d if trace_zero else p * d
    return None


def gauss_degree_formula(p: int, q: int, d: int, k: int) -> int:
    """(p-1) / gcd(p-1, (q^k-1)/d), the degree of Q(S_k(x^d))."""
    if (q**k - 1) % d:
        raise ValueError("d must divide q^k - 1")
    if (p - 1) % d and ((q - 1) // (p - 1)) % d:
        raise ValueError("formula needs d | p-1 or d | (q-1)/(p-1)")
    return (p - 1) // gcd(p - 1, (q**k - 1) // d)


def bombieri_bound(d: int) -> int:
    """Upper bound 4d + 5 on the number of zeros and poles of the L-function."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    return 4 * d + 5


def _degree_of(p: int, q: int) -> int:
    f, x = 0, 1
    while x < q:
        x *= p
        f += 1
    if x != q:
        raise ValueError(f"q={q} is not a power of p={p}")
    return f


def extend_sequence(window: Sequence[CycNum], count: int) -> tuple[list[CycNum], MinimalRecurrence]:
    """Continue a window to ``count`` terms with its minimal recurrence.

    The exponential-sum window S_1, S_2, ... becomes a_0, a_1, ... here.
    """
    rec = minimal_recurrence(window)
    if rec.regenerate(window) != list(window):
        raise ArithmeticError("recovered recurrence does not reproduce the window")
    if count <= len(window):
        return list(window[:count]), rec
    if rec.dimension == 0:
        return list(window) + [CycNum.zero(window[0].m)] * (count - len(window)), rec
    L = rec.to_lrs(window)
    return terms(L, count), rec


