import itertools
import math
import time

import pytest
import sympy

from cycloperiod.bounds import (
    bound_R,
    e_exponent,
    floor_log,
    gl_order,
    max_order_gln,
    max_p_order,
    valuation,
)


def oracle_e(m: int, n: int, p: int) -> int:
    """Direct transcription of the case table, with floating logs guarded."""
    def flog(x: float) -> int:
        k = 0
        while p ** (k + 1) <= x + 1e-12:
            k += 1
        return k

    if m % p == 0:
        v = 0
        while m % p ** (v + 1) == 0:
            v += 1
        if p == 2 and v == 1:
            return 2 + flog(n)
        return v + flog(n)
    if p > n + 1:
        return 0
    return 1 + flog(n / (p - 1))


def oracle_R(m: int, n: int) -> int:
    mm = m if m % 2 == 0 else 2 * m
    if n == 1:
        return mm
    R = 1
    for p in sympy.primerange(2, max(mm, n + 1) + 1):
        R *= p ** oracle_e(mm, n, p)
    return R


def brute_max_order(n: int, ell: int) -> int:
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    def mul(A, B):
        return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) % ell for j in range(n)) for i in range(n))

    best = 0
    for entries in itertools.product(range(ell), repeat=n * n):
        A = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if sympy.Matrix(A).det() % ell == 0:
            continue
        P, k = A, 1
        while P != ident:
            P, k = mul(P, A), k + 1
        best = max(best, k)
    return best


def test_exponent_examples():
    assert e_exponent(2, 2, 5) == 0
    assert e_exponent(2, 2, 3) == 1
    assert e_exponent(2, 2, 2) == 3
    with pytest.raises(ValueError):
        e_exponent(3, 2, 2)


@pytest.mark.parametrize("m,n,R", [(12, 1, 12), (2, 2, 24), (3, 2, 24)])
def test_bound_examples(m, n, R):
    assert bound_R(m, n).R == R


@pytest.mark.parametrize("m", range(1, 31))
@pytest.mark.parametrize("n", range(1, 8))
def test_bound_matches_oracle(m, n):
    rep = bound_R(m, n)
    assert rep.R == oracle_R(m, n)
    assert math.prod(p**e for p, e in rep.factors.items()) == rep.R


def test_bound_is_fast():
    t0 = time.perf_counter()
    bound_R(12, 1)
    assert time.perf_counter() - t0 < 0.01


def test_helpers():
    assert valuation(2, 48) == 4
    assert floor_log(2, 8) == 3 and floor_log(2, 7) == 2
    assert floor_log(3, 2, 2) == 0
    assert gl_order(2, 3) == 48
    assert gl_order(3, 2) == 168


@pytest.mark.parametrize("n,ell,expected", [(2, 3, 8), (2, 5, 24), (3, 2, 7)])
def test_max_order_against_brute_force(n, ell, expected):
    assert brute_max_order(n, ell) == expected
    assert max_order_gln(n, ell) == expected


@pytest.mark.parametrize("ell", [2, 3, 5, 7])
def test_max_order_gl1(ell):
    assert max_order_gln(1, ell) == ell - 1


def test_max_p_order():
    assert max_p_order(3, 2, 2) == 1
    assert max_p_order(2, 3, 1) == 1
    assert max_p_order(5, 2, 3) == 0
    with pytest.raises(ValueError):
        max_p_order(3, 3, 2)
