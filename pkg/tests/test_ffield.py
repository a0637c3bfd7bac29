import pytest
import sympy
from hypothesis import given, strategies as st

from cycloperiod.ffield import embed, field_make

x = sympy.Symbol("x")
FIELDS = [(2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2)]


def sympy_mul(F, a, b):
    """Product via sympy polynomials over GF(p), independent of the package's arithmetic."""
    mod = sympy.Poly(list(reversed(F.modulus)), x, modulus=F.p)
    pa = sympy.Poly(list(reversed(F.to_poly(a))) or [0], x, modulus=F.p)
    pb = sympy.Poly(list(reversed(F.to_poly(b))) or [0], x, modulus=F.p)
    r = (pa * pb).rem(mod)
    coeffs = [int(c) % F.p for c in reversed(r.all_coeffs())]
    return F.from_poly(coeffs)


def test_small_fields():
    F3 = field_make(3, 1)
    assert F3.g == 2
    assert field_make(5, 1).g == 2
    assert field_make(2, 3).modulus == (1, 1, 0, 1)


@pytest.mark.parametrize("p,d", FIELDS)
def test_modulus_is_irreducible_and_smallest(p, d):
    F = field_make(p, d)
    poly = sympy.Poly(list(reversed(F.modulus)), x, modulus=p)
    assert poly.is_irreducible
    # every smaller monic candidate (by code of the lower coefficients) is reducible
    target = sum(c * p**i for i, c in enumerate(F.modulus[:-1]))
    for code in range(target):
        low = [(code // p**i) % p for i in range(d)]
        cand = sympy.Poly(list(reversed(low + [1])), x, modulus=p)
        assert not cand.is_irreducible


@pytest.mark.parametrize("p,d", FIELDS)
def test_primitive_element(p, d):
    F = field_make(p, d)
    seen = set()
    y = 1
    for _ in range(F.size - 1):
        seen.add(y)
        y = F.mul(y, F.g)
    assert len(seen) == F.size - 1 and 0 not in seen
    assert all(F.order(c) < F.size - 1 for c in range(1, F.g))


@pytest.mark.parametrize("p,d", FIELDS)
def test_multiplication_matches_sympy(p, d):
    F = field_make(p, d)
    for a in range(0, F.size, max(1, F.size // 13)):
        for b in range(0, F.size, max(1, F.size // 11)):
            assert F.mul(a, b) == sympy_mul(F, a, b)


@pytest.mark.parametrize("p,d", FIELDS)
def test_inverse_and_log(p, d):
    F = field_make(p, d)
    for a in range(1, F.size):
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(F.g, F.log(a)) == a


def test_trace_examples():
    F4 = field_make(2, 2)
    assert F4.modulus == (1, 1, 1)
    assert F4.trace_to_prime(F4.g) == 1
    assert F4.trace_to_prime(0) == 0
    F9 = field_make(3, 2)
    assert F9.trace_to_prime(F9.prime_element(2)) == 2 * 2 % 3


@pytest.mark.parametrize("p,d", FIELDS)
def test_trace_is_linear_and_table_agrees(p, d):
    F = field_make(p, d)
    table = F.trace_by_log
    for i in range(F.size - 1):
        assert table[i] == F.trace_to_prime(F.pow(F.g, i))
    for a in range(0, F.size, 3):
        for b in range(0, F.size, 5):
            assert F.trace_to_prime(F.add(a, b)) == (F.trace_to_prime(a) + F.trace_to_prime(b)) % p


def test_norm():
    F9 = field_make(3, 2)
    n = F9.norm_to(F9.g, 1)
    assert n < 3 and F9.order(n) == 2
    F3 = field_make(3, 1)
    emb = embed(F3, F9)
    assert F9.norm_to(emb(2), 1) == emb(F3.pow(2, 2))
    assert F3.norm_to(2, 1) == 2


@pytest.mark.parametrize("base,ext", [((3, 1), (3, 2)), ((2, 2), (2, 4)), ((3, 2), (3, 4)), ((5, 1), (5, 3)), ((2, 1), (2, 3))])
def test_embedding_is_homomorphism(base, ext):
    B, E = field_make(*base), field_make(*ext)
    emb = embed(B, E)
    for a in range(B.size):
        for b in range(B.size):
            assert emb(B.mul(a, b)) == E.mul(emb(a), emb(b))
            assert emb(B.add(a, b)) == E.add(emb(a), emb(b))
        assert emb.preimage(emb(a)) == a
        # the image is fixed by the q-power Frobenius
        assert E.pow(emb(a), B.size) == emb(a)


def test_embedding_identity():
    F = field_make(3, 2)
    emb = embed(F, F)
    assert all(emb(a) == a for a in range(F.size))


def test_caps_and_validation():
    with pytest.raises(ValueError):
        field_make(4, 1)
    with pytest.raises(ValueError):
        field_make(3, 16)


@given(st.integers(0, 80), st.integers(0, 80))
def test_field_axioms_f81(a, b):
    F = field_make(3, 4)
    assert F.add(a, F.neg(a)) == 0
    assert F.mul(a, F.add(b, 1)) == F.add(F.mul(a, b), a)
