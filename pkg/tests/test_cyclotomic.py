from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from cycloperiod.cyclotomic import (
    CycNum,
    ModulusMismatch,
    cyc_from_root_power,
    cyclotomic_polynomial,
    element_of_order,
    embed_mod_ell,
    euler_phi,
    galois_apply,
    invert,
    lift,
    units,
)

from strategies import MODULI, cycnum_pairs, cycnums

x = sympy.Symbol("x")


@pytest.mark.parametrize("m", range(1, 61))
def test_cyclotomic_polynomial_matches_sympy(m):
    expected = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(m)) == [int(c) for c in expected]
    assert len(cyclotomic_polynomial(m)) - 1 == euler_phi(m) == sympy.totient(m)


def test_units():
    assert units(12) == (1, 5, 7, 11)
    assert units(1) == (0,) or units(1) == (1,)


def test_zeta_power_relations():
    z = cyc_from_root_power(12, 1)
    assert z**12 == 1
    assert z**6 == -1
    assert z**4 - z**2 + 1 == 0
    assert z**8 + z**4 + 1 == 0  # zeta^4 is a primitive cube root of unity
    i = cyc_from_root_power(4, 1)
    assert i * i == -1
    assert str(i) == "z"


@given(cycnum_pairs())
def test_field_axioms(pair):
    a, b = pair
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) - b == a
    assert a * (b + 1) == a * b + a
    if not b.is_zero():
        assert (a / b) * b == a


@given(cycnums(), cycnums())
def test_modulus_mismatch(a, b):
    if a.m != b.m and a.m > 1 and b.m > 1:
        with pytest.raises(ModulusMismatch):
            a + b


@given(cycnums())
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            invert(a)
    else:
        assert a * invert(a) == 1
        assert a ** -2 * a**2 == 1


@given(cycnum_pairs(), st.data())
def test_galois_is_homomorphism(pair, data):
    a, b = pair
    j = data.draw(st.sampled_from(units(a.m)))
    assert galois_apply(j, a * b) == galois_apply(j, a) * galois_apply(j, b)
    assert galois_apply(j, a + b) == galois_apply(j, a) + galois_apply(j, b)
    assert galois_apply(1, a) == a


@given(cycnums(), st.data())
def test_galois_composition(a, data):
    m = a.m
    j = data.draw(st.sampled_from(units(m)))
    k = data.draw(st.sampled_from(units(m)))
    assert galois_apply(j, galois_apply(k, a)) == galois_apply(j * k % m if m > 1 else 0, a)


@given(cycnums())
def test_norm_is_product_of_conjugates(a):
    prod = CycNum.one(a.m)
    for j in units(a.m):
        prod = prod * galois_apply(j, a)
    assert prod.is_rational()
    assert prod == a.norm()


@given(cycnums(), st.sampled_from([2, 3]))
def test_lift_preserves_arithmetic(a, factor):
    b = lift(a, a.m * factor)
    assert lift(a * a, a.m * factor) == b * b
    assert b.m == a.m * factor


def test_lift_of_zeta():
    assert lift(cyc_from_root_power(3, 1), 6) == cyc_from_root_power(6, 2)


@given(cycnums())
def test_json_round_trip(a):
    assert CycNum.from_json(a.to_json()) == a


def test_from_exponents():
    # 1 + z + z^2 = 0 in Q(zeta_3)
    assert CycNum.from_exponents(3, [1, 1, 1]).is_zero()
    assert CycNum.from_exponents(5, {0: 2, 1: 1}) == 2 + cyc_from_root_power(5, 1)


@pytest.mark.parametrize("m,ell", [(4, 5), (8, 17), (12, 13), (5, 11)])
def test_embed_mod_ell_is_ring_map(m, ell):
    t = element_of_order(m, ell)
    assert pow(t, m, ell) == 1 and all(pow(t, m // p, ell) != 1 for p in sympy.primefactors(m))
    z = cyc_from_root_power(m, 1)
    a, b = 3 + 2 * z, z**3 - 5
    assert embed_mod_ell(a * b, ell, t) == embed_mod_ell(a, ell, t) * embed_mod_ell(b, ell, t) % ell
    assert embed_mod_ell(a + b, ell, t) == (embed_mod_ell(a, ell, t) + embed_mod_ell(b, ell, t)) % ell


def test_embed_mod_ell_rejects():
    with pytest.raises(ValueError):
        embed_mod_ell(CycNum.one(4), 7, 2)  # 7 is not 1 mod 4
    with pytest.raises(ValueError):
        embed_mod_ell(CycNum.rational(4, Fraction(1, 2)), 5, 2)


@pytest.mark.parametrize("m", MODULI)
def test_rational_detection(m):
    assert CycNum.rational(m, Fraction(3, 7)).is_rational()
    assert CycNum.rational(m, Fraction(3, 7)).denominator() == 7
