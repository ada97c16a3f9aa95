import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmbsd.qfield import (
    INERT,
    RAMIFIED,
    SPLIT,
    FracIdeal,
    QElem,
    QuadField,
    characters,
    class_group,
    elem_norm,
    factor_ideal,
    ideal_eq,
    ideal_inv,
    ideal_mul,
    ideal_norm,
    is_fundamental,
    orthogonality_exact,
    prime_above,
    reduced_forms,
    split_type,
)

DISCS = [-3, -4, -7, -8, -11, -15, -20, -23, -84]
small = st.integers(-30, 30)


def test_elem_norms(Qi):
    assert elem_norm(Qi.one) == 1
    assert elem_norm(Qi.gaussian(1, 1)) == 2
    assert elem_norm(Qi.gaussian(-1, 2)) == 5


def test_gaussian_i_squares_to_minus_one(Qi):
    i = Qi.gaussian(0, 1)
    assert i * i == Qi.elem(-1)


def test_not_fundamental():
    assert not is_fundamental(-12)
    with pytest.raises(ValueError):
        QuadField(-16)
    with pytest.raises(ValueError):
        QuadField(5)


@given(st.sampled_from(DISCS), small, small, small, small)
def test_norm_multiplicative_and_conj_involution(D, a, b, c, d):
    K = QuadField(D)
    x, y = K.elem(a, b), K.elem(c, d)
    assert (x * y).norm() == x.norm() * y.norm()
    assert x.conj().conj() == x
    assert K.elem(a).conj() == K.elem(a)
    assert (x + y).conj() == x.conj() + y.conj()


@given(st.sampled_from(DISCS), small, small)
def test_division_inverts_multiplication(D, a, b):
    K = QuadField(D)
    x = K.elem(a, b)
    if x:
        assert (x * K.elem(3, -2)) / x == K.elem(3, -2)


def test_ideal_norm_examples(Qi):
    assert ideal_norm(FracIdeal.unit(Qi)) == 1
    P = FracIdeal.generated_by(Qi, Qi.gaussian(1, 1))
    assert ideal_norm(P) == 2
    assert ideal_norm(FracIdeal.generated_by(Qi, 2) / P) == 2


def test_ideal_group_examples(Qi):
    I = FracIdeal.generated_by(Qi, Qi.gaussian(3, 7), 11)
    assert ideal_eq(ideal_mul(I, ideal_inv(I)), FracIdeal.unit(Qi))
    a = FracIdeal.generated_by(Qi, Qi.gaussian(1, 1))
    b = FracIdeal.generated_by(Qi, Qi.gaussian(1, -1))
    assert a * b == FracIdeal.generated_by(Qi, 2)


def test_nonprincipal_square_q_sqrt_minus5():
    K = QuadField(-20)
    s = K.from_sqrt(1, Fraction(1, 2))  # 1 + sqrt(-5), since sqrt(D) = 2 sqrt(-5)
    P = FracIdeal.generated_by(K, 2, s)
    assert P.norm() == 2
    assert not P.is_principal()
    assert P * P == FracIdeal.generated_by(K, 2)


def _brute_ideal_product(I, J):
    # Z-span of all pairwise products of Z-basis elements, via the same HNF
    gens = [x * y for x, y in itertools.product(I.z_basis(), J.z_basis())]
    return FracIdeal.from_z_basis(I.K, gens)


@settings(max_examples=60)
@given(st.sampled_from(DISCS), small, small, st.integers(1, 20), small, small, st.integers(1, 20))
def test_norm_is_homomorphism(D, a, b, m, c, d, n):
    K = QuadField(D)
    x, y = K.elem(a, b), K.elem(c, d)
    if not x or not y:
        return
    I = FracIdeal.generated_by(K, x, m)
    J = FracIdeal.generated_by(K, y, n)
    assert (I * J).norm() == I.norm() * J.norm()
    assert I * J == _brute_ideal_product(I, J)
    assert I * I.inverse() == FracIdeal.unit(K)
    assert FracIdeal.from_json(K, I.to_json()) == I


@settings(max_examples=40)
@given(st.sampled_from([-3, -4, -7, -8, -20]), st.integers(-6, 6), st.integers(-6, 6), st.integers(1, 9))
def test_quotient_cardinality_equals_norm(D, a, b, m):
    K = QuadField(D)
    x = K.elem(a, b)
    I = FracIdeal.generated_by(K, x, m) if x else FracIdeal.generated_by(K, m)
    n = int(I.norm())
    if n > 400:
        return
    # O_K / I by coset enumeration over a box that surjects onto the quotient
    reps = {I.residue(K.elem(u, v)) for u in range(n) for v in range(n)}
    assert len(reps) == n


def test_split_types(Qi):
    assert split_type(5, Qi) == SPLIT
    assert split_type(3, Qi) == INERT
    assert split_type(2, Qi) == RAMIFIED


def test_prime_above_examples(Qi):
    P5 = prime_above(5, Qi)
    assert P5.norm() == 5 and 5 in P5
    assert Qi.gaussian(2, 1) in P5 or Qi.gaussian(2, -1) in P5
    assert prime_above(3, Qi).norm() == 9
    assert prime_above(2, Qi) == FracIdeal.generated_by(Qi, Qi.gaussian(1, 1))
    # deterministic
    assert prime_above(5, Qi) == prime_above(5, QuadField(-4))


@pytest.mark.parametrize("D", DISCS)
def test_prime_products(D):
    K = QuadField(D)
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        P = prime_above(p, K)
        st_ = split_type(p, K)
        if st_ == SPLIT:
            assert P * P.conj() == FracIdeal.generated_by(K, p)
            assert P != P.conj()
        elif st_ == RAMIFIED:
            assert P * P == FracIdeal.generated_by(K, p)
        else:
            assert P == FracIdeal.generated_by(K, p)


def test_factor_ideal_roundtrip():
    K = QuadField(-23)
    I = FracIdeal.generated_by(K, K.elem(7, 3)) / 6
    prod = FracIdeal.unit(K)
    for P, e in factor_ideal(I):
        prod = prod * P**e
    assert prod == I


def _brute_class_number(D):
    # independent count of reduced forms straight from the definition
    n = 0
    for a in range(1, 200):
        for b in range(-a, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (abs(b) == a or a == c) and b < 0:
                continue
            from math import gcd

            if gcd(gcd(a, b), c) == 1:
                n += 1
    return n


@pytest.mark.parametrize("D,h", [(-3, 1), (-4, 1), (-7, 1), (-23, 3), (-47, 5), (-84, 4), (-71, 7), (-56, 4)])
def test_class_numbers(D, h):
    G = class_group(D)
    assert G.order == h == _brute_class_number(D)
    for a, b, c in G.forms:
        assert b * b - 4 * a * c == D
        assert abs(b) <= a <= c


@pytest.mark.parametrize("D", [-23, -47, -84, -71, -56, -104])
def test_group_axioms(D):
    G = class_group(D)
    r = range(G.order)
    for i in r:
        assert G.mul(G.identity, i) == i
        assert G.mul(i, G.inverse(i)) == G.identity
        for j in r:
            assert G.mul(i, j) == G.mul(j, i)
            for k in r:
                assert G.mul(G.mul(i, j), k) == G.mul(i, G.mul(j, k))


@pytest.mark.parametrize("D", [-23, -47, -84])
def test_composition_matches_ideal_product(D):
    G = class_group(D)
    for i in range(G.order):
        for j in range(G.order):
            I = G.form_to_ideal(i) * G.form_to_ideal(j)
            J = G.form_to_ideal(G.mul(i, j))
            assert (I / J).is_principal()


def test_reduced_forms_small():
    assert reduced_forms(-4) == [(1, 0, 1)]
    assert reduced_forms(-7) == [(1, 1, 2)]


@pytest.mark.parametrize("D", [-4, -23, -47, -84, -71, -56, -39])
def test_characters_exact(D):
    G = class_group(D)
    chars = characters(G)
    assert len(chars) == G.order
    assert len({c.values for c in chars}) == G.order
    for chi in chars:
        for i in range(G.order):
            for j in range(G.order):
                assert chi.values[G.mul(i, j)] == (chi.values[i] + chi.values[j]) % 1
        for psi in chars:
            assert orthogonality_exact(chi, psi) == (G.order if chi == psi else 0)
    # characters separate the group elements
    for i in range(1, G.order):
        assert any(chi.values[i] != 0 for chi in chars)


def test_characters_d84_real():
    chars = characters(class_group(-84))
    assert all(c.is_real() for c in chars)
    assert sum(c.is_trivial() for c in chars) == 1


def test_characters_cyclic_three():
    G = class_group(-23)
    chars = characters(G)
    vals = sorted(c.values[1] for c in chars)
    assert vals == [Fraction(0), Fraction(1, 3), Fraction(2, 3)]


def test_h1_single_trivial_character():
    chars = characters(class_group(-7))
    assert len(chars) == 1 and chars[0].is_trivial()


def test_units():
    assert len(QuadField(-4).units()) == 4
    U = QuadField(-3).units()
    assert len(set(U)) == 6 and all(u.norm() == 1 for u in U)
    assert len(QuadField(-7).units()) == 2


def test_field_mismatch():
    with pytest.raises(ValueError):
        QElem(QuadField(-4), 1) + QElem(QuadField(-3), 1)
