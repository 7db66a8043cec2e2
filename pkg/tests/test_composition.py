"""Composition algebras: table identities, split forms, norm composition."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trialis.composition import (
    ALGEBRAS,
    C,
    Cs,
    H,
    Hs,
    O,
    Os,
    R,
    associator,
    cayley_dickson_double,
    commutator,
)
from trialis.scalars import Q, inertia

EIGHT = [R, C, H, O, Cs, Hs, Os]


def test_complex_unit_square():
    e1 = C.basis_element(1)
    assert (e1 * e1) == -C.unit()


def test_quaternion_basis_convention():
    e1, e2, e3 = (H.basis_element(i) for i in (1, 2, 3))
    assert e1 * e2 == e3
    assert e2 * e1 == -e3


def test_octonion_doubling_products():
    e = [O.basis_element(i) for i in range(8)]
    assert e[4] * e[1] == e[5]
    assert e[1] * e[4] == -e[5]
    assert e[4] * e[5] == -e[1]
    assert e[2] * e[4] == -e[6]
    assert e[2] * e[5] == e[7]
    assert e[6] * e[7] == -e[1]
    assert e[5] * e[6] == -e[3]
    assert e[4] * e[6] == -e[2]
    assert e[4] * e[7] == -e[3]
    assert e[1] * e[6] == -e[7]
    assert e[1] * e[7] == e[6]
    assert e[1] * e[5] == e[4]
    assert e[5] * e[1] == -e[4]


def test_octonions_not_associative():
    e1, e2, e4 = (O.basis_element(i) for i in (1, 2, 4))
    assert e1 * (e2 * e4) != (e1 * e2) * e4
    assert not associator(e1, e2, e4).is_zero()


def test_quaternions_associative():
    basis = H.basis()
    for x, y, z in itertools.product(basis, repeat=3):
        assert associator(x, y, z).is_zero()


def test_split_complex_zero_divisor():
    one, e1 = Cs.unit(), Cs.basis_element(1)
    assert ((one + e1) * (one - e1)).is_zero()


def test_split_complex_idempotent_splitting():
    one, e1 = Cs.unit(), Cs.basis_element(1)
    p = Q(1, 2) * (one + e1)
    q = Q(1, 2) * (one - e1)
    assert p * p == p and q * q == q
    assert (p * q).is_zero() and (q * p).is_zero()
    assert p + q == one


def test_split_quaternion_idempotent():
    one, e1 = Hs.unit(), Hs.basis_element(1)
    p = Q(1, 2) * (one + e1)
    assert p * p == p
    assert p != Hs.zero() and p != one


def test_norm_inertias():
    assert inertia(R.norm_form()) == (1, 0, 0)
    assert inertia(C.norm_form()) == (2, 0, 0)
    assert inertia(H.norm_form()) == (4, 0, 0)
    assert inertia(O.norm_form()) == (8, 0, 0)
    assert inertia(Cs.norm_form()) == (1, 1, 0)
    assert inertia(Hs.norm_form()) == (2, 2, 0)
    assert inertia(Os.norm_form()) == (4, 4, 0)


def test_conjugation_basics():
    for a in EIGHT:
        assert a.unit().conjugate() == a.unit()
        if a.dim > 1:
            e1 = a.basis_element(1)
            assert e1.conjugate() == -e1


def test_imaginary_part_basis():
    for a in EIGHT:
        im = a.imaginary_part_basis()
        assert len(im) == a.dim - 1
        for v in im:
            x = a.element(v)
            assert x.conjugate() == -x


def test_unit_acts_as_identity():
    for a in EIGHT:
        one = a.unit()
        for x in a.basis():
            assert one * x == x and x * one == x


def test_left_alternative_law_octonions():
    for a in (O, Os):
        basis = a.basis()
        for x in basis:
            for y in basis:
                xb = x.conjugate()
                assert xb * (x * y) == (xb * x) * y


def test_associator_alternating_all_algebras():
    for a in EIGHT:
        basis = a.basis()
        for x, y, z in itertools.product(basis, repeat=3):
            asc = associator(x, y, z)
            assert asc == associator(z, x, y)           # cyclic
            assert (asc + associator(y, x, z)).is_zero()  # skew in first pair
        for x, y in itertools.product(basis, repeat=2):
            assert associator(x, x, y).is_zero()
            assert associator(x, y, y).is_zero()
            assert associator(x, y, x).is_zero()


def test_norm_composition_polarized_exhaustive():
    # B(xy, x'y') + B(x'y, xy') = 2 B(x,x') B(y,y') over all basis 4-tuples
    # is the full polarization of Q(xy) = Q(x) Q(y); checking it on a basis
    # proves multiplicativity for every pair of elements.
    for a in EIGHT:
        basis = a.basis()
        bil = a.bilinear
        for x, xp in itertools.product(basis, repeat=2):
            bxx = bil(x, xp)
            for y, yp in itertools.product(basis, repeat=2):
                lhs = bil(x * y, xp * yp) + bil(xp * y, x * yp)
                assert lhs == 2 * bxx * bil(y, yp)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([a.name for a in EIGHT]), st.data())
def test_norm_composition_sampled(name, data):
    a = ALGEBRAS[name]
    def short_element():
        idx = data.draw(st.lists(st.integers(0, a.dim - 1), min_size=1, max_size=3))
        coeff = data.draw(st.lists(st.integers(-2, 2), min_size=len(idx),
                                   max_size=len(idx)))
        v = [0] * a.dim
        for i, c in zip(idx, coeff):
            v[i] += c
        return a.element(v)
    x, y = short_element(), short_element()
    assert (x * y).norm() == x.norm() * y.norm()


def test_commutator_antisymmetry():
    for x, y in itertools.product(O.basis(), repeat=2):
        assert (commutator(x, y) + commutator(y, x)).is_zero()


def test_doubling_past_octonions_rejected():
    with pytest.raises(ValueError):
        cayley_dickson_double(O, False)
    with pytest.raises(ValueError):
        cayley_dickson_double(Os, True)


def test_cli_algebra_names():
    assert set(ALGEBRAS) == {"R", "C", "H", "O", "Cs", "Hs", "Os"}
    assert [ALGEBRAS[n].dim for n in ("R", "C", "H", "O")] == [1, 2, 4, 8]
    assert [ALGEBRAS[n].dim for n in ("Cs", "Hs", "Os")] == [2, 4, 8]
