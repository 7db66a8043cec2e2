"""Cubic Jordan matrix algebras, the Zorn double, and structurable checks."""

import itertools
import random

import pytest

from trialis.composition import ALGEBRAS
from trialis.jordan import (
    cross_product,
    derivation_dimension_certificate,
    det_polarization,
    determinant,
    jordan_algebra,
    structurable_identity_check,
    structurable_v,
    tensor_product,
    trace_form,
    v_operator_apply,
    zorn_algebra,
)
from trialis.scalars import Q

R = ALGEBRAS["R"]
C = ALGEBRAS["C"]
H = ALGEBRAS["H"]
O = ALGEBRAS["O"]


def rand_element(jalg, rng, bound=3):
    return jalg.from_coords([rng.randint(-bound, bound) for _ in range(jalg.dim)])


def test_dimensions_and_coordinates():
    for coord, d in [(R, 6), (C, 9), (H, 15), (O, 27)]:
        J = jordan_algebra(coord)
        assert J.dim == d
        assert len(J.basis()) == d
    J = jordan_algebra(O)
    rng = random.Random(0)
    x = rand_element(J, rng)
    assert J.from_coords(x.coords()) == x
    assert J.from_matrix(x.matrix()) == x


def test_unit_and_diagonal_idempotents():
    J = jordan_algebra(O)
    E = J.unit()
    assert (E * E) == E
    assert E.trace() == 3
    assert E.determinant() == 1
    P = J.diag(1, 0, 0)
    assert (P * P) == P
    assert P.trace() == 1
    assert P.determinant() == 0
    assert J.diag(2, 3, 5) * J.diag(7, 11, 13) == J.diag(14, 33, 65)


def test_product_is_commutative_but_not_associative():
    J = jordan_algebra(O)
    bas = J.basis()
    rng = random.Random(1)
    for _ in range(10):
        x, y = rand_element(J, rng), rand_element(J, rng)
        assert (x * y) == (y * x)
    # associativity already fails on basis elements
    i, j, k = 0, 0, 11
    lhs = (bas[i] * bas[j]) * bas[k]
    rhs = bas[i] * (bas[j] * bas[k])
    assert not (lhs - rhs).is_zero()


def test_determinant_matches_direct_expansion_over_reals():
    J = jordan_algebra(R)
    rng = random.Random(2)
    for _ in range(500):
        x = rand_element(J, rng, bound=5)
        m = [[e.coeffs[0] for e in row] for row in x.matrix()]
        direct = (m[0][0] * m[1][1] * m[2][2] - m[0][0] * m[1][2] * m[2][1]
                  - m[0][1] * m[1][0] * m[2][2] + m[0][1] * m[1][2] * m[2][0]
                  + m[0][2] * m[1][0] * m[2][1] - m[0][2] * m[1][1] * m[2][0])
        assert x.determinant() == direct


def cmul(p, q):
    return (p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0])


def cconj(p):
    return (p[0], -p[1])


def test_determinant_matches_hermitian_expansion_over_complexes():
    # independent cofactor expansion with entries kept as (re, im) pairs,
    # pinning where the conjugations sit in the hermitian layout
    J = jordan_algebra(C)
    rng = random.Random(3)
    for _ in range(200):
        x = rand_element(J, rng, bound=4)
        m = [[tuple(e.coeffs) for e in row] for row in x.matrix()]
        minor0 = tuple(a - b for a, b in zip(cmul(m[1][1], m[2][2]),
                                             cmul(m[1][2], m[2][1])))
        minor1 = tuple(a - b for a, b in zip(cmul(m[1][0], m[2][2]),
                                             cmul(m[1][2], m[2][0])))
        minor2 = tuple(a - b for a, b in zip(cmul(m[1][0], m[2][1]),
                                             cmul(m[1][1], m[2][0])))
        det = tuple(a - b + c for a, b, c in zip(cmul(m[0][0], minor0),
                                                 cmul(m[0][1], minor1),
                                                 cmul(m[0][2], minor2)))
        assert det[1] == 0
        assert x.determinant() == det[0]


def test_determinant_on_diagonal_and_single_slot_elements():
    J = jordan_algebra(O)
    rng = random.Random(4)
    for _ in range(20):
        r1, r2, r3 = (rng.randint(-5, 5) for _ in range(3))
        assert J.diag(r1, r2, r3).determinant() == r1 * r2 * r3
        x1 = O.element([rng.randint(-3, 3) for _ in range(8)])
        z = O.zero()
        el = J.element((r1, r2, r3), (x1, z, z))
        assert el.determinant() == r1 * r2 * r3 - r1 * x1.norm()
    el = J.element((2, 3, 5), (O.element([0, 1, 2, 0, 0, 0, 0, 0]),
                               O.zero(), O.zero()))
    assert el.determinant() == 20


def test_determinant_and_trace_survive_cyclic_relabelling():
    for coord in (O, C):
        J = jordan_algebra(coord)
        rng = random.Random(5)
        for _ in range(25):
            x = rand_element(J, rng)
            y = x.cyclic_relabel()
            assert y.determinant() == x.determinant()
            assert y.trace() == x.trace()
        x = rand_element(J, rng)
        assert x.cyclic_relabel().cyclic_relabel().cyclic_relabel() == x


def test_trilinear_term_ignores_bracketing():
    # Re((x1 conj x2) x3) = Re(x1 (conj x2 x3)) even over octonions
    rng = random.Random(6)
    for _ in range(20):
        x1, x2, x3 = (O.element([rng.randint(-3, 3) for _ in range(8)])
                      for _ in range(3))
        a = ((x1 * x2.conjugate()) * x3).real_part()
        b = (x1 * (x2.conjugate() * x3)).real_part()
        assert a == b


def test_trace_form_gram_and_associativity():
    J = jordan_algebra(O)
    diag = J.gram_diagonal()
    assert diag[:3] == [Q(1)] * 3
    assert diag[3:] == [Q(2)] * 24
    rng = random.Random(7)
    for _ in range(15):
        a, b, c = (rand_element(J, rng) for _ in range(3))
        assert trace_form(a * b, c) == trace_form(a, b * c)


def test_jordan_identity_on_random_octonion_pairs():
    J = jordan_algebra(O)
    rng = random.Random(8)
    for _ in range(60):
        x, y = rand_element(J, rng), rand_element(J, rng)
        xx = x * x
        assert ((x * y) * xx - x * (y * xx)).is_zero()


def test_jordan_identity_exhaustive_on_quaternion_basis():
    J = jordan_algebra(H)
    bas = J.basis()
    for x, y in itertools.product(bas, repeat=2):
        xx = x * x
        assert ((x * y) * xx - x * (y * xx)).is_zero()


def test_from_matrix_rejects_bad_input():
    J = jordan_algebra(O)
    x = J.basis_element(5)
    m = x.matrix()
    m[0][1] = m[0][1] + O.unit()  # breaks hermitian symmetry
    with pytest.raises(ValueError):
        J.from_matrix(m)
    m2 = J.unit().matrix()
    m2[1][1] = O.basis_element(2)
    with pytest.raises(ValueError):
        J.from_matrix(m2)


def test_cross_product_defining_identity():
    J = jordan_algebra(O)
    bas = J.basis()
    rng = random.Random(9)
    for _ in range(3):
        x, y = rand_element(J, rng, bound=2), rand_element(J, rng, bound=2)
        xy = cross_product(x, y)
        for z in bas:
            assert trace_form(xy, z) == det_polarization(x, y, z)
    x = rand_element(J, rng, bound=2)
    assert det_polarization(x, x, x) == x.determinant()


def test_cross_product_frozen_values():
    J = jordan_algebra(O)
    P1 = J.diag(1, 0, 0)
    P2 = J.diag(0, 1, 0)
    E = J.unit()
    assert cross_product(P1, P1).is_zero()
    assert cross_product(P1, P2) == J.diag(0, 0, Q(1, 6))
    assert cross_product(J.diag(1, 1, 0), J.diag(1, 1, 0)) == J.diag(0, 0, Q(1, 3))
    assert cross_product(E, E) == Q(1, 3) * E
    assert cross_product(P1, E) == J.diag(0, Q(1, 6), Q(1, 6))


def test_zorn_dimensions():
    for coord, d in [(R, 14), (C, 20), (H, 32), (O, 56)]:
        Z = zorn_algebra(coord)
        assert Z.dim == d
        assert len(Z.basis()) == d


def test_zorn_unit_laws():
    Z = zorn_algebra(O)
    u = Z.unit()
    for m in Z.basis():
        assert ((u * m) - m).is_zero()
        assert ((m * u) - m).is_zero()


def test_zorn_block_products():
    Z = zorn_algebra(O)
    J = Z.jordan
    rng = random.Random(10)
    jz = J.zero()
    for _ in range(5):
        X, Y = rand_element(J, rng), rand_element(J, rng)
        upper = Z.element(0, X, jz, 0)
        lower = Z.element(0, jz, Y, 0)
        p = upper * lower
        assert p.a == trace_form(X, Y)
        assert p.b == 0 and p.x.is_zero() and p.y.is_zero()
        q = lower * upper
        assert q.b == trace_form(X, Y)
        assert q.a == 0 and q.x.is_zero() and q.y.is_zero()
        X2 = rand_element(J, rng)
        s = Z.element(0, X, jz, 0) * Z.element(0, X2, jz, 0)
        assert s.a == 0 and s.b == 0 and s.x.is_zero()
        assert s.y == cross_product(X, X2)


def test_tensor_product_structure():
    T = tensor_product(O, O)
    assert T.dim == 64 and T.name == "O(x)O"
    TH = tensor_product(H, H)
    # componentwise products and involution
    for (i, j, k, l) in [(1, 2, 2, 1), (0, 3, 1, 0), (2, 2, 3, 3)]:
        left = TH.basis_element(i * 4 + j) * TH.basis_element(k * 4 + l)
        a = H.basis_element(i) * H.basis_element(k)
        b = H.basis_element(j) * H.basis_element(l)
        out = [Q(0)] * 16
        for m, cm in enumerate(a.coeffs):
            for n, cn in enumerate(b.coeffs):
                out[m * 4 + n] = cm * cn
        assert list(left.coeffs) == out
    for i in range(4):
        for j in range(4):
            expect = H.conj_vector[i] * H.conj_vector[j]
            assert TH.conj_vector[i * 4 + j] == expect


def test_structurable_v_matrix_matches_elementwise():
    T = tensor_product(H, H)
    rng = random.Random(11)
    for _ in range(3):
        x = T.element([rng.randint(-2, 2) for _ in range(16)])
        y = T.element([rng.randint(-2, 2) for _ in range(16)])
        m = structurable_v(T, x, y)
        for k in range(16):
            z = T.basis_element(k)
            assert list(m.matvec([Q(1) if i == k else Q(0) for i in range(16)])) \
                == list(v_operator_apply(x, y, z).coeffs)


def test_structurable_identity_exhaustive_small_tensors():
    for a, b in [(R, R), (C, C), (H, R), (O, R)]:
        alg = tensor_product(a, b)
        assert alg.dim ** 3 <= 512
        assert structurable_identity_check(alg) is None


def test_structurable_identity_sampled_on_the_big_tensor():
    T = tensor_product(O, O)
    assert T.dim == 64
    assert structurable_identity_check(T, samples=1000, seed=1) is None


def test_structurable_identity_check_detects_violations():
    T = tensor_product(H, H)

    class Broken:
        pass

    b = Broken()
    b.dim = T.dim
    b.mul_table = T.mul_table
    b.conj_vector = tuple(Q(1) for _ in range(T.dim))  # involution removed
    assert structurable_identity_check(b, max_exhaustive=0,
                                       samples=50, seed=3) == (7, 4, 11)


def test_derivation_dimension_certificates():
    expected = {"R": 3, "C": 8, "H": 21, "O": 52}
    for name in ("R", "C", "H"):
        cert = derivation_dimension_certificate(jordan_algebra(ALGEBRAS[name]))
        assert cert["lower"] == cert["upper"] == expected[name]


def test_derivation_dimension_certificate_f4():
    cert = derivation_dimension_certificate(jordan_algebra(O))
    assert cert == {"lower": 52, "upper": 52}
