"""Composition algebras R, C, H, O and split variants by iterated doubling.

Each doubling step takes pairs (x, y) with the product
    (x, y)(z, t) = (xz + s*t*ybar, xbar*t + zy),   s = -1 compact, +1 split,
and conjugation (x, y)bar = (xbar, -y). The basis ordering that results is
e0..e7 with e3 = e1 e2, e4 = e (the doubling unit), e5 = e*e1, e6 = e*e2,
e7 = e*e3, which is the ordering every explicit matrix downstream relies on.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .scalars import Matrix, SymmetricForm, ZERO, frac, vec


class AlgebraElement:
    """Element of a fixed composition algebra; coeffs indexed by basis."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        self.algebra = algebra
        self.coeffs = vec(coeffs)
        if len(self.coeffs) != algebra.dim:
            raise ValueError("coefficient length mismatch")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra,
                              [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra,
                              [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return AlgebraElement(self.algebra, [-a for a in self.coeffs])

    def __rmul__(self, c):
        return AlgebraElement(self.algebra, [frac(c) * a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return self.algebra.multiply(self, other)
        return AlgebraElement(self.algebra, [a * frac(other) for a in self.coeffs])

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.algebra is other.algebra and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.algebra), self.coeffs))

    def conjugate(self):
        return AlgebraElement(self.algebra,
                              [s * a for s, a in zip(self.algebra.conj_vector, self.coeffs)])

    def is_zero(self):
        return all(a == 0 for a in self.coeffs)

    def real_part(self):
        return self.coeffs[0]

    def norm(self):
        return self.algebra.norm(self)

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise ValueError("elements of different algebras")

    def __repr__(self):
        terms = []
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            base = "1" if i == 0 else f"e{i}"
            terms.append(f"{a}*{base}" if base == "1" or a != 1 else base)
        return " + ".join(terms) if terms else "0"


class CompositionAlgebra:
    """Unital algebra with conjugation and a multiplicative norm form."""

    def __init__(self, name, signs, mul_table, conj_vector):
        self.name = name
        self.signs = tuple(signs)  # one per doubling step, -1 compact / +1 split
        self.mul_table = tuple(tuple(vec(v) for v in row) for row in mul_table)
        self.conj_vector = vec(conj_vector)
        self.dim = len(self.conj_vector)
        self._norm_form = None
        self._check_unit()

    def _check_unit(self):
        for i in range(self.dim):
            unit_row = self.mul_table[0][i]
            unit_col = self.mul_table[i][0]
            want = tuple(Q(1) if j == i else ZERO for j in range(self.dim))
            if unit_row != want or unit_col != want:
                raise ValueError("basis element 0 is not a unit")

    # -- element constructors ------------------------------------------------

    def element(self, coeffs):
        return AlgebraElement(self, coeffs)

    def basis_element(self, i):
        return AlgebraElement(self, [1 if j == i else 0 for j in range(self.dim)])

    def unit(self):
        return self.basis_element(0)

    def basis(self):
        return [self.basis_element(i) for i in range(self.dim)]

    def zero(self):
        return AlgebraElement(self, [0] * self.dim)

    # -- structure -----------------------------------------------------------

    def multiply(self, x, y):
        out = [ZERO] * self.dim
        for i, a in enumerate(x.coeffs):
            if a == 0:
                continue
            row = self.mul_table[i]
            for j, b in enumerate(y.coeffs):
                if b == 0:
                    continue
                ab = a * b
                for k, c in enumerate(row[j]):
                    if c != 0:
                        out[k] += ab * c
        return AlgebraElement(self, out)

    def conjugate(self, x):
        return x.conjugate()

    def norm(self, x):
        # Q(x) = unit coefficient of x * xbar
        return (x * x.conjugate()).coeffs[0]

    def bilinear(self, x, y):
        return ((x * y.conjugate()).coeffs[0] + (y * x.conjugate()).coeffs[0]) / 2

    def norm_form(self) -> SymmetricForm:
        if self._norm_form is None:
            b = self.basis()
            self._norm_form = SymmetricForm(
                [[self.bilinear(b[i], b[j]) for j in range(self.dim)]
                 for i in range(self.dim)])
        return self._norm_form

    def imaginary_part_basis(self):
        """Basis of Im A = the -1 eigenspace of conjugation (here e1..e_{dim-1})."""
        return [vec([1 if j == i else 0 for j in range(self.dim)])
                for i in range(1, self.dim)]

    def left_mult_matrix(self, a) -> Matrix:
        cols = [(a * e).coeffs for e in self.basis()]
        return Matrix.from_columns(cols)

    def right_mult_matrix(self, a) -> Matrix:
        cols = [(e * a).coeffs for e in self.basis()]
        return Matrix.from_columns(cols)

    def conj_matrix(self) -> Matrix:
        return Matrix([[self.conj_vector[i] if i == j else ZERO
                        for j in range(self.dim)] for i in range(self.dim)])

    def __repr__(self):
        return f"CompositionAlgebra({self.name}, dim={self.dim})"


def cayley_dickson_double(base: CompositionAlgebra, split_step: bool,
                          name=None) -> CompositionAlgebra:
    """Double a composition algebra; split_step picks the +1 sign variant."""
    if base.dim > 4:
        raise ValueError("doubling past dimension 8 loses alternativity")
    d = base.dim
    s = Q(1) if split_step else Q(-1)
    dim = 2 * d

    def pad(first, second):
        return tuple(first) + tuple(second)

    zero = (ZERO,) * d
    table = [[None] * dim for _ in range(dim)]
    basis = base.basis()
    conj = [e.conjugate() for e in basis]
    for i in range(d):
        for j in range(d):
            table[i][j] = pad((basis[i] * basis[j]).coeffs, zero)
            # (b_i, 0)(0, b_j) = (0, conj(b_i) b_j)
            table[i][d + j] = pad(zero, (conj[i] * basis[j]).coeffs)
            # (0, b_i)(b_j, 0) = (0, b_j b_i)
            table[d + i][j] = pad(zero, (basis[j] * basis[i]).coeffs)
            # (0, b_i)(0, b_j) = (s * b_j conj(b_i), 0)
            table[d + i][d + j] = pad((s * (basis[j] * conj[i])).coeffs, zero)
    conj_vector = pad(base.conj_vector, (Q(-1),) * d)
    if name is None:
        name = base.name + ("s" if split_step else "'")
    out = CompositionAlgebra(name, base.signs + (int(s),), table, conj_vector)
    _check_conjugation_antiautomorphism(out)
    return out


def _check_conjugation_antiautomorphism(alg):
    b = alg.basis()
    for x in b:
        for y in b:
            if (x * y).conjugate() != y.conjugate() * x.conjugate():
                raise AssertionError("conjugation is not an anti-automorphism")
        xs = x + x.conjugate()
        if any(c != 0 for c in xs.coeffs[1:]):
            raise AssertionError("x + xbar not scalar")
        xn = x * x.conjugate()
        if any(c != 0 for c in xn.coeffs[1:]):
            raise AssertionError("x xbar not scalar")


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def conjugate(x: AlgebraElement) -> AlgebraElement:
    return x.conjugate()


def norm_form(a: CompositionAlgebra) -> SymmetricForm:
    return a.norm_form()


def imaginary_part_basis(a: CompositionAlgebra):
    return a.imaginary_part_basis()


def associator(x, y, z):
    return (x * y) * z - x * (y * z)


def commutator(x, y):
    return x * y - y * x


def _rescale_basis(alg, signs, name):
    """Replace basis e_i by signs[i]*e_i; conjugation diagonal is unchanged."""
    d = alg.dim
    table = [[tuple(signs[i] * signs[j] * signs[k] * c
                    for k, c in enumerate(alg.mul_table[i][j]))
              for j in range(d)] for i in range(d)]
    return CompositionAlgebra(name, alg.signs, table, alg.conj_vector)


# --- the eight named algebras ----------------------------------------------
# The raw doubling pairs (0, x) are left multiples e*x of the doubling unit,
# which matches the octonion convention e5 = e*e1 directly; the quaternion
# convention e3 = e1*e2 = -e*e1 needs the sign of basis index 3 flipped.

R = CompositionAlgebra("R", (), [[vec([1])]], vec([1]))
C = cayley_dickson_double(R, False, "C")
H = _rescale_basis(cayley_dickson_double(C, False), [1, 1, 1, -1], "H")
O = cayley_dickson_double(H, False, "O")
# fully split low-dimensional algebras take the split step first,
# the split octonions twist only the last step
Cs = cayley_dickson_double(R, True, "Cs")
Hs = _rescale_basis(cayley_dickson_double(Cs, False), [1, 1, 1, -1], "Hs")
Os = cayley_dickson_double(H, True, "Os")

ALGEBRAS = {a.name: a for a in (R, C, H, O, Cs, Hs, Os)}

SPLIT_PARTNER = {"R": "R", "C": "Cs", "H": "Hs", "O": "Os"}
