"""Cubic Jordan algebras of hermitian 3x3 matrices over a composition
algebra, Zorn matrices, and structurable operators on tensor products.

The coordinate entries need not commute or associate, so there is no
matrix determinant to borrow. The cubic form used here,

    det A = r1 r2 r3 - r1 N(x1) - r2 N(x2) - r3 N(x3) + 2 Re((x1 conj(x2)) x3),

is pinned by three requirements: restriction to the classical 3x3
determinant when every entry is real, invariance under the cyclic
relabeling that conjugates the matrix by the 3-cycle permutation, and
independence of the bracketing of the trilinear term (the real part of
a product of three octonions does not care how it is associated).
"""

from __future__ import annotations

from fractions import Fraction as Q

from .composition import AlgebraElement, CompositionAlgebra
from .scalars import Matrix, ZERO, frac, linear_solve, vec

_cache: dict = {}


class JordanElement:
    """Hermitian 3x3 matrix: diagonal r1..r3, off-diagonal x1..x3.

    x1 sits opposite r1 (entry (2,3) of the matrix), and cyclically.
    """

    __slots__ = ("jalg", "r", "x")

    def __init__(self, jalg, r, x):
        self.jalg = jalg
        self.r = tuple(frac(v) for v in r)
        self.x = tuple(x)
        if len(self.r) != 3 or len(self.x) != 3:
            raise ValueError("need three diagonal and three off-diagonal entries")

    def __add__(self, other):
        return JordanElement(self.jalg,
                             [a + b for a, b in zip(self.r, other.r)],
                             [a + b for a, b in zip(self.x, other.x)])

    def __sub__(self, other):
        return JordanElement(self.jalg,
                             [a - b for a, b in zip(self.r, other.r)],
                             [a - b for a, b in zip(self.x, other.x)])

    def __neg__(self):
        return JordanElement(self.jalg, [-a for a in self.r],
                             [-a for a in self.x])

    def __rmul__(self, c):
        c = frac(c)
        return JordanElement(self.jalg, [c * a for a in self.r],
                             [c * a for a in self.x])

    def __eq__(self, other):
        return (isinstance(other, JordanElement) and self.r == other.r
                and self.x == other.x)

    def __hash__(self):
        return hash((self.r, tuple(t.coeffs for t in self.x)))

    def is_zero(self):
        return all(a == 0 for a in self.r) and all(t.is_zero() for t in self.x)

    def matrix(self):
        """The hermitian matrix as a 3x3 nest of coordinate-algebra elements."""
        a = self.jalg.coord
        r1, r2, r3 = (a.unit() * v for v in self.r)
        x1, x2, x3 = self.x
        return [[r1, x3, x2],
                [x3.conjugate(), r2, x1],
                [x2.conjugate(), x1.conjugate(), r3]]

    def __mul__(self, other):
        return self.jalg.product(self, other)

    def trace(self):
        return sum(self.r)

    def determinant(self):
        r1, r2, r3 = self.r
        x1, x2, x3 = self.x
        triple = (x1 * x2.conjugate()) * x3
        return (r1 * r2 * r3 - r1 * x1.norm() - r2 * x2.norm()
                - r3 * x3.norm() + 2 * triple.real_part())

    def cyclic_relabel(self):
        """Conjugate by the 3-cycle permutation matrix.

        In slot coordinates this is (r1,r2,r3; x1,x2,x3) ->
        (r2,r3,r1; conj x2, conj x3, x1); the naive untwisted slot shift
        is not a symmetry of the hermitian layout.
        """
        r1, r2, r3 = self.r
        x1, x2, x3 = self.x
        return JordanElement(self.jalg, (r2, r3, r1),
                             (x2.conjugate(), x3.conjugate(), x1))

    def coords(self):
        out = list(self.r)
        for t in self.x:
            out.extend(t.coeffs)
        return vec(out)

    def __repr__(self):
        return f"JordanElement(r={self.r}, x={self.x})"


class JordanAlgebra:
    """J3 over a composition algebra, with the symmetrized product."""

    def __init__(self, coord: CompositionAlgebra):
        self.coord = coord
        self.dim = 3 + 3 * coord.dim
        self._gram_diag = None

    def element(self, r, x):
        xs = []
        for t in x:
            xs.append(t if isinstance(t, AlgebraElement) else self.coord.element(t))
        return JordanElement(self, r, xs)

    def zero(self):
        z = self.coord.zero()
        return JordanElement(self, (0, 0, 0), (z, z, z))

    def unit(self):
        z = self.coord.zero()
        return JordanElement(self, (1, 1, 1), (z, z, z))

    def diag(self, r1, r2, r3):
        z = self.coord.zero()
        return JordanElement(self, (r1, r2, r3), (z, z, z))

    def basis(self):
        out = [self.diag(1, 0, 0), self.diag(0, 1, 0), self.diag(0, 0, 1)]
        z = self.coord.zero()
        for slot in range(3):
            for u in range(self.coord.dim):
                xs = [z, z, z]
                xs[slot] = self.coord.basis_element(u)
                out.append(JordanElement(self, (0, 0, 0), xs))
        return out

    def basis_element(self, k):
        return self.basis()[k]

    def from_coords(self, cs):
        d = self.coord.dim
        xs = [self.coord.element(cs[3 + slot * d:3 + (slot + 1) * d])
              for slot in range(3)]
        return JordanElement(self, cs[:3], xs)

    def from_matrix(self, m):
        """Rebuild from a 3x3 nest, checking hermitian symmetry exactly."""
        for i in range(3):
            if any(c != 0 for c in m[i][i].coeffs[1:]):
                raise ValueError("diagonal entry is not a scalar")
            for j in range(i + 1, 3):
                if not (m[j][i] - m[i][j].conjugate()).is_zero():
                    raise ValueError("matrix is not hermitian")
        r = [m[0][0].coeffs[0], m[1][1].coeffs[0], m[2][2].coeffs[0]]
        return JordanElement(self, r, [m[1][2], m[0][2], m[0][1]])

    def product(self, a: JordanElement, b: JordanElement) -> JordanElement:
        ma, mb = a.matrix(), b.matrix()
        half = Q(1, 2)
        out = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = self.coord.zero()
                for k in range(3):
                    acc = acc + ma[i][k] * mb[k][j] + mb[i][k] * ma[k][j]
                row.append(half * acc)
            out.append(row)
        return self.from_matrix(out)

    def traceless_basis(self):
        mid = [self.diag(1, -1, 0), self.diag(0, 1, -1)]
        return mid + self.basis()[3:]

    def gram_diagonal(self):
        """Diagonal of the trace-form Gram matrix on the standard basis.

        The basis is trace-orthogonal, which the cross product solve relies
        on; verified here once per algebra.
        """
        if self._gram_diag is None:
            bas = self.basis()
            diag = []
            for i, e in enumerate(bas):
                for j in range(i + 1, len(bas)):
                    if trace_form(e, bas[j]) != 0:
                        raise AssertionError("trace form is not diagonal here")
                diag.append(trace_form(e, e))
            self._gram_diag = diag
        return self._gram_diag


def jordan_algebra(coord: CompositionAlgebra) -> JordanAlgebra:
    key = ("jordan", coord.name)
    if key not in _cache:
        _cache[key] = JordanAlgebra(coord)
    return _cache[key]


def jordan_product(a: JordanElement, b: JordanElement) -> JordanElement:
    return a.jalg.product(a, b)


def trace(a: JordanElement):
    return a.trace()


def trace_form(a: JordanElement, b: JordanElement):
    return (a * b).trace()


def determinant(a: JordanElement):
    return a.determinant()


def det_polarization(x, y, z):
    """Symmetric trilinear form with det_polarization(a,a,a) = det(a)."""
    return Q(1, 6) * (determinant(x + y + z) - determinant(x + y)
                      - determinant(x + z) - determinant(y + z)
                      + determinant(x) + determinant(y) + determinant(z))


def cross_product(x: JordanElement, y: JordanElement) -> JordanElement:
    """The bilinear product with trace_form(x cross y, z) = det(x,y,z)."""
    j = x.jalg
    diag = j.gram_diagonal()
    coords = [det_polarization(x, y, e) / d for e, d in zip(j.basis(), diag)]
    return j.from_coords(coords)


# ---------------------------------------------------------------------------
# Zorn matrices


class ZornElement:
    """2x2 matrix with scalar diagonal and J3 entries off the diagonal."""

    __slots__ = ("a", "x", "y", "b")

    def __init__(self, a, x, y, b):
        self.a, self.b = frac(a), frac(b)
        self.x, self.y = x, y

    def __add__(self, other):
        return ZornElement(self.a + other.a, self.x + other.x,
                           self.y + other.y, self.b + other.b)

    def __sub__(self, other):
        return ZornElement(self.a - other.a, self.x - other.x,
                           self.y - other.y, self.b - other.b)

    def __neg__(self):
        return ZornElement(-self.a, -self.x, -self.y, -self.b)

    def __rmul__(self, c):
        c = frac(c)
        return ZornElement(c * self.a, c * self.x, c * self.y, c * self.b)

    def __eq__(self, other):
        return (isinstance(other, ZornElement) and self.a == other.a
                and self.b == other.b and self.x == other.x and self.y == other.y)

    def is_zero(self):
        return (self.a == 0 and self.b == 0 and self.x.is_zero()
                and self.y.is_zero())

    def __mul__(self, other):
        return zorn_multiply(self, other)

    def coords(self):
        return vec([self.a] + list(self.x.coords())
                   + list(self.y.coords()) + [self.b])

    def __repr__(self):
        return f"ZornElement(a={self.a}, b={self.b})"


class ZornAlgebra:
    def __init__(self, coord: CompositionAlgebra):
        self.coord = coord
        self.jordan = jordan_algebra(coord)
        self.dim = 2 + 2 * self.jordan.dim

    def element(self, a, x, y, b):
        return ZornElement(a, x, y, b)

    def unit(self):
        z = self.jordan.zero()
        return ZornElement(1, z, z, 1)

    def zero(self):
        z = self.jordan.zero()
        return ZornElement(0, z, z, 0)

    def basis(self):
        jz = self.jordan.zero()
        out = [ZornElement(1, jz, jz, 0)]
        for e in self.jordan.basis():
            out.append(ZornElement(0, e, jz, 0))
        for e in self.jordan.basis():
            out.append(ZornElement(0, jz, e, 0))
        out.append(ZornElement(0, jz, jz, 1))
        return out


def zorn_algebra(coord: CompositionAlgebra) -> ZornAlgebra:
    key = ("zorn", coord.name)
    if key not in _cache:
        _cache[key] = ZornAlgebra(coord)
    return _cache[key]


def zorn_multiply(m1: ZornElement, m2: ZornElement) -> ZornElement:
    a = m1.a * m2.a + trace_form(m1.x, m2.y)
    b = m1.b * m2.b + trace_form(m2.x, m1.y)
    x = m1.a * m2.x + m2.b * m1.x + cross_product(m1.y, m2.y)
    y = m2.a * m1.y + m1.b * m2.y + cross_product(m1.x, m2.x)
    return ZornElement(a, x, y, b)


# ---------------------------------------------------------------------------
# tensor products and the structurable identity


class UnitalAlgebra:
    """Unital algebra with involution, given by a basis table.

    Duck-compatible with CompositionAlgebra as far as element arithmetic
    goes (multiply, conj_vector, basis access); carries no norm form.
    """

    def __init__(self, name, mul_table, conj_vector):
        self.name = name
        self.mul_table = tuple(tuple(vec(v) for v in row) for row in mul_table)
        self.conj_vector = vec(conj_vector)
        self.dim = len(self.conj_vector)

    def element(self, coeffs):
        return AlgebraElement(self, coeffs)

    def basis_element(self, i):
        return AlgebraElement(self, [1 if j == i else 0 for j in range(self.dim)])

    def unit(self):
        return self.basis_element(0)

    def zero(self):
        return AlgebraElement(self, [0] * self.dim)

    def basis(self):
        return [self.basis_element(i) for i in range(self.dim)]

    multiply = CompositionAlgebra.multiply

    def __repr__(self):
        return f"UnitalAlgebra({self.name}, dim={self.dim})"


def tensor_product(a: CompositionAlgebra, b: CompositionAlgebra) -> UnitalAlgebra:
    """A (x) B with the componentwise product and involution."""
    key = ("tensor", a.name, b.name)
    if key in _cache:
        return _cache[key]
    na, nb = a.dim, b.dim
    dim = na * nb
    table = [[None] * dim for _ in range(dim)]
    for i in range(na):
        for j in range(nb):
            for k in range(na):
                for l in range(nb):
                    va = a.mul_table[i][k]
                    vb = b.mul_table[j][l]
                    out = [ZERO] * dim
                    for m, cm in enumerate(va):
                        if cm == 0:
                            continue
                        for n, cn in enumerate(vb):
                            if cn != 0:
                                out[m * nb + n] = cm * cn
                    table[i * nb + j][k * nb + l] = out
    conj = [a.conj_vector[i] * b.conj_vector[j]
            for i in range(na) for j in range(nb)]
    alg = UnitalAlgebra(f"{a.name}(x){b.name}", table, conj)
    _cache[key] = alg
    return alg


def v_operator_apply(x, y, z):
    """V_{x,y}(z) = (x conj y) z + (z conj y) x - (z conj x) y."""
    yc, xc = y.conjugate(), x.conjugate()
    return (x * yc) * z + (z * yc) * x - (z * xc) * y


def structurable_v(alg, x, y) -> Matrix:
    cols = [v_operator_apply(x, y, alg.basis_element(k)).coeffs
            for k in range(alg.dim)]
    return Matrix.from_columns(cols)


def structurable_identity_check(alg, max_exhaustive=512, samples=1000, seed=1):
    """Check [V_{a,1}, V_{b,c}] = V_{V_{a,1}(b), c} - V_{b, V_{conj a,1}(c)}.

    Runs over all basis triples (a, b, c) when dim^3 <= max_exhaustive,
    otherwise over a seeded sample. Returns None if every triple passes,
    else the first violating index triple. Integer structure constants
    allow the operators to be compared in exact machine arithmetic;
    V_{x,y} = L_{x conj(y)} + R_x R_{conj y} - R_y R_{conj x}.
    """
    n = alg.dim
    if n ** 3 <= max_exhaustive:
        triples = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
    else:
        import random
        rng = random.Random(seed)
        triples = [(rng.randrange(n), rng.randrange(n), rng.randrange(n))
                   for _ in range(samples)]

    import numpy as np

    tensor = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k, c in enumerate(alg.mul_table[i][j]):
                if c != 0:
                    if c.denominator != 1:
                        return _structurable_check_exact(alg, triples)
                    tensor[i, j, k] = int(c)
    conj = np.array([int(c) for c in alg.conj_vector], dtype=np.int64)

    def mulvec(x, y):
        return np.einsum("i,j,ijk->k", x, y, tensor)

    def rmat(x):
        return np.einsum("j,ijk->ki", x, tensor)

    def vmat(x, y):
        lxy = np.einsum("i,ijk->kj", mulvec(x, conj * y), tensor)
        return lxy + rmat(x) @ rmat(conj * y) - rmat(y) @ rmat(conj * x)

    eye = np.eye(n, dtype=np.int64)
    e0 = eye[0]
    va1 = {}
    for (i, j, k) in triples:
        if i not in va1:
            va1[i] = vmat(eye[i], e0)
        v1 = va1[i]
        vbc = vmat(eye[j], eye[k])
        lhs = v1 @ vbc - vbc @ v1
        u = v1[:, j]
        w = conj[i] * v1[:, k]
        rhs = vmat(u, eye[k]) - vmat(eye[j], w)
        if not np.array_equal(lhs, rhs):
            return (i, j, k)
    return None


def _structurable_check_exact(alg, triples):
    # element-by-element fallback for non-integral tables
    one = alg.unit()
    basis = alg.basis()
    for (i, j, k) in triples:
        a, b, c = basis[i], basis[j], basis[k]
        u = v_operator_apply(a, one, b)
        w = v_operator_apply(a.conjugate(), one, c)
        for d in basis:
            lhs = (v_operator_apply(a, one, v_operator_apply(b, c, d))
                   - v_operator_apply(b, c, v_operator_apply(a, one, d)))
            rhs = v_operator_apply(u, c, d) - v_operator_apply(b, w, d)
            if not (lhs - rhs).is_zero():
                return (i, j, k)
    return None


# ---------------------------------------------------------------------------
# derivation dimension certificate


def structure_tensor_doubled(jalg: JordanAlgebra):
    """Integer tensor 2*C with e_i . e_j = sum_k C[i][j][k] e_k."""
    bas = jalg.basis()
    n = jalg.dim
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            cs = (bas[i] * bas[j]).coords()
            doubled = []
            for c in cs:
                two = 2 * c
                if two.denominator != 1:
                    raise AssertionError("structure constants not half-integral")
                doubled.append(int(two))
            row.append(doubled)
        out.append(row)
    return out


def derivation_dimension_certificate(jalg: JordanAlgebra, prime=1_000_003,
                                     seed=5):
    """Certify dim Der by an exact lower bound and a modular upper bound.

    Lower bound: commutators [L_x, L_y] of multiplication operators are
    derivations (checked exactly in integer arithmetic); the rank of their
    span mod a prime bounds the rational rank from below. Upper bound: the
    rank of a row subsample of the Leibniz linear system mod the prime
    bounds the system's rational rank from below, hence the kernel from
    above; rows are added until the two bounds meet or rows run out.
    """
    import numpy as np

    n = jalg.dim
    c2 = np.array(structure_tensor_doubled(jalg), dtype=np.int64)

    # L_i as a matrix: column m holds e_i . e_m
    lmats = np.transpose(c2, (0, 2, 1))
    inner = []
    for i in range(n):
        for j in range(i + 1, n):
            d = lmats[i] @ lmats[j] - lmats[j] @ lmats[i]
            inner.append(d)

    # exact integer Leibniz check for every commutator
    for d in inner:
        lhs = np.einsum("ijm,km->ijk", c2, d)
        rhs = (np.einsum("mi,mjk->ijk", d, c2)
               + np.einsum("mj,imk->ijk", d, c2))
        if not np.array_equal(lhs, rhs):
            raise AssertionError("multiplication commutator fails Leibniz")

    span = np.array([d.reshape(-1) for d in inner], dtype=np.int64) % prime
    lower = _rank_mod_p(span, prime)

    # Leibniz system: rows (i,j,k), unknowns D[r,c]
    idx = np.arange(n)
    sys5 = np.zeros((n, n, n, n, n), dtype=np.int64)
    sys5[:, :, idx, idx, :] += c2[:, :, None, :]
    sys5[idx, :, :, :, idx] -= np.transpose(c2, (1, 2, 0))[None, :, :, :]
    sys5[:, idx, :, :, idx] -= np.transpose(c2, (0, 2, 1))[None, :, :, :]
    system = sys5.reshape(n ** 3, n * n) % prime
    del sys5

    rng = np.random.default_rng(seed)
    order = rng.permutation(n ** 3)
    take = min(4 * n * n, n ** 3)
    while True:
        r = _rank_mod_p(system[order[:take]], prime)
        if n * n - r <= lower or take == n ** 3:
            break
        take = min(2 * take, n ** 3)
    upper = n * n - r
    return {"lower": int(lower), "upper": int(upper)}


def _rank_mod_p(m, p):
    import numpy as np

    m = m.copy() % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = None
        for k in range(r, rows):
            if m[k, c] % p:
                piv = k
                break
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        below = m[r + 1:, c].copy()
        if below.any():
            m[r + 1:] = (m[r + 1:] - np.outer(below, m[r])) % p
        r += 1
    return r
