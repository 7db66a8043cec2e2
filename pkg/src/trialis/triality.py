"""Derivation and triality algebras of composition algebras.

Both are computed as kernels of explicit linear systems over the basis
multiplication table, with no structure theory assumed; the structural
descriptions (dimensions, projections, generator families) are verified
downstream as tests. A triality triple (T1, T2, T3) satisfies

    conj(T1(conj(a b))) = T2(a) b + a T3(b)

for all a, b, with every component skew for the norm form. The sign
conventions of the Psi maps below are pinned by this identity: the slot-1
identification of u^v with an endomorphism uses the fully polarized form
N(u,x) = Q(u+x)-Q(u)-Q(x), under which Psi1(u^v)1 = (x -> N(u,x)v - N(v,x)u)
and the cyclic images live in slots 2 and 3.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .composition import CompositionAlgebra
from .scalars import (
    CoordinateSolver,
    Matrix,
    ZERO,
    express_in_basis,
    frac,
    linear_solve,
    rank as matrix_rank,
    solve_kernel,
)

_cache: dict = {}


class TrialityTriple:
    """Triple of endomorphisms of a composition algebra."""

    __slots__ = ("algebra", "t1", "t2", "t3")

    def __init__(self, algebra, t1, t2, t3):
        self.algebra = algebra
        self.t1, self.t2, self.t3 = t1, t2, t3

    def components(self):
        return (self.t1, self.t2, self.t3)

    def __add__(self, other):
        return TrialityTriple(self.algebra, self.t1 + other.t1,
                              self.t2 + other.t2, self.t3 + other.t3)

    def __sub__(self, other):
        return TrialityTriple(self.algebra, self.t1 - other.t1,
                              self.t2 - other.t2, self.t3 - other.t3)

    def __neg__(self):
        return TrialityTriple(self.algebra, -self.t1, -self.t2, -self.t3)

    def __rmul__(self, c):
        return TrialityTriple(self.algebra, self.t1.scale(c),
                              self.t2.scale(c), self.t3.scale(c))

    def __eq__(self, other):
        return (isinstance(other, TrialityTriple)
                and (self.t1, self.t2, self.t3) == (other.t1, other.t2, other.t3))

    def __hash__(self):
        return hash((self.t1, self.t2, self.t3))

    def bracket(self, other):
        return TrialityTriple(self.algebra,
                              self.t1.commutator(other.t1),
                              self.t2.commutator(other.t2),
                              self.t3.commutator(other.t3))

    def flatten(self):
        out = []
        for t in (self.t1, self.t2, self.t3):
            for row in t.data:
                out.extend(row)
        return tuple(out)

    def is_zero(self):
        return self.t1.is_zero() and self.t2.is_zero() and self.t3.is_zero()

    def satisfies_identity(self):
        """Defining identity on all basis pairs."""
        a = self.algebra
        n = a.dim
        conj = a.conj_vector
        table = a.mul_table
        t1, t2, t3 = self.t1.data, self.t2.data, self.t3.data
        for i in range(n):
            for j in range(n):
                prod = table[i][j]
                for k in range(n):
                    lhs = sum((conj[m] * conj[k] * prod[m] * t1[k][m]
                               for m in range(n) if prod[m]), ZERO)
                    rhs = sum((t2[r][i] * table[r][j][k] for r in range(n)), ZERO)
                    rhs += sum((t3[r][j] * table[i][r][k] for r in range(n)), ZERO)
                    if lhs != rhs:
                        return False
        return True

    def __repr__(self):
        return f"TrialityTriple(over {self.algebra.name})"


class LinearLieAlgebra:
    """A Lie algebra given by a basis of concrete linear objects."""

    def __init__(self, name, basis, check_closed=True):
        self.name = name
        self.basis = list(basis)
        self.dim = len(self.basis)
        self._solver = None
        if check_closed and self.dim:
            self._verify_closure()

    def _flat_basis(self):
        return [b.flatten() for b in self.basis]

    def solver(self):
        if self._solver is None:
            self._solver = CoordinateSolver(self._flat_basis())
        return self._solver

    def coords(self, x, check=False):
        return self.solver().coords(x.flatten(), check=check)

    def from_coords(self, cs):
        out = None
        for c, b in zip(cs, self.basis):
            term = c * b
            out = term if out is None else out + term
        return out

    def _verify_closure(self):
        flat = self._flat_basis()
        targets = []
        for i, x in enumerate(self.basis):
            for y in self.basis[i + 1:]:
                targets.append(x.bracket(y).flatten())
        if targets:
            express_in_basis(flat, targets)  # raises if outside the span

    def span_contains(self, x):
        try:
            express_in_basis(self._flat_basis(), [x.flatten()])
            return True
        except ValueError:
            return False

    def __repr__(self):
        return f"LinearLieAlgebra({self.name}, dim={self.dim})"


def _leibniz_rows(a: CompositionAlgebra):
    """Rows of the system D(ei ej) = D(ei) ej + ei D(ej), unknowns D row-major."""
    n = a.dim
    table = a.mul_table
    rows = []
    for i in range(n):
        for j in range(n):
            prod = table[i][j]
            for k in range(n):
                row = [ZERO] * (n * n)
                for m in range(n):
                    if prod[m]:
                        row[k * n + m] += prod[m]
                for r in range(n):
                    if table[r][j][k]:
                        row[r * n + i] -= table[r][j][k]
                    if table[i][r][k]:
                        row[r * n + j] -= table[i][r][k]
                rows.append(row)
    return rows


def derivations(a: CompositionAlgebra) -> LinearLieAlgebra:
    """All D with D(xy) = D(x)y + x D(y), as a Lie algebra of matrices."""
    key = ("der", a.name)
    if key not in _cache:
        n = a.dim
        kernel = solve_kernel(Matrix(_leibniz_rows(a)))
        basis = [Matrix([v[r * n:(r + 1) * n] for r in range(n)]) for v in kernel]
        _cache[key] = LinearLieAlgebra(f"Der({a.name})", basis)
    return _cache[key]


def _triality_rows(a: CompositionAlgebra):
    """Defining identity plus skewness of each component; unknowns (T1,T2,T3)."""
    n = a.dim
    table = a.mul_table
    conj = a.conj_vector
    g = a.norm_form().data
    nn = n * n
    rows = []
    for i in range(n):
        for j in range(n):
            prod = table[i][j]
            for k in range(n):
                row = [ZERO] * (3 * nn)
                for m in range(n):
                    if prod[m]:
                        row[k * n + m] += conj[m] * conj[k] * prod[m]
                for r in range(n):
                    c = table[r][j][k]
                    if c:
                        row[nn + r * n + i] -= c
                    c = table[i][r][k]
                    if c:
                        row[2 * nn + r * n + j] -= c
                rows.append(row)
    # skewness for the norm form: T^t G + G T = 0, per component
    for comp in range(3):
        off = comp * nn
        for i in range(n):
            for j in range(i, n):
                row = [ZERO] * (3 * nn)
                for r in range(n):
                    if g[r][j]:
                        row[off + r * n + i] += g[r][j]
                    if g[i][r]:
                        row[off + r * n + j] += g[i][r]
                rows.append(row)
    return rows


def triality_algebra(a: CompositionAlgebra) -> LinearLieAlgebra:
    """Solution space of the triality identity inside so(Q)^3."""
    key = ("tri", a.name)
    if key not in _cache:
        n = a.dim
        nn = n * n
        kernel = solve_kernel(Matrix(_triality_rows(a)))
        basis = []
        for v in kernel:
            mats = [Matrix([v[off + r * n:off + (r + 1) * n] for r in range(n)])
                    for off in (0, nn, 2 * nn)]
            basis.append(TrialityTriple(a, *mats))
        _cache[key] = LinearLieAlgebra(f"t({a.name})", basis)
    return _cache[key]


class Projection:
    """Projection of a triality algebra onto one so(Q) component."""

    def __init__(self, algebra, i, rank, kernel_dim):
        self.algebra = algebra
        self.i = i
        self.rank = rank
        self.kernel_dim = kernel_dim

    def apply(self, t: TrialityTriple) -> Matrix:
        return t.components()[self.i - 1]


def triality_project(a: CompositionAlgebra, i: int) -> Projection:
    if i not in (1, 2, 3):
        raise ValueError("component index must be 1, 2 or 3")
    t = triality_algebra(a)
    g = a.norm_form()
    images = []
    for b in t.basis:
        comp = b.components()[i - 1]
        # each component must be skew for the norm form
        if not (comp.transpose() * g + g * comp).is_zero():
            raise AssertionError("projection not skew for the norm form")
        images.append(tuple(x for row in comp.data for x in row))
    r = matrix_rank(Matrix(images)) if images else 0
    return Projection(a, i, r, t.dim - r)


# ---------------------------------------------------------------------------
# the S3 action and the Psi maps


def _tau_conjugate(a: CompositionAlgebra, m: Matrix) -> Matrix:
    c = a.conj_matrix()
    return c * m * c


def s3_outer_action(a: CompositionAlgebra):
    """The two involutions generating the S3 symmetry of the triality algebra."""

    def s(t: TrialityTriple) -> TrialityTriple:
        return TrialityTriple(a, _tau_conjugate(a, t.t2),
                              _tau_conjugate(a, t.t1), _tau_conjugate(a, t.t3))

    def tmap(t: TrialityTriple) -> TrialityTriple:
        return TrialityTriple(a, _tau_conjugate(a, t.t1),
                              _tau_conjugate(a, t.t3), _tau_conjugate(a, t.t2))

    return s, tmap


def rho(t: TrialityTriple) -> TrialityTriple:
    """Order-3 rotation of the triple, s o t in terms of the two involutions.

    With this orientation the slot-k map rho^(k-1) o Psi1 pairs with the k-th
    component under the trace form, with one constant for all three slots.
    """
    return TrialityTriple(t.algebra, t.t3, t.t1, t.t2)


def polarized_norm(a: CompositionAlgebra):
    """N(u, x) = Q(u+x) - Q(u) - Q(x) as a matrix (twice the inner product)."""
    return a.norm_form().scale(2)


def psi_basis_triple(a: CompositionAlgebra, u: int, v: int) -> TrialityTriple:
    """Psi1(e_u ^ e_v): slot-1 generator of the triality algebra."""
    n = a.dim
    npol = polarized_norm(a).data
    eu, ev = a.basis_element(u), a.basis_element(v)
    cu, cv = eu.conjugate(), ev.conjugate()
    half = Q(1, 2)
    cols1, cols2, cols3 = [], [], []
    for xi in range(n):
        x = a.basis_element(xi)
        c1 = [npol[u][xi] * b - npol[v][xi] * c for b, c in zip(ev.coeffs, eu.coeffs)]
        cols1.append(c1)
        c2 = half * (cv * (eu * x) - cu * (ev * x))
        cols2.append(c2.coeffs)
        c3 = half * ((x * eu) * cv - (x * ev) * cu)
        cols3.append(c3.coeffs)
    return TrialityTriple(a, Matrix.from_columns(cols1),
                          Matrix.from_columns(cols2), Matrix.from_columns(cols3))


class PsiMap:
    """Linear map from wedge squares of the algebra into its triality algebra."""

    def __init__(self, algebra, slot):
        self.algebra = algebra
        self.slot = slot

    def on_basis(self, u, v) -> TrialityTriple:
        t = psi_basis_triple(self.algebra, u, v)
        for _ in range(self.slot - 1):
            t = rho(t)
        return t

    def on_wedge(self, wedge) -> TrialityTriple:
        """wedge: iterable of ((u, v), coeff)."""
        out = None
        for (u, v), c in wedge:
            term = c * self.on_basis(u, v)
            out = term if out is None else out + term
        if out is None:
            raise ValueError("empty wedge")
        return out


def psi_map(a: CompositionAlgebra, i: int) -> PsiMap:
    if i not in (1, 2, 3):
        raise ValueError("slot must be 1, 2 or 3")
    return PsiMap(a, i)


def wedge_pairs(n):
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def psi_total_matrix(a: CompositionAlgebra):
    """Matrix of the summed Psi on wedge^2(A)^{+3}, in t(A) coordinates.

    Columns are indexed by (slot 1..3) x (u < v lexicographic); rows by the
    basis of the computed triality algebra.
    """
    key = ("psi_total", a.name)
    if key not in _cache:
        t = triality_algebra(a)
        cols = []
        for slot in (1, 2, 3):
            pm = psi_map(a, slot)
            for (u, v) in wedge_pairs(a.dim):
                cols.append(t.coords(pm.on_basis(u, v)))
        _cache[key] = Matrix.from_columns(cols)
    return _cache[key]


def psi_total_kernel(a: CompositionAlgebra):
    return solve_kernel(psi_total_matrix(a))


# ---------------------------------------------------------------------------
# inclusions t(B) -> t(B') along a doubling


class InclusionEmbedding:
    """t(B) -> t(B') determined by compatibility with the Psi maps."""

    def __init__(self, base, double, matrix):
        self.base = base
        self.double = double
        self.matrix = matrix  # dim t(B') x dim t(B), in the two coord systems

    def apply(self, t: TrialityTriple) -> TrialityTriple:
        tb = triality_algebra(self.base)
        td = triality_algebra(self.double)
        return td.from_coords(self.matrix.matvec(tb.coords(t)))


def inclusion_embedding(b: CompositionAlgebra, bp: CompositionAlgebra):
    """Embedding along B c B' = B + eB, pinned by Psi compatibility.

    Requires ker(sum Psi_B) c ker(sum Psi_B' restricted to wedges from B),
    which is exactly the kernel-containment statement being verified.
    """
    key = ("incl", b.name, bp.name)
    if key in _cache:
        return _cache[key]
    if bp.dim != 2 * b.dim:
        raise ValueError("second algebra is not a double of the first")
    tb = triality_algebra(b)
    tdouble = triality_algebra(bp)
    mb = psi_total_matrix(b)
    # same wedges, seen inside B' (basis indices agree on the first block)
    cols = []
    for slot in (1, 2, 3):
        pm = psi_map(bp, slot)
        for (u, v) in wedge_pairs(b.dim):
            cols.append(tdouble.coords(pm.on_basis(u, v)))
    mbp = Matrix.from_columns(cols)
    for k in solve_kernel(mb):
        if not all(x == 0 for x in mbp.matvec(k)):
            raise AssertionError("kernel containment fails along the doubling")
    cols_out = []
    for i in range(tb.dim):
        e = [Q(1) if j == i else ZERO for j in range(tb.dim)]
        xi = linear_solve(mb, e)
        if xi is None:
            raise AssertionError("summed Psi map is not surjective")
        cols_out.append(mbp.matvec(xi))
    emb = InclusionEmbedding(b, bp, Matrix.from_columns(cols_out))
    _cache[key] = emb
    return emb


def preserving_subspace_dim(bp: CompositionAlgebra, block: int):
    """dim of {T in t(B'): each T_i maps the first `block` coordinates into
    themselves}, the stabilizer description of the embedded t(B)."""
    t = triality_algebra(bp)
    n = bp.dim
    rows = []
    for bas in t.basis:
        rows.append(bas.flatten())
    # linear conditions: lower-left block of each component vanishes
    conds = []
    nn = n * n
    for comp in range(3):
        for r in range(block, n):
            for c in range(block):
                conds.append(comp * nn + r * n + c)
    cond_matrix = Matrix([[row[c] for c in conds] for row in rows])
    return t.dim - matrix_rank(cond_matrix)


def imaginary_triple(a: CompositionAlgebra, z) -> TrialityTriple:
    """(-L_z - R_z, L_z, R_z), a triality triple for every imaginary z."""
    lz = a.left_mult_matrix(z)
    rz = a.right_mult_matrix(z)
    return TrialityTriple(a, -(lz + rz), lz, rz)


def derivation_triple(a: CompositionAlgebra, d: Matrix) -> TrialityTriple:
    """(D, D, D) for a derivation D."""
    return TrialityTriple(a, d, d, d)


def octonion_derivation_matrix(params) -> Matrix:
    """Closed-form 14-parameter family spanning Der(O) for the compact octonions.

    params: 14 rationals ordered (a2,a3,a4,a5,a6,a7, b3,b4,b5,b6,b7, c5,c6,c7);
    the letters track the free entries of the first three nontrivial rows.
    The matrix is antisymmetric, kills the unit, and satisfies the Leibniz
    rule in every parameter direction; the fourteen directions are linearly
    independent, so the family is exactly Der(O).
    """
    a2, a3, a4, a5, a6, a7, b3, b4, b5, b6, b7, c5, c6, c7 = [frac(p) for p in params]
    z = ZERO
    rows = [
        [z, z, z, z, z, z, z, z],
        [z, z, -a2, -a3, -a4, -a5, -a6, -a7],
        [z, a2, z, -b3, -b4, -b5, -b6, -b7],
        [z, a3, b3, z, a6 - b5, -a7 + b4, -a4 - b7, a5 + b6],
        [z, a4, b4, -a6 + b5, z, -c5, -c6, -c7],
        [z, a5, b5, a7 - b4, c5, z, -a2 + c7, -a3 - c6],
        [z, a6, b6, a4 + b7, c6, a2 - c7, z, -b3 + c5],
        [z, a7, b7, -a5 - b6, c7, a3 + c6, b3 - c5, z],
    ]
    return Matrix(rows)
