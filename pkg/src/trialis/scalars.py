"""Exact rational linear algebra: kernels, inertia, simultaneous eigenspaces.

All scalars are fractions.Fraction (kept in lowest terms with positive
denominator by the stdlib itself); no floating point anywhere. Vectors are
tuples of Fractions, matrices are small dense row-major grids. The eigen
machinery only has to split commuting operators whose spectra are rational
(ad-operators of split Lie algebras in well-chosen bases), so eigenvalue
discovery is rational-root search on annihilator polynomials produced by
Krylov iteration, not general algebraic-number factoring.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import count

Q = Fraction
ZERO = Q(0)
ONE = Q(1)


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# vectors: plain tuples of Fractions


def vec(xs):
    return tuple(frac(x) for x in xs)


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(c, u):
    c = frac(c)
    return tuple(c * a for a in u)


def vdot(u, v):
    return sum((a * b for a, b in zip(u, v, strict=True)), ZERO)


def vzero(n):
    return (ZERO,) * n


def is_zero_vec(u):
    return all(a == 0 for a in u)


class Matrix:
    """Dense matrix over Q. Immutable by convention (nothing mutates data)."""

    __slots__ = ("data", "rows", "cols")

    def __init__(self, data):
        self.data = tuple(vec(row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(r) != self.cols for r in self.data):
            raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows, cols):
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns):
        return cls(columns).transpose()

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __add__(self, other):
        return Matrix([vadd(a, b) for a, b in zip(self.data, other.data, strict=True)])

    def __sub__(self, other):
        return Matrix([vsub(a, b) for a, b in zip(self.data, other.data, strict=True)])

    def __neg__(self):
        return Matrix([vscale(-1, r) for r in self.data])

    def scale(self, c):
        return Matrix([vscale(c, r) for r in self.data])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            cols = other.transpose().data
            return Matrix([[vdot(r, c) for c in cols] for r in self.data])
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def matvec(self, v):
        return tuple(vdot(r, v) for r in self.data)

    def transpose(self):
        return Matrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def trace(self):
        if self.rows != self.cols:
            raise ValueError("trace of non-square matrix")
        return sum((self.data[i][i] for i in range(self.rows)), ZERO)

    def is_zero(self):
        return all(is_zero_vec(r) for r in self.data)

    def commutator(self, other):
        return self * other - other * self

    # bracket/flatten let matrices serve as Lie algebra elements alongside
    # other linear objects that provide the same two methods
    def bracket(self, other):
        return self.commutator(other)

    def flatten(self):
        return tuple(x for row in self.data for x in row)

    def __repr__(self):
        return f"Matrix({[list(map(str, r)) for r in self.data]})"


class SymmetricForm(Matrix):
    """Symmetric bilinear form; entries[i][j] == entries[j][i] enforced."""

    def __init__(self, data):
        super().__init__(data)
        if self.rows != self.cols:
            raise ValueError("form must be square")
        for i in range(self.rows):
            for j in range(i):
                if self.data[i][j] != self.data[j][i]:
                    raise ValueError("form not symmetric")

    @property
    def dimension(self):
        return self.rows


# ---------------------------------------------------------------------------
# elimination


def _rref(rows):
    """Row-reduce a list of row-lists in place; return pivot column list."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = ONE / rows[r][c]
        if inv != 1:
            rows[r] = [inv * x for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                ri, rr = rows[i], rows[r]
                rows[i] = [a - f * b for a, b in zip(ri, rr)]
        pivots.append(c)
        r += 1
    return pivots


def rank(m: Matrix) -> int:
    rows = [list(r) for r in m.data]
    return len(_rref(rows))


def solve_kernel(m: Matrix):
    """Basis of the right null space of m, as a list of length-cols tuples."""
    rows = [list(r) for r in m.data]
    pivots = _rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [ZERO] * m.cols
        v[free] = ONE
        for r, c in enumerate(pivots):
            v[c] = -rows[r][free]
        basis.append(tuple(v))
    return basis


def linear_solve(m: Matrix, b):
    """One solution x of m x = b, or None if inconsistent."""
    rows = [list(r) + [frac(x)] for r, x in zip(m.data, b, strict=True)]
    pivots = _rref(rows)
    for r in range(len(pivots), m.rows):
        if rows[r][m.cols] != 0:
            return None
    x = [ZERO] * m.cols
    for r, c in enumerate(pivots):
        if c == m.cols:
            return None
        x[c] = rows[r][m.cols]
    return tuple(x)


def express_in_basis(basis, targets):
    """Coordinates of each target in the given independent basis.

    One elimination for the whole batch: columns are basis vectors, the
    targets ride along as extra columns. Raises if some target is outside
    the span or the basis is dependent.
    """
    k = len(basis)
    if k == 0:
        for t in targets:
            if not is_zero_vec(t):
                raise ValueError("target outside span of empty basis")
        return [() for _ in targets]
    n = len(basis[0])
    m = len(targets)
    rows = [[frac(basis[j][i]) for j in range(k)] + [frac(t[i]) for t in targets]
            for i in range(n)]
    pivots = _rref(rows)
    if any(p >= k for p in pivots):
        raise ValueError("target outside span")
    if pivots != list(range(k)):
        raise ValueError("basis vectors are dependent")
    return [tuple(rows[r][k + t] for r in range(k)) for t in range(m)]


class CoordinateSolver:
    """Repeated coordinate extraction against a fixed independent basis."""

    def __init__(self, basis):
        self.basis = [vec(v) for v in basis]
        self.k = len(self.basis)
        self.n = len(self.basis[0]) if self.basis else 0
        # left inverse: rows of the rref multiplier sitting at pivot positions
        rows = [[self.basis[j][i] for j in range(self.k)]
                + [ONE if t == i else ZERO for t in range(self.n)]
                for i in range(self.n)]
        pivots = _rref(rows)
        if pivots[:self.k] != list(range(self.k)):
            raise ValueError("basis vectors are dependent")
        self.proj = [tuple(rows[r][self.k:]) for r in range(self.k)]

    def coords(self, v, check=False):
        c = tuple(vdot(p, v) for p in self.proj)
        if check:
            back = vzero(self.n)
            for ci, bi in zip(c, self.basis):
                back = vadd(back, vscale(ci, bi))
            if back != tuple(vec(v)):
                raise ValueError("vector outside span")
        return c


# ---------------------------------------------------------------------------
# inertia of a symmetric form (Sylvester signature), by symmetric congruence


def inertia(f: SymmetricForm):
    """(n_pos, n_neg, n_zero) of a symmetric rational form."""
    n = f.rows
    a = [list(r) for r in f.data]
    alive = list(range(n))
    pos = neg = 0
    while alive:
        # prefer a nonzero diagonal pivot
        p = next((i for i in alive if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in alive for j in alive if j > i and a[i][j] != 0),
                        None)
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            # congruence row_i += row_j (and col) makes a[i][i] = 2 a[i][j] != 0
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            p = i
        d = a[p][p]
        if d > 0:
            pos += 1
        else:
            neg += 1
        alive.remove(p)
        for i in alive:
            if a[i][p] != 0:
                fpi = a[i][p] / d
                for t in alive:
                    a[i][t] -= fpi * a[p][t]
        for i in alive:
            a[p][i] = a[i][p] = ZERO
    return (pos, neg, n - pos - neg)


# ---------------------------------------------------------------------------
# polynomials over Q, ascending coefficient lists, for minimal polynomials


def _poly_normalize(p):
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return list(p)


def _poly_mul(p, q):
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _poly_normalize(out)


def _poly_divmod(p, q):
    p = list(p)
    q = _poly_normalize(q)
    dq = len(q) - 1
    if dq == 0:
        return [x / q[0] for x in p], [ZERO]
    quo = [ZERO] * max(1, len(p) - dq)
    while len(_poly_normalize(p)) - 1 >= dq and any(x != 0 for x in p):
        p = _poly_normalize(p)
        dp = len(p) - 1
        if dp < dq:
            break
        c = p[-1] / q[-1]
        quo[dp - dq] = c
        for i in range(dq + 1):
            p[dp - dq + i] -= c * q[i]
        p = p[:-1] if p and p[-1] == 0 else p
    return _poly_normalize(quo), _poly_normalize(p)


def _poly_gcd(p, q):
    p, q = _poly_normalize(p), _poly_normalize(q)
    while any(x != 0 for x in q):
        _, r = _poly_divmod(p, q)
        p, q = q, _poly_normalize(r)
    if p[-1] != 0 and p[-1] != 1:
        lead = p[-1]
        p = [x / lead for x in p]
    return p


def _poly_lcm(p, q):
    g = _poly_gcd(p, q)
    if len(g) == 1 and g[0] == 0:
        return [ZERO]
    quo, rem = _poly_divmod(p, g)
    assert all(x == 0 for x in rem)
    out = _poly_mul(quo, q)
    if out[-1] != 1:
        lead = out[-1]
        out = [x / lead for x in out]
    return out


class NonRationalSpectrum(Exception):
    """A block could not be split over Q (non-rational or defective)."""


def _rational_roots_split(p):
    """All roots of p, required to be rational; raises NonRationalSpectrum.

    p is monic with rational coefficients; returns roots with multiplicity.
    """
    p = _poly_normalize(p)
    roots = []
    # clear denominators: integer polynomial a_d x^d + ... + a_0
    while len(p) > 1:
        if p[0] == 0:
            roots.append(ZERO)
            p = p[1:]
            continue
        den = 1
        for c in p:
            den = den * c.denominator // _gcd_int(den, c.denominator)
        ip = [int(c * den) for c in p]
        a0, ad = abs(ip[0]), abs(ip[-1])
        found = None
        for r in _divisors(a0):
            for s in _divisors(ad):
                if _gcd_int(r, s) != 1:
                    continue
                for sign in (1, -1):
                    cand = Q(sign * r, s)
                    if _poly_eval(p, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise NonRationalSpectrum(f"irreducible factor of degree {len(p)-1}")
        roots.append(found)
        p, rem = _poly_divmod(p, [-found, ONE])
        assert all(x == 0 for x in rem)
    return roots


def _poly_eval(p, x):
    out = ZERO
    for c in reversed(p):
        out = out * x + c
    return out


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def _krylov_annihilator(mdata, v):
    """Monic polynomial p of least degree with p(M) v = 0."""
    n = len(v)
    echelon = []  # (pivot index, vector, poly) with poly(M) applied to v = vector
    w = tuple(v)
    p = [ONE]
    for _ in count():
        for piv, evec, epoly in echelon:
            if w[piv] != 0:
                c = w[piv] / evec[piv]
                w = tuple(a - c * b for a, b in zip(w, evec))
                mx = max(len(p), len(epoly))
                p = [(p[i] if i < len(p) else ZERO) - c * (epoly[i] if i < len(epoly) else ZERO)
                     for i in range(mx)]
        if all(a == 0 for a in w):
            return _poly_normalize(p)
        piv = next(i for i in range(n) if w[i] != 0)
        echelon.append((piv, w, p))
        w = tuple(vdot(row, w) for row in mdata)
        p = [ZERO] + list(p)


def minimal_polynomial(m: Matrix):
    """Minimal polynomial (monic, ascending coefficients) of a square matrix."""
    n = m.rows
    if n == 0:
        return [ONE]
    # pseudo-random start vector usually captures the full minimal polynomial
    seed = tuple(Q((7 * i * i + 3 * i + 1) % 11 - 5) for i in range(n))
    p = _krylov_annihilator(m.data, seed)
    for i in range(n):
        if len(p) - 1 == n:
            break
        e = tuple(ONE if j == i else ZERO for j in range(n))
        q = _krylov_annihilator(m.data, e)
        _, rem = _poly_divmod(q, p)
        if any(x != 0 for x in rem):
            p = _poly_lcm(p, q)
    return p


def eigenvalues(m: Matrix):
    """Distinct rational eigenvalues; raises NonRationalSpectrum if any are not."""
    return sorted(set(_rational_roots_split(minimal_polynomial(m))))


# ---------------------------------------------------------------------------
# simultaneous eigenspace decomposition for commuting rational-semisimple maps


def _split_one(mdata, dim):
    """Split Q^dim under one operator: list of (eigenvalue, coord basis)."""
    m = Matrix(mdata) if not isinstance(mdata, Matrix) else mdata
    seed = tuple(Q((5 * i * i + i + 2) % 13 - 6) for i in range(dim))
    p = _krylov_annihilator(m.data, seed)
    tried = 0
    while True:
        roots = sorted(set(_rational_roots_split(p)))
        spaces = []
        total = 0
        ident = Matrix.identity(dim)
        for lam in roots:
            ker = solve_kernel(m - ident.scale(lam))
            if ker:
                spaces.append((lam, ker))
                total += len(ker)
        if total == dim:
            return spaces
        # annihilator from the seed vector missed part of the spectrum
        if tried == dim:
            raise NonRationalSpectrum(
                f"operator not diagonalizable over Q (split {total} of {dim})")
        e = tuple(ONE if j == tried else ZERO for j in range(dim))
        q = _krylov_annihilator(m.data, e)
        _, rem = _poly_divmod(q, p)
        if any(x != 0 for x in rem):
            p = _poly_lcm(p, q)
        tried += 1


def simultaneous_eigenspaces(ms, space=None):
    """Joint eigenspace decomposition of commuting rational-semisimple maps.

    Returns a list of (eigenvalue tuple, ambient basis vectors). The ambient
    space defaults to all of Q^n; pass `space` (a list of vectors) to restrict.
    """
    ms = [m if isinstance(m, Matrix) else Matrix(m) for m in ms]
    if not ms:
        if space is None:
            raise ValueError("need at least one matrix or an explicit space")
        return [((), list(space))]
    n = ms[0].rows
    if space is None:
        space = [tuple(ONE if j == i else ZERO for j in range(n)) for i in range(n)]

    def restrict_all(basis, mats):
        targets = []
        for m in mats:
            targets.extend(m.matvec(b) for b in basis)
        coords = express_in_basis(basis, targets)
        k = len(basis)
        out = []
        for t, _ in enumerate(mats):
            cols = coords[t * k:(t + 1) * k]
            out.append(Matrix([[cols[j][i] for j in range(k)] for i in range(k)]))
        return out

    if len(space) != n or space != [tuple(ONE if j == i else ZERO for j in range(n))
                                    for i in range(n)]:
        mats = restrict_all([vec(v) for v in space], ms)
    else:
        mats = ms

    def refine(ambient_basis, rmats, labels):
        if not rmats:
            return [(labels, ambient_basis)]
        k = len(ambient_basis)
        head, tail = rmats[0], rmats[1:]
        out = []
        for lam, coord_basis in _split_one(head, k):
            child = [tuple(sum((c[j] * ambient_basis[j][i] for j in range(k)), ZERO)
                           for i in range(len(ambient_basis[0])))
                     for c in coord_basis]
            if tail:
                child_mats = []
                kk = len(coord_basis)
                targets = []
                for t in tail:
                    targets.extend(t.matvec(c) for c in coord_basis)
                coords = express_in_basis(coord_basis, targets)
                for ti in range(len(tail)):
                    cols = coords[ti * kk:(ti + 1) * kk]
                    child_mats.append(Matrix([[cols[j][i] for j in range(kk)]
                                              for i in range(kk)]))
            else:
                child_mats = []
            out.extend(refine(child, child_mats, labels + (lam,)))
        return out

    basis0 = [vec(v) for v in space]
    return refine(basis0, mats, ())
