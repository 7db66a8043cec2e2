"""Root systems and weight arithmetic for the split magic-square algebras.

The split form of each g(A, B) carries a rational maximal torus assembled
from split toral sets of the two triality algebras: the whole of t(C~), a
triple of associative left/right multiplications in t(H~), and the four
hyperbolic boost lifts in t(O~).  Simultaneous ad-eigenspaces of that torus
are one-dimensional and their eigenvalue tuples are the roots; everything
downstream (Weyl dimension formula, Freudenthal multiplicities, Casimir
ratios, tensor-square decompositions) is exact rational arithmetic on those
tuples.

Normalization: long roots have squared length 2, separately in each simple
factor.  Casimir values are only ever compared as ratios.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction as Q

from .composition import CompositionAlgebra
from .magic import LieAlgebra, _triality_struct
from .scalars import (
    CoordinateSolver,
    Matrix,
    NonRationalSpectrum,
    SymmetricForm,
    ZERO,
    linear_solve,
    simultaneous_eigenspaces,
    vec,
)
from .triality import TrialityTriple, polarized_norm, triality_algebra


# ---------------------------------------------------------------------------
# the RootSystem container


class RootSystem:
    """Finite crystallographic root system with a chosen simple basis.

    Roots are stored as ambient rational tuples (ad-eigenvalue tuples when
    extracted from an algebra, simple-root coordinates when built from a
    Cartan matrix).  Weights are handled in fundamental-weight coordinates
    throughout the public API.
    """

    def __init__(self, roots, simple_roots, cartan, d):
        self.roots = [tuple(r) for r in roots]
        self.simple_roots = [tuple(s) for s in simple_roots]
        self.rank = len(self.simple_roots)
        self.cartan_matrix = tuple(tuple(int(c) for c in row) for row in cartan)
        self._d = [Q(x) for x in d]
        r = self.rank
        C = self.cartan_matrix
        for i in range(r):
            assert C[i][i] == 2
            for j in range(r):
                if i != j and not (-3 <= C[i][j] <= 0):
                    raise ValueError(f"Cartan entry {C[i][j]} out of range")
        # Gram matrix of the simple roots: (s_i, s_j) = C_ij d_j
        self._gram = [[Q(C[i][j]) * self._d[j] for j in range(r)] for i in range(r)]
        for i in range(r):
            for j in range(r):
                assert self._gram[i][j] == self._gram[j][i], "bad length data"
        self._simple = {}
        if self.simple_roots and len(self.simple_roots[0]) == r and all(
                self.simple_roots[i] == tuple(Q(1) if k == i else ZERO
                                              for k in range(r))
                for i in range(r)):
            for root in self.roots:
                self._simple[root] = tuple(int(c) for c in root)
        else:
            solver = CoordinateSolver([vec(s) for s in self.simple_roots])
            for root in self.roots:
                cs = solver.coords(vec(root), check=True)
                assert all(c.denominator == 1 for c in cs), \
                    "root outside the root lattice"
                self._simple[root] = tuple(int(c) for c in cs)
        self.positive_roots = sorted(
            n for n in self._simple.values() if any(c > 0 for c in n))
        for n in self.positive_roots:
            assert all(c >= 0 for c in n), "sign-mixed root coordinates"
        assert 2 * len(self.positive_roots) == len(self.roots)
        # per positive root: wc increments and Weyl-denominator weights
        self._pos_wc = []
        self._pos_dw = []
        for n in self.positive_roots:
            self._pos_wc.append(tuple(sum(n[j] * C[j][i] for j in range(r))
                                      for i in range(r)))
            self._pos_dw.append([n[j] * self._d[j] for j in range(r)])
        # fundamental weights, as rows of the inverse Cartan matrix
        cinv = _invert(list(map(list, C)))
        self._cinv = cinv
        self._rho_simple = [sum(cinv[i][j] for i in range(r)) for j in range(r)]
        self.fundamental_weights = [
            tuple(sum(cinv[i][j] * Q(self.simple_roots[j][k])
                      for j in range(r)) for k in range(len(self.simple_roots[0])))
            for i in range(r)]
        self.inner_product = self._ambient_form()
        self._char_cache = {}
        self._neg_check()

    # -- construction -------------------------------------------------

    @classmethod
    def from_roots(cls, roots):
        """Select a simple basis from a closed root list and measure lengths."""
        roots = [tuple(r) for r in roots]
        rset = set(roots)
        n = len(roots[0])
        base = 10
        while True:
            f = [Q(base) ** i for i in range(n)]
            heights = {r: sum(c * w for c, w in zip(r, f)) for r in roots}
            if all(h != 0 for h in heights.values()):
                break
            base += 13
        pos = {r for r, h in heights.items() if h > 0}
        simples = [a for a in pos
                   if not any(tuple(x - y for x, y in zip(a, b)) in pos
                              for b in pos if b != a)]
        simples.sort(key=lambda r: heights[r])
        rk = len(simples)
        # Cartan integers from root strings: simple differences are never
        # roots, so C_ij = -max{m : s_i + m s_j is a root}
        C = [[2] * rk for _ in range(rk)]
        for i, j in itertools.permutations(range(rk), 2):
            m = 0
            cur = simples[i]
            while True:
                cur = tuple(x + y for x, y in zip(cur, simples[j]))
                if cur not in rset:
                    break
                m += 1
            C[i][j] = -m
        d = _lengths_from_cartan(C)
        return cls(roots, simples, C, d)

    @classmethod
    def from_cartan(cls, cartan, d):
        """Generate the root list from Cartan data by reflection closure."""
        rk = len(cartan)
        simples = [tuple(Q(1) if j == i else ZERO for j in range(rk))
                   for i in range(rk)]
        seen = set(simples)
        queue = list(simples)
        while queue:
            b = queue.pop()
            for i in range(rk):
                pair = sum(b[j] * cartan[j][i] for j in range(rk))
                img = tuple(b[j] - pair if j == i else b[j] for j in range(rk))
                if img not in seen:
                    seen.add(img)
                    queue.append(img)
        seen |= {tuple(-c for c in r) for r in seen}
        return cls(sorted(seen), simples, cartan, d)

    # -- internal geometry ----------------------------------------------

    def _neg_check(self):
        rset = set(self.roots)
        for r in self.roots:
            if tuple(-c for c in r) not in rset:
                raise ValueError("root list not closed under negation")
        # simple reflections permute the roots
        for n in list(self._simple.values()):
            for i in range(self.rank):
                pair = sum(n[j] * self.cartan_matrix[j][i] for j in range(self.rank))
                img = tuple(n[j] - pair if j == i else n[j] for j in range(self.rank))
                if img not in {tuple(v) for v in self._simple.values()}:
                    raise ValueError("roots not closed under simple reflections")
            break  # spot check only; verify_axioms does the full sweep

    def _ambient_form(self):
        amb = len(self.simple_roots[0]) if self.simple_roots else 0
        if amb != self.rank:
            return None
        s = Matrix.from_columns([vec(v) for v in self.simple_roots])
        cols = []
        solver = CoordinateSolver([vec(v) for v in self.simple_roots])
        for i in range(self.rank):
            e = tuple(Q(1) if j == i else ZERO for j in range(self.rank))
            cols.append(solver.coords(e))
        sinv = Matrix.from_columns(cols)
        g = Matrix(self._gram)
        b = sinv.transpose() * g * sinv
        return SymmetricForm(b.data)

    def verify_axioms(self, sample=None, seed=0):
        """Full reflection-closure check; sample limits the pair count."""
        coords = list(self._simple.values())
        cset = set(coords)
        pairs = [(a, b) for a in coords for b in coords]
        if sample is not None and len(pairs) > sample:
            import random
            pairs = random.Random(seed).sample(pairs, sample)
        for na, nb in pairs:
            num = self._ss(na, nb)
            den = self._ss(nb, nb)
            t = Q(2) * num / den
            assert t.denominator == 1, "non-integral Cartan pairing"
            img = tuple(a - int(t) * b for a, b in zip(na, nb))
            if img not in cset:
                return (na, nb)
        return None

    def _ss(self, m1, m2):
        g = self._gram
        return sum(m1[i] * g[i][j] * m2[j]
                   for i in range(self.rank) for j in range(self.rank))

    def _wc_to_simple(self, w):
        cinv = self._cinv
        return [sum(Q(w[i]) * cinv[i][j] for i in range(self.rank))
                for j in range(self.rank)]

    def _ws(self, w, m):
        # (x, y) with x in fundamental-weight and y in simple coordinates
        return sum(Q(w[j]) * self._d[j] * m[j] for j in range(self.rank))

    def weight_coords(self, ambient):
        """Fundamental-weight coordinates of an ambient vector."""
        solver = CoordinateSolver([vec(v) for v in self.simple_roots])
        m = solver.coords(vec(ambient), check=True)
        C = self.cartan_matrix
        return tuple(sum(m[j] * C[j][i] for j in range(self.rank))
                     for i in range(self.rank))

    def highest_root(self):
        """Highest root of a simple system, in fundamental-weight coordinates."""
        best = max(self.positive_roots, key=sum)
        w = tuple(sum(best[j] * self.cartan_matrix[j][i] for j in range(self.rank))
                  for i in range(self.rank))
        assert all(c >= 0 for c in w), "no dominant root: system is not simple"
        return w

    def components(self):
        """Connected components of the Dynkin diagram, as index lists."""
        C = self.cartan_matrix
        r = self.rank
        seen, comps = set(), []
        for start in range(r):
            if start in seen:
                continue
            comp, stack = [], [start]
            seen.add(start)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(r):
                    if j not in seen and i != j and C[i][j] != 0:
                        seen.add(j)
                        stack.append(j)
            comps.append(sorted(comp))
        return comps

    def __repr__(self):
        return f"RootSystem(rank={self.rank}, roots={len(self.roots)})"


def _invert(m):
    """Exact inverse of a small rational matrix."""
    n = len(m)
    a = [[Q(m[i][j]) for j in range(n)] + [Q(1) if j == i else Q(0)
                                           for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _lengths_from_cartan(C):
    """Squared half-lengths d_i with long roots normalized to length^2 = 2.

    Relative lengths propagate along diagram edges via d_i/d_j = C_ji/C_ij;
    each connected component is scaled so its longest root has d = 1.
    """
    r = len(C)
    d = [None] * r
    for start in range(r):
        if d[start] is not None:
            continue
        comp = [start]
        d[start] = Q(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(r):
                if i != j and C[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * Q(C[i][j], C[j][i])
                    comp.append(j)
                    stack.append(j)
        top = max(d[i] for i in comp)
        for i in comp:
            d[i] /= top
    return d


# ---------------------------------------------------------------------------
# standard systems in Bourbaki numbering


def standard_root_system(label) -> RootSystem:
    """Root system of a simple type, e.g. "E8" or "C3", Bourbaki numbering."""
    m = re.fullmatch(r"([A-G])(\d+)", label)
    if not m:
        raise ValueError(f"bad type label {label!r}")
    fam, n = m.group(1), int(m.group(2))
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def edge(i, j, cij=-1, cji=-1):
        C[i][j] = cij
        C[j][i] = cji

    d = [Q(1)] * n
    if fam == "A":
        for i in range(n - 1):
            edge(i, i + 1)
    elif fam == "B":
        if n < 2:
            raise ValueError("B needs rank >= 2")
        for i in range(n - 2):
            edge(i, i + 1)
        edge(n - 2, n - 1, -2, -1)
        d[n - 1] = Q(1, 2)
    elif fam == "C":
        if n < 2:
            raise ValueError("C needs rank >= 2")
        for i in range(n - 2):
            edge(i, i + 1)
        edge(n - 2, n - 1, -1, -2)
        d = [Q(1, 2)] * (n - 1) + [Q(1)]
    elif fam == "D":
        if n < 3:
            raise ValueError("D needs rank >= 3")
        for i in range(n - 2):
            edge(i, i + 1)
        edge(n - 3, n - 1)
    elif fam == "E":
        if n not in (6, 7, 8):
            raise ValueError("E needs rank 6, 7 or 8")
        chain = [0] + list(range(2, n))
        for i, j in zip(chain, chain[1:]):
            edge(i, j)
        edge(1, 3)
    elif fam == "F":
        if n != 4:
            raise ValueError("F needs rank 4")
        edge(0, 1)
        edge(1, 2, -2, -1)
        edge(2, 3)
        d = [Q(1), Q(1), Q(1, 2), Q(1, 2)]
    elif fam == "G":
        if n != 2:
            raise ValueError("G needs rank 2")
        edge(0, 1, -1, -3)
        d = [Q(1, 3), Q(1)]
    return RootSystem.from_cartan(C, d)


def product_root_system(*systems) -> RootSystem:
    """Orthogonal direct sum; simple roots are concatenated in order."""
    amb = [len(rs.simple_roots[0]) for rs in systems]
    total = sum(amb)
    rank = sum(rs.rank for rs in systems)
    roots, simples = [], []
    C = [[0] * rank for _ in range(rank)]
    d = []
    ro = 0   # rank offset
    ao = 0   # ambient offset
    for rs, a in zip(systems, amb):
        pad = lambda v, off=ao, w=a: (ZERO,) * off + tuple(v) + (ZERO,) * (total - off - w)
        roots.extend(pad(r) for r in rs.roots)
        simples.extend(pad(s) for s in rs.simple_roots)
        for i in range(rs.rank):
            C[ro + i][ro:ro + rs.rank] = list(rs.cartan_matrix[i])
        d.extend(rs._d)
        ro += rs.rank
        ao += a
    return RootSystem(roots, simples, C, d)


# ---------------------------------------------------------------------------
# extraction from a split algebra


def _toral_triality_coords(alg: CompositionAlgebra):
    """Coordinates, in the triality-algebra basis, of a split maximal torus.

    dim 2: the whole two-dimensional abelian t.
    dim 4: lifts of the three associative identities built on the split unit
           u = e_1 (u*u = 1): (L_u, L_u, 0), (R_u, 0, R_u), (0, -R_u, L_u).
    dim 8: the four commuting hyperbolic boosts e_i <-> e_{i+4}, lifted
           through the first-slot isomorphism.
    """
    ta = triality_algebra(alg)
    n = alg.dim
    if n == 1:
        return []
    if n == 2:
        assert ta.dim == 2
        return [tuple(Q(1) if j == i else ZERO for j in range(2)) for i in range(2)]
    if n == 4:
        u = alg.basis_element(1)
        assert (u * u).coeffs[0] == 1 and all(c == 0 for c in (u * u).coeffs[1:]), \
            "first imaginary unit is not a split direction"
        lm = alg.left_mult_matrix(u)
        rm = alg.right_mult_matrix(u)
        z = Matrix.zero(4, 4)
        trip = [(lm, lm, z), (rm, z, rm), (z, -Q(1) * rm, lm)]
        return [tuple(ta.coords(TrialityTriple(alg, *t), check=True)) for t in trip]
    assert n == 8
    g = polarized_norm(alg)
    half = 4
    slot1 = Matrix.from_columns([t.t1.flatten() for t in ta.basis])
    out = []
    for i in range(half):
        b = [[ZERO] * n for _ in range(n)]
        b[i][half + i] = Q(1)
        b[half + i][i] = Q(1)
        bm = Matrix(b)
        assert (bm.transpose() * g + g * bm).is_zero(), \
            "boost is not skew: algebra is not split in hyperbolic pairs"
        cs = linear_solve(slot1, bm.flatten())
        assert cs is not None, "boost does not lift to the triality algebra"
        out.append(tuple(cs))
    return out


def split_toral_set(L: LieAlgebra):
    """The pinned rational torus of g(A, B), as algebra coordinate vectors."""
    A, B = L.pair
    da = len(L.sectors["tA"])
    db = len(L.sectors["tB"])
    out = []
    for alg, base, dt in ((A, 0, da), (B, da, db)):
        for cs in _toral_triality_coords(alg):
            assert len(cs) == dt
            v = [ZERO] * L.dim
            for r, c in enumerate(cs):
                v[base + r] = c
            out.append(tuple(v))
    return out


def triality_lie(alg: CompositionAlgebra) -> LieAlgebra:
    """The triality algebra t(alg) as a standalone structure-constant algebra."""
    tab = _triality_struct(alg)
    dim = triality_algebra(alg).dim
    lie = LieAlgebra(f"t({alg.name})", [f"t:{i}" for i in range(dim)], tab)
    lie.sectors = {"t": range(dim)}
    return lie


def extract_root_system(L: LieAlgebra, cartan=None):
    """Roots of a split algebra as simultaneous ad-eigenvalue tuples.

    Returns (RootSystem, cartan_basis).  The Cartan subalgebra defaults to
    the split toral set of the two triality factors; pass explicit vectors
    for algebras built another way.  Raises if the candidate Cartan is not
    maximal (a zero-eigenvalue space bigger than its span) or if the
    spectrum is irrational (algebra not split over Q).
    """
    if cartan is None:
        if hasattr(L, "pair"):
            cartan = split_toral_set(L)
        else:
            raise ValueError("no toral set known for this algebra; pass cartan=")
    if not cartan:
        # the (R, R) corner: so3 has no rational split torus, but its
        # complexification is the rank-one system
        assert L.dim == 3, "empty Cartan is only expected for the 3-dim corner"
        return standard_root_system("A1"), []
    rank = len(cartan)
    ads = [L.ad_matrix(vec(v)) for v in cartan]
    sectors = L.sectors if L.sectors else {"all": range(L.dim)}
    roots = []
    root_vectors = []
    zero_vectors = []
    for name, rng in sectors.items():
        idx = list(rng)
        inside = set(idx)
        blocks = []
        for m in ads:
            for j in idx:
                for i in range(L.dim):
                    if m.data[i][j] != 0 and i not in inside:
                        raise ValueError(f"torus does not preserve sector {name}")
            blocks.append(Matrix([[m.data[i][j] for j in idx] for i in idx]))
        try:
            spaces = simultaneous_eigenspaces(blocks)
        except NonRationalSpectrum as e:
            raise ValueError(f"sector {name} has irrational weights: {e}") from e
        for eigs, basis in spaces:
            padded = []
            for b in basis:
                v = [ZERO] * L.dim
                for r, c in zip(idx, b):
                    v[r] = c
                padded.append(tuple(v))
            if all(c == 0 for c in eigs):
                zero_vectors.extend(padded)
            else:
                if len(padded) != 1:
                    raise ValueError(
                        f"root space of {eigs} has dimension {len(padded)}; "
                        "the torus is not maximal")
                if tuple(eigs) in set(roots):
                    raise ValueError(f"root {eigs} repeats across sectors")
                roots.append(tuple(eigs))
                root_vectors.append(padded[0])
    if len(zero_vectors) != rank:
        raise ValueError(
            f"zero-weight space has dimension {len(zero_vectors)} > rank {rank}: "
            "the Cartan subalgebra is not maximal")
    solver = CoordinateSolver([vec(v) for v in zero_vectors])
    for v in cartan:
        solver.coords(vec(v), check=True)
    assert len(roots) == L.dim - rank
    rs = RootSystem.from_roots(roots)
    rs.root_vectors = dict(zip(roots, root_vectors))
    return rs, [vec(v) for v in cartan]


# ---------------------------------------------------------------------------
# type recognition


def identify_type(rs: RootSystem) -> str:
    """Cartan label of a semisimple system, components joined by a times sign.

    >>> identify_type(standard_root_system("F4"))
    'F4'
    """
    labels = []
    for comp in rs.components():
        labels.append(_component_label(rs, comp))
    labels.sort(key=lambda s: (s[0], int(s[1:])))
    return "×".join(labels)


def _component_label(rs, comp):
    C = rs.cartan_matrix
    k = len(comp)
    if k == 1:
        return "A1"
    edges = [(i, j) for i, j in itertools.combinations(comp, 2) if C[i][j] != 0]
    mults = {e: C[e[0]][e[1]] * C[e[1]][e[0]] for e in edges}
    deg = {i: 0 for i in comp}
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    if len(edges) != k - 1:
        raise ValueError("Dynkin graph of a component is not a tree")
    if any(m == 3 for m in mults.values()):
        if k != 2:
            raise ValueError("triple edge in a rank>2 component")
        return "G2"
    if any(m == 2 for m in mults.values()):
        if max(deg.values()) > 2:
            raise ValueError("branched doubly-laced diagram")
        dmax = max(rs._d[i] for i in comp)
        longs = sum(1 for i in comp if rs._d[i] == dmax)
        shorts = k - longs
        if k == 2:
            return "B2"
        if longs == 2 and shorts == 2 and k == 4:
            return "F4"
        if shorts == 1:
            return f"B{k}"
        if longs == 1:
            return f"C{k}"
        raise ValueError("unrecognized doubly-laced diagram")
    if max(deg.values()) <= 2:
        return f"A{k}"
    branch = [i for i in comp if deg[i] == 3]
    if len(branch) != 1 or max(deg.values()) > 3:
        raise ValueError("unrecognized branching pattern")
    b = branch[0]
    arms = []
    for start in (j for j in comp if C[b][j] != 0 and j != b):
        length, prev, cur = 1, b, start
        while True:
            nxt = [j for j in comp if j not in (prev, cur) and C[cur][j] != 0]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return f"D{k}"
    if arms == [1, 2, 2]:
        return "E6"
    if arms == [1, 2, 3]:
        return "E7"
    if arms == [1, 2, 4]:
        return "E8"
    raise ValueError(f"unrecognized simply-laced diagram with arms {arms}")


# ---------------------------------------------------------------------------
# dimension, Casimir, multiplicities


def _check_dominant(w, rank):
    if len(w) != rank:
        raise ValueError(f"weight has {len(w)} coordinates, expected {rank}")
    if any(c < 0 for c in w):
        raise ValueError(f"weight {w} is not dominant")


def weyl_dimension(rs: RootSystem, w) -> int:
    """dim of the irreducible with highest weight w (fundamental-weight coords).

    >>> weyl_dimension(standard_root_system("A2"), (1, 0))
    3
    """
    _check_dominant(w, rs.rank)
    num = den = Q(1)
    for dw in rs._pos_dw:
        num *= sum(dwj * (wj + 1) for dwj, wj in zip(dw, w))
        den *= sum(dw)
    out = num / den
    assert out.denominator == 1 and out > 0
    return int(out)


def casimir_value(rs: RootSystem, w) -> Q:
    """(w, w + 2 rho); only ratios of these are meaningful."""
    _check_dominant(w, rs.rank)
    m = rs._wc_to_simple(w)
    return rs._ws(tuple(Q(c) + 2 for c in w), m)


def _dominant_rep(rs, base_wc, k):
    """Dominant Weyl conjugate of base - sum k_i alpha_i, as an offset tuple.

    Returns None when the weight leaves the cone below the base (so it
    cannot belong to the module with that highest weight).
    """
    C = rs.cartan_matrix
    r = rs.rank
    k = list(k)
    while True:
        if any(c < 0 for c in k):
            return None
        wc = [base_wc[i] - sum(k[j] * C[j][i] for j in range(r)) for i in range(r)]
        neg = next((i for i in range(r) if wc[i] < 0), None)
        if neg is None:
            return tuple(k)
        k[neg] += wc[neg]


def _dominant_character(rs, lam):
    """{offset tuple: multiplicity} over dominant weights of V(lam).

    Offsets count simple roots below lam.  Dominant weights are reached by
    walking positive-root covers of the dominance order; multiplicities come
    from the Freudenthal recursion, evaluated outward-in.
    """
    lam = tuple(lam)
    key = ("dom", lam)
    if key in rs._char_cache:
        return rs._char_cache[key]
    r = rs.rank
    C = rs.cartan_matrix
    zero = tuple(0 for _ in range(r))
    nodes = {zero: tuple(lam)}
    queue = [zero]
    while queue:
        k = queue.pop()
        wc = nodes[k]
        for n, dwc in zip(rs.positive_roots, rs._pos_wc):
            k2 = tuple(a + b for a, b in zip(k, n))
            if k2 in nodes:
                continue
            wc2 = tuple(a - b for a, b in zip(wc, dwc))
            if all(c >= 0 for c in wc2):
                nodes[k2] = wc2
                queue.append(k2)
    m_lam = rs._wc_to_simple(lam)
    m_rho = rs._rho_simple
    lam_rho = [a + b for a, b in zip(m_lam, m_rho)]
    cas_top = rs._ss(lam_rho, lam_rho)
    # pairing data per positive root
    g = rs._gram
    gcols = [[sum(Q(n[i]) * g[i][j] for i in range(r)) for j in range(r)]
             for n in rs.positive_roots]
    lam_dot = [sum(Q(m_lam[j]) * col[j] for j in range(r)) for col in gcols]
    mult = {zero: 1}
    for k in sorted(nodes, key=sum)[1:]:
        mu_rho = [lam_rho[j] - k[j] for j in range(r)]
        den = cas_top - rs._ss(mu_rho, mu_rho)
        assert den != 0, "Freudenthal denominator vanished"
        total = Q(0)
        for n, col, ld in zip(rs.positive_roots, gcols, lam_dot):
            aa = sum(Q(n[j]) * col[j] for j in range(r))
            step = 1
            while True:
                kk = tuple(a - step * b for a, b in zip(k, n))
                rep = _dominant_rep(rs, lam, kk)
                if rep is None:
                    break
                m = mult.get(rep, 0)
                if m:
                    # (mu + step*alpha, alpha)
                    val = ld - sum(Q(kk[j]) * col[j] for j in range(r))
                    total += m * val
                step += 1
        v = 2 * total / den
        assert v.denominator == 1 and v >= 0
        if v:
            mult[k] = int(v)
    rs._char_cache[key] = mult
    return mult


def weight_multiplicity(rs: RootSystem, lam, mu) -> int:
    """Multiplicity of the weight mu in the irreducible of highest weight lam."""
    _check_dominant(lam, rs.rank)
    diff = tuple(a - b for a, b in zip(rs._wc_to_simple(lam), rs._wc_to_simple(mu)))
    if any(c.denominator != 1 or c < 0 for c in diff):
        return 0
    rep = _dominant_rep(rs, tuple(lam), tuple(int(c) for c in diff))
    if rep is None:
        return 0
    return _dominant_character(rs, lam).get(rep, 0)


def _full_character(rs, lam):
    """{offset: multiplicity} over the whole weight system of V(lam)."""
    lam = tuple(lam)
    key = ("full", lam)
    if key in rs._char_cache:
        return rs._char_cache[key]
    r = rs.rank
    C = rs.cartan_matrix
    dom = _dominant_character(rs, lam)
    out = {}
    for k0, m in dom.items():
        wc0 = tuple(lam[i] - sum(k0[j] * C[j][i] for j in range(r))
                    for i in range(r))
        seen = {k0}
        stack = [(k0, wc0)]
        while stack:
            k, wc = stack.pop()
            for i in range(r):
                if wc[i] > 0:
                    k2 = tuple(a + (wc[i] if j == i else 0)
                               for j, a in enumerate(k))
                    if k2 not in seen:
                        seen.add(k2)
                        wc2 = tuple(wc[j] - wc[i] * C[i][j] for j in range(r))
                        stack.append((k2, wc2))
        for k in seen:
            out[k] = m
    rs._char_cache[key] = out
    return out


def square_decompose(rs: RootSystem, lam, parity):
    """Components of the symmetric or alternating square of V(lam).

    parity is "sym" or "alt".  Returns [(highest weight, multiplicity)] in
    peeling order: the character of the square (conjured from the doubled
    character identity 2 char S^2 V = (char V)^2 + char V(x^2)) repeatedly
    loses its lexicographically largest dominant weight.
    """
    if parity not in ("sym", "alt"):
        raise ValueError("parity must be 'sym' or 'alt'")
    _check_dominant(lam, rs.rank)
    r = rs.rank
    C = rs.cartan_matrix
    chi = _full_character(rs, lam)
    items = list(chi.items())
    square = {}
    for a, (k1, m1) in enumerate(items):
        for k2, m2 in items[a:]:
            k = tuple(x + y for x, y in zip(k1, k2))
            if k1 == k2:
                c = m1 * (m1 + (1 if parity == "sym" else -1)) // 2
            else:
                c = m1 * m2
            if c:
                square[k] = square.get(k, 0) + c
    base = tuple(2 * c for c in lam)
    d = weyl_dimension(rs, lam)
    want = d * (d + 1) // 2 if parity == "sym" else d * (d - 1) // 2
    out = []
    total = 0
    while True:
        # lexicographically largest in simple-root coordinates, i.e. smallest
        # offset below 2 lam; lex on root coordinates refines dominance, so
        # the chosen weight is never inside a component peeled later
        best = None
        for k, m in square.items():
            if m == 0:
                continue
            if best is not None and k >= best[1]:
                continue
            wc = tuple(base[i] - sum(k[j] * C[j][i] for j in range(r))
                       for i in range(r))
            if all(c >= 0 for c in wc):
                best = (wc, k, m)
        if best is None:
            break
        wc, k0, m = best
        assert m > 0, "peeling produced a negative multiplicity"
        comp = _full_character(rs, wc)
        for kc, mc in comp.items():
            k = tuple(a + b for a, b in zip(k0, kc))
            square[k] = square.get(k, 0) - m * mc
        out.append((wc, m))
        total += m * weyl_dimension(rs, wc)
    assert all(m == 0 for m in square.values()), "character did not peel cleanly"
    assert total == want, f"square dims sum to {total}, expected {want}"
    return out


# ---------------------------------------------------------------------------
# the Casimir eigenspace criterion on the alternating square


def casimir_eigenspace_test(rs: RootSystem, lam):
    """Is the span of the tangent constituents of the alternating square a
    Casimir eigenspace of the whole square, and what is its codimension?

    The tangent constituents are those with highest weight 2 lam - alpha for
    a simple root alpha not orthogonal to lam.  Returns (single, codim):
    single is True when every constituent shares their Casimir value, and
    codim is the complementary dimension inside the full square.
    """
    _check_dominant(lam, rs.rank)
    comps = square_decompose(rs, lam, "alt")
    C = rs.cartan_matrix
    tangent = set()
    for i in range(rs.rank):
        if lam[i] != 0:
            tangent.add(tuple(2 * lam[j] - C[i][j] for j in range(rs.rank)))
    present = {w for w, _ in comps}
    missing = tangent - present
    assert not missing, f"tangent weights {missing} absent from the square"
    values = {w: casimir_value(rs, w) for w, _ in comps}
    shared = {values[w] for w in tangent}
    dim_total = 0
    dim_shared = 0
    for w, m in comps:
        dw = m * weyl_dimension(rs, w)
        dim_total += dw
        if values[w] in shared:
            dim_shared += dw
    return (dim_shared == dim_total, dim_total - dim_shared)
