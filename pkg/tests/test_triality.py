"""Derivation algebras, triality algebras, Psi maps, inclusions.

Every numeric constant here was computed independently before being frozen:
derivation dimensions come from the inner-derivation span, kernel and rank
data from explicit wedge bases, and the low-dimensional generator families
from closed-form left/right multiplication operators.
"""

import random
from fractions import Fraction as Q

import pytest

from trialis.composition import ALGEBRAS
from trialis.scalars import Matrix, express_in_basis, rank, solve_kernel, vdot
from trialis.triality import (
    TrialityTriple,
    derivation_triple,
    derivations,
    imaginary_triple,
    inclusion_embedding,
    polarized_norm,
    preserving_subspace_dim,
    psi_map,
    psi_total_kernel,
    psi_total_matrix,
    rho,
    s3_outer_action,
    triality_algebra,
    triality_project,
    wedge_pairs,
)

C = ALGEBRAS["C"]
H = ALGEBRAS["H"]
O = ALGEBRAS["O"]


def zero_matrix(n):
    return Matrix([[Q(0)] * n for _ in range(n)])


def from_product_form(a, s1, s2, s3):
    # triples are stored against the bar identity; a triple (S1, S2, S3)
    # with S1(xy) = S2(x) y + x S3(y) corresponds to (conj S1 conj, S2, S3)
    cj = a.conj_matrix()
    return TrialityTriple(a, cj * s1 * cj, s2, s3)


def inner_derivation(a, x, y):
    # [L_x, L_y] + [L_x, R_y] + [R_x, R_y] is a derivation of any
    # alternative algebra, and these span the derivation algebra here
    lx, ly = a.left_mult_matrix(x), a.left_mult_matrix(y)
    rx, ry = a.right_mult_matrix(x), a.right_mult_matrix(y)
    return lx.commutator(ly) + lx.commutator(ry) + rx.commutator(ry)


def leibniz_holds(a, d):
    for i in range(a.dim):
        x = a.basis_element(i)
        dx = a.element(d.matvec(list(x.coeffs)))
        for j in range(a.dim):
            y = a.basis_element(j)
            dy = a.element(d.matvec(list(y.coeffs)))
            dxy = a.element(d.matvec(list((x * y).coeffs)))
            if not (dxy - (dx * y + x * dy)).coeffs == (Q(0),) * a.dim:
                return False
    return True


def trace_power(m, p):
    acc = m
    for _ in range(p - 1):
        acc = acc * m
    return sum(acc.data[i][i] for i in range(acc.rows))


def triple_pairing(t, u):
    return sum(sum((x * y).data[i][i] for i in range(x.rows))
               for x, y in zip(t.components(), u.components()))


def norm_pair(a, u, v):
    return vdot(list(u), polarized_norm(a).matvec(list(v)))


def wedge_matrix(a, u, v):
    """(u ^ v) as an endomorphism, x -> N(u,x) v - N(v,x) u."""
    npol = polarized_norm(a)
    cols = []
    for k in range(a.dim):
        x = a.basis_element(k)
        w = vdot(list(u.coeffs), npol.matvec(list(x.coeffs)))
        z = vdot(list(v.coeffs), npol.matvec(list(x.coeffs)))
        cols.append([w * vc - z * uc for vc, uc in zip(v.coeffs, u.coeffs)])
    return Matrix.from_columns(cols)


def wedge_coords(a, m, basis=None):
    """Coordinates of an antisymmetric matrix in the (e_u ^ e_v) basis."""
    if basis is None:
        basis = [list(wedge_matrix(a, a.basis_element(u), a.basis_element(v)).flatten())
                 for u, v in wedge_pairs(a.dim)]
    (sol,) = express_in_basis(basis, [list(m.flatten())])
    return sol


def vec_wedge(u, v):
    out = []
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            c = u[i] * v[j] - u[j] * v[i]
            if c != 0:
                out.append(((i, j), c))
    return out


def psi_on_vectors(pm, u, v):
    w = vec_wedge(u, v)
    return pm.on_wedge(w) if w else None


# --- dimensions ------------------------------------------------------------

DIMS = {
    "R": (0, 0),
    "C": (2, 0),
    "H": (9, 3),
    "O": (28, 14),
    "Cs": (2, 0),
    "Hs": (9, 3),
    "Os": (28, 14),
}


def test_dimension_ladder():
    for name, (t_dim, d_dim) in DIMS.items():
        a = ALGEBRAS[name]
        assert triality_algebra(a).dim == t_dim, name
        assert derivations(a).dim == d_dim, name


def test_defining_identity_and_skewness_on_basis():
    for name in ("C", "H", "O", "Cs"):
        a = ALGEBRAS[name]
        g = a.norm_form()
        for t in triality_algebra(a).basis:
            assert t.satisfies_identity()
            for m in t.components():
                assert (m.transpose() * g + g * m).is_zero()


def test_inner_derivations_span_the_derivation_algebra():
    for name in ("C", "H", "O", "Hs", "Os"):
        a = ALGEBRAS[name]
        der = derivations(a)
        flats = []
        for i in range(1, a.dim):
            for j in range(i + 1, a.dim):
                d = inner_derivation(a, a.basis_element(i), a.basis_element(j))
                assert leibniz_holds(a, d)
                assert der.span_contains(d)
                flats.append(list(d.flatten()))
        got = rank(Matrix(flats)) if flats else 0
        assert got == der.dim, name


def test_derivation_and_imaginary_triples_are_members():
    for name in ("C", "H", "O", "Hs", "Os"):
        a = ALGEBRAS[name]
        t = triality_algebra(a)
        for k in range(1, a.dim):
            trip = imaginary_triple(a, a.basis_element(k))
            assert trip.satisfies_identity()
            assert t.span_contains(trip)
        d = inner_derivation(a, a.basis_element(1), a.basis_element(a.dim - 1))
        trip = derivation_triple(a, d)
        assert trip.satisfies_identity()
        assert t.span_contains(trip)


# --- outer action -----------------------------------------------------------

def test_outer_action_relations():
    t = triality_algebra(O)
    s, tm = s3_outer_action(O)
    for x in t.basis:
        assert (s(s(x)) - x).is_zero()
        assert (tm(tm(x)) - x).is_zero()
        assert (s(tm(s(x))) - tm(s(tm(x)))).is_zero()
        assert t.span_contains(s(x))
        assert t.span_contains(tm(x))
        # rho is the 3-cycle built from the two involutions
        assert (rho(x) - s(tm(x))).is_zero()
        assert t.span_contains(rho(x))
        assert (rho(rho(rho(x))) - x).is_zero()


def test_outer_action_consists_of_automorphisms():
    t = triality_algebra(O)
    s, tm = s3_outer_action(O)
    rng = random.Random(7)
    for _ in range(6):
        x, y = rng.sample(t.basis, 2)
        assert (s(x.bracket(y)) - s(x).bracket(s(y))).is_zero()
        assert (tm(x.bracket(y)) - tm(x).bracket(tm(y))).is_zero()


def test_outer_action_is_not_inner():
    # inner automorphisms conjugate each component separately, preserving
    # the trace of any power slotwise; the quartic trace tells slots apart
    p = psi_map(O, 1).on_basis(0, 1)
    quartics = [trace_power(m, 4) for m in p.components()]
    assert quartics == [32, 8, 8]
    s, tm = s3_outer_action(O)
    assert trace_power(s(p).t1, 4) == 8
    q = psi_map(O, 2).on_basis(0, 1)
    assert trace_power(q.t2, 4) == 32
    assert trace_power(tm(q).t2, 4) == 8


# --- Psi maps ---------------------------------------------------------------

def test_psi_lands_in_the_triality_algebra():
    for name in ("C", "H", "O"):
        a = ALGEBRAS[name]
        t = triality_algebra(a)
        for slot in (1, 2, 3):
            pm = psi_map(a, slot)
            for (u, v) in wedge_pairs(a.dim):
                trip = pm.on_basis(u, v)
                assert trip.satisfies_identity()
                assert t.span_contains(trip)


def test_psi_rejects_bad_slot():
    with pytest.raises(ValueError):
        psi_map(O, 4)


def test_summed_psi_is_surjective_with_expected_kernel():
    for name, kdim in (("C", 1), ("H", 9), ("O", 56), ("Os", 56)):
        a = ALGEBRAS[name]
        m = psi_total_matrix(a)
        ker = psi_total_kernel(a)
        assert len(ker) == kdim, name
        assert rank(m) == triality_algebra(a).dim, name


def test_summed_psi_kernel_on_the_plane():
    # single wedge per slot; the relation weights all three slots equally
    (k,) = psi_total_kernel(C)
    assert k[0] == k[1] == k[2] != 0


def test_summed_psi_kernel_family_on_quaternions():
    # kernel = {(L_x + R_y, L_y + R_z, L_z + R_x)} over imaginary x, y, z
    m = psi_total_matrix(H)
    basis = [list(wedge_matrix(H, H.basis_element(u), H.basis_element(v)).flatten())
             for u, v in wedge_pairs(4)]
    zero6 = [Q(0)] * 6
    members = []
    for k in (1, 2, 3):
        lz = H.left_mult_matrix(H.basis_element(k))
        rz = H.right_mult_matrix(H.basis_element(k))
        lw, rw = wedge_coords(H, lz, basis), wedge_coords(H, rz, basis)
        for triple in ((lw, zero6, rw), (rw, lw, zero6), (zero6, rw, lw)):
            vec = [x for part in triple for x in part]
            assert all(y == 0 for y in m.matvec(vec))
            members.append(vec)
    assert rank(Matrix(members)) == 9  # the family is all of the kernel


PARAM_DIRS = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def quaternion_family(a_, b_, c_):
    """(L_a + R_b, L_a - R_c, L_c + R_b) in bar-identity storage."""
    def lmul(v):
        out = zero_matrix(4)
        for k, x in enumerate(v):
            if x:
                out = out + H.left_mult_matrix(H.basis_element(k + 1)).scale(Q(x))
        return out

    def rmul(v):
        out = zero_matrix(4)
        for k, x in enumerate(v):
            if x:
                out = out + H.right_mult_matrix(H.basis_element(k + 1)).scale(Q(x))
        return out

    return from_product_form(H, lmul(a_) + rmul(b_), lmul(a_) - rmul(c_),
                             lmul(c_) + rmul(b_))


def test_quaternion_family_fills_the_triality_algebra():
    t = triality_algebra(H)
    coords = []
    for d in PARAM_DIRS:
        z = [0, 0, 0]
        for slot in range(3):
            args = [z, z, z]
            args[slot] = d
            trip = quaternion_family(*args)
            assert trip.satisfies_identity()
            coords.append(t.coords(trip))
    assert rank(Matrix(coords)) == 9


def test_psi_slot_values_on_quaternion_multiplications():
    # Psi_i applied to L_x and R_y, read off in family parameters (a, b, c):
    #   slot 1: L_x -> (0,-x,0)   R_y -> (-y,0,0)
    #   slot 2: L_x -> (x,0,0)    R_y -> (0,0,-y)
    #   slot 3: L_x -> (0,0,x)    R_y -> (0,y,0)
    basis = [list(wedge_matrix(H, H.basis_element(u), H.basis_element(v)).flatten())
             for u, v in wedge_pairs(4)]
    table = {
        (1, "L"): lambda x: ([0] * 3, [-v for v in x], [0] * 3),
        (1, "R"): lambda y: ([-v for v in y], [0] * 3, [0] * 3),
        (2, "L"): lambda x: (x, [0] * 3, [0] * 3),
        (2, "R"): lambda y: ([0] * 3, [0] * 3, [-v for v in y]),
        (3, "L"): lambda x: ([0] * 3, [0] * 3, x),
        (3, "R"): lambda y: ([0] * 3, y, [0] * 3),
    }
    for k, x in enumerate(PARAM_DIRS):
        lm = H.left_mult_matrix(H.basis_element(k + 1))
        rm = H.right_mult_matrix(H.basis_element(k + 1))
        for slot in (1, 2, 3):
            pm = psi_map(H, slot)
            for tag, m in (("L", lm), ("R", rm)):
                wc = [(p, cf) for p, cf in
                      zip(wedge_pairs(4), wedge_coords(H, m, basis)) if cf != 0]
                got = pm.on_wedge(wc)
                want = quaternion_family(*table[(slot, tag)](list(x)))
                assert (got - want).is_zero(), (slot, tag, k)


def test_duality_between_psi_and_projections():
    # <Psi_i(u^v), T> = c N(T_i u, v) with c = -(dim/2 + 2)
    rng = random.Random(23)
    for name in ("C", "H", "O", "Cs", "Hs"):
        a = ALGEBRAS[name]
        t = triality_algebra(a)
        c = -(Q(a.dim, 2) + 2)
        pairs = wedge_pairs(a.dim)
        tb = t.basis
        if a.dim == 8:
            pairs = rng.sample(pairs, 8)
            tb = rng.sample(tb, 6)
        for slot in (1, 2, 3):
            pm = psi_map(a, slot)
            for (u, v) in pairs:
                p = pm.on_basis(u, v)
                eu = [Q(1) if i == u else Q(0) for i in range(a.dim)]
                ev = [Q(1) if i == v else Q(0) for i in range(a.dim)]
                for bt in tb:
                    lhs = triple_pairing(p, bt)
                    tu = bt.components()[slot - 1].matvec(eu)
                    assert lhs == c * norm_pair(a, tu, ev), (name, slot, u, v)


def test_psi_equivariance():
    # [T, Psi_i(u^v)] = Psi_i(T_i u ^ v) + Psi_i(u ^ T_i v)
    rng = random.Random(11)
    for name in ("H", "O"):
        a = ALGEBRAS[name]
        t = triality_algebra(a)
        samples = [(rng.choice(t.basis), rng.choice(wedge_pairs(a.dim)), slot)
                   for slot in (1, 2, 3) for _ in range(3)]
        for bt, (u, v), slot in samples:
            pm = psi_map(a, slot)
            p = pm.on_basis(u, v)
            lhs = bt.bracket(p)
            ti = bt.components()[slot - 1]
            eu = [Q(1) if i == u else Q(0) for i in range(a.dim)]
            ev = [Q(1) if i == v else Q(0) for i in range(a.dim)]
            parts = [psi_on_vectors(pm, ti.matvec(eu), ev),
                     psi_on_vectors(pm, eu, ti.matvec(ev))]
            rhs = None
            for part in parts:
                if part is not None:
                    rhs = part if rhs is None else rhs + part
            if rhs is None:
                assert lhs.is_zero(), (name, slot, u, v)
            else:
                assert (lhs - rhs).is_zero(), (name, slot, u, v)


def test_bracket_of_psi_images_stays_inside():
    t = triality_algebra(O)
    pm = psi_map(O, 1)
    x, y = pm.on_basis(0, 1), pm.on_basis(2, 5)
    assert t.span_contains(x.bracket(y))


# --- projections ------------------------------------------------------------

def test_projection_ranks_and_kernels():
    expected = {
        ("O", 1): (28, 0), ("O", 2): (28, 0), ("O", 3): (28, 0),
        ("Os", 1): (28, 0),
        ("H", 1): (6, 3), ("H", 2): (6, 3), ("H", 3): (6, 3),
        ("C", 1): (1, 1),
    }
    for (name, slot), (r, k) in expected.items():
        a = ALGEBRAS[name]
        p = triality_project(a, slot)
        assert (p.rank, p.kernel_dim) == (r, k), (name, slot)
        trip = triality_algebra(a).basis[0]
        assert (p.apply(trip) - trip.components()[slot - 1]).is_zero()


def test_wedge_anchor_values_on_octonions():
    l1 = O.left_mult_matrix(O.basis_element(1))
    r1 = O.right_mult_matrix(O.basis_element(1))
    p = psi_map(O, 1).on_basis(0, 1)
    assert (p.t1 - (l1 + r1)).is_zero()
    assert (p.t2 - l1.scale(Q(-1))).is_zero()
    assert (p.t3 - r1.scale(Q(-1))).is_zero()
    # second slot of Psi_1(e2 ^ e3): the unpolarized wedge plus a quarter
    # of right multiplication by the commutator, doubled
    e2, e3 = O.basis_element(2), O.basis_element(3)
    comm = e2 * e3 - e3 * e2
    half_wedge = wedge_matrix(O, e2, e3).scale(Q(1, 2))  # unpolarized form
    want = (half_wedge + O.right_mult_matrix(comm).scale(Q(1, 4))).scale(Q(2))
    got = psi_map(O, 1).on_basis(2, 3).t2
    assert (got - want).is_zero()


# --- inclusions along the doubling -------------------------------------------

def test_inclusions_are_injective_lie_morphisms():
    for base, big in ((C, H), (H, O)):
        emb = inclusion_embedding(base, big)
        tb, td = triality_algebra(base), triality_algebra(big)
        assert rank(emb.matrix) == tb.dim
        imgs = [emb.apply(x) for x in tb.basis]
        for im in imgs:
            assert im.satisfies_identity()
            assert td.span_contains(im)
        for i in range(tb.dim):
            for j in range(i + 1, tb.dim):
                lhs = emb.apply(tb.basis[i].bracket(tb.basis[j]))
                rhs = imgs[i].bracket(imgs[j])
                assert (lhs - rhs).is_zero()


def test_inclusion_requires_a_doubling():
    with pytest.raises(ValueError):
        inclusion_embedding(C, O)


def test_embedded_image_preserves_the_halving_block():
    for base, big in ((C, H), (H, O)):
        emb = inclusion_embedding(base, big)
        n, h = big.dim, base.dim
        for x in triality_algebra(base).basis:
            for m in emb.apply(x).components():
                for r in range(h, n):
                    assert all(v == 0 for v in m.data[r][:h])


def test_block_stabilizer_decomposition():
    # triples whose components preserve the halving block: the embedded
    # image plus diagonal triples of derivations vanishing on the block
    for base, big, stab_dim, restr_rank, van_dim in ((C, H, 3, 2, 1),
                                                     (H, O, 12, 9, 3)):
        n, h = big.dim, base.dim
        t = triality_algebra(big)
        assert preserving_subspace_dim(big, h) == stab_dim

        rows = []
        for r in range(h, n):
            for c in range(h):
                for comp in range(3):
                    rows.append([x.components()[comp].data[r][c] for x in t.basis])
        stab = solve_kernel(Matrix(rows))
        assert len(stab) == stab_dim

        # restriction to the block has the base triality algebra's dimension
        restr = []
        for v in stab:
            trip = t.from_coords(v)
            restr.append([trip.components()[comp].data[r][c]
                          for comp in range(3) for r in range(h) for c in range(h)])
        assert rank(Matrix(restr)) == restr_rank
        assert restr_rank == triality_algebra(base).dim

        # derivations of the big algebra vanishing on the block
        der = derivations(big)
        rows = []
        for c in range(h):
            for r in range(n):
                rows.append([d.data[r][c] for d in der.basis])
        van = solve_kernel(Matrix(rows))
        assert len(van) == van_dim

        emb = inclusion_embedding(base, big)
        gens = [t.coords(emb.apply(x)) for x in triality_algebra(base).basis]
        for v in van:
            gens.append(t.coords(derivation_triple(big, der.from_coords(v))))
        assert rank(Matrix(gens)) == stab_dim
        assert rank(Matrix(gens + stab)) == stab_dim


def test_quaternion_embedding_in_block_form():
    # the embedding doubles each L/R operator into an explicit block shape
    emb = inclusion_embedding(H, O)

    def blockdiag(top, bot):
        rows = [list(top.data[r]) + [Q(0)] * 4 for r in range(4)]
        rows += [[Q(0)] * 4 + list(bot.data[r]) for r in range(4)]
        return Matrix(rows)

    zero = zero_matrix(4)
    for d in (1, 2, 3):
        z = H.basis_element(d)
        lz, rz = H.left_mult_matrix(z), H.right_mult_matrix(z)
        for la, rb, lc, rc, lb in (
            (lz, zero, zero, zero, zero),   # a direction
            (zero, rz, zero, zero, lz),     # b direction
            (zero, zero, lz, rz, zero),     # c direction
        ):
            dom = from_product_form(H, la + rb, la - rc, lc + rb)
            want = TrialityTriple(
                O,
                O.conj_matrix() * blockdiag(la + rb, lc) * O.conj_matrix(),
                blockdiag(la - rc, -lb),
                blockdiag(lc + rb, la))
            assert (emb.apply(dom) - want).is_zero(), d


def test_plane_embedding_scaled_parameter_swap():
    # rotation generators of t(C) land on the closed-form quaternion
    # triples with parameters swapped and scaled by -1/3
    emb = inclusion_embedding(C, H)
    lc = C.left_mult_matrix(C.basis_element(1))
    iq = H.basis_element(1)

    def rot(x):
        return lc.scale(Q(-x))

    def target(b, c):
        lm, rm = H.left_mult_matrix, H.right_mult_matrix
        return from_product_form(
            H,
            lm(Q(b + 2 * c) * iq) + rm(Q(2 * b + c) * iq),
            lm(Q(b + 2 * c) * iq) + rm(Q(c - b) * iq),
            lm(Q(b - c) * iq) + rm(Q(2 * b + c) * iq))

    for b, c in ((1, 0), (0, 1), (1, 1), (2, -1), (1, -3)):
        dom = from_product_form(C, rot(b + c), rot(b), rot(c))
        assert (emb.apply(dom) - Q(-1, 3) * target(c, b)).is_zero(), (b, c)


def test_composite_plane_to_octonion_image():
    # image of t(C) inside t(O) through both embeddings, as a span
    e1 = inclusion_embedding(C, H)
    e2 = inclusion_embedding(H, O)
    tc, to = triality_algebra(C), triality_algebra(O)
    imgs = [e2.apply(e1.apply(x)) for x in tc.basis]
    l1 = O.left_mult_matrix(O.basis_element(1))
    r1 = O.right_mult_matrix(O.basis_element(1))
    cands = [-1 * imaginary_triple(O, O.basis_element(1)),
             TrialityTriple(O, r1, -(l1 + r1), l1)]
    for cd in cands:
        assert to.span_contains(cd)
    rows = [list(x.flatten()) for x in imgs]
    assert rank(Matrix(rows)) == 2
    assert rank(Matrix(rows + [list(c.flatten()) for c in cands])) == 2
