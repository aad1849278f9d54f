import numpy as np
import pytest

from groupstates import (
    GroupFunction,
    block_decompose,
    block_face_chain,
    central_state_function,
    character_table,
    complementary_split_face,
    convex_combine,
    delta_e,
    descriptor_from_projection,
    face_membership,
    maximal_chain_length,
    minimal_central_projections,
    pure_state_function,
    random_p1,
    split_faces,
    state_decomposition,
    symmetric_group,
    to_state,
)
from groupstates.errors import GroupMismatch, NotCentral, SizeLimitExceeded
from groupstates.faces import FaceDescriptor


def _face_supported_state(decomp, members, rng):
    """A random state supported exactly on the given blocks."""
    dims = decomp.block_dims
    fns = []
    for pi in members:
        v = rng.normal(size=dims[pi]) + 1j * rng.normal(size=dims[pi])
        fns.append(pure_state_function(decomp, pi, v))
    w = rng.dirichlet(np.ones(len(fns)))
    return to_state(convex_combine(w, fns))


def test_face_of_unit_contains_everything(q8):
    table = character_table(q8)
    faces = split_faces(q8, table)
    full = faces[-1]
    assert full.irreps == tuple(range(5))
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert face_membership(full, to_state(random_p1(q8, rng)))


def test_face_of_zero_is_empty(q8):
    table = character_table(q8)
    empty = split_faces(q8, table)[0]
    assert empty.irreps == ()
    rng = np.random.default_rng(1)
    for _ in range(20):
        assert not face_membership(empty, to_state(random_p1(q8, rng)))


def test_z2_character_memberships(z2):
    table = character_table(z2)
    projs = minimal_central_projections(z2, table)
    plus = [p for p in projs if p.coeffs[1].real > 0][0]
    minus = [p for p in projs if p.coeffs[1].real < 0][0]
    face_plus = descriptor_from_projection(z2, plus.coeffs, plus.matrix)
    face_minus = descriptor_from_projection(z2, minus.coeffs, minus.matrix)
    chi = to_state(GroupFunction(z2, np.array([1.0, 1.0])))
    assert face_membership(face_plus, chi)
    assert not face_membership(face_minus, chi)


def test_face_membership_group_mismatch(z2, z3):
    table = character_table(z2)
    face = split_faces(z2, table)[-1]
    with pytest.raises(GroupMismatch):
        face_membership(face, to_state(delta_e(z3)))


def test_split_faces_counts(z2, q8):
    assert len(split_faces(z2, character_table(z2))) == 4
    faces = split_faces(q8, character_table(q8))
    assert len(faces) == 32
    minimal = [f for f in faces if f.irreps is not None and len(f.irreps) == 1]
    assert len(minimal) == 5
    for f in faces:
        assert f.is_central and f.is_split


def test_split_faces_size_limit():
    g = symmetric_group(2)
    table = character_table(g)

    class FakeTable:
        num_irreps = 25

    with pytest.raises(SizeLimitExceeded):
        split_faces(g, FakeTable())


def test_order_correspondence(q8):
    table = character_table(q8)
    decomp = block_decompose(q8, table, seed=0)
    faces = split_faces(q8, table)
    by_set = {f.irreps: f for f in faces}
    rng = np.random.default_rng(2)
    for members in [(0,), (1, 4), (0, 2, 3)]:
        state = _face_supported_state(decomp, members, rng)
        for other, face in by_set.items():
            if set(members) <= set(other):
                assert face_membership(face, state)


def test_disjointness_correspondence(q8):
    table = character_table(q8)
    decomp = block_decompose(q8, table, seed=0)
    faces = split_faces(q8, table)
    by_set = {f.irreps: f for f in faces}
    rng = np.random.default_rng(3)
    state = _face_supported_state(decomp, (0, 4), rng)
    for other, face in by_set.items():
        if other and not (set((0, 4)) & set(other)):
            assert not face_membership(face, state)
            # the pairing actually vanishes on disjoint faces
            assert abs(state.expectation(face.coeffs)) < 1e-9


def test_complement_involution(q8):
    table = character_table(q8)
    faces = split_faces(q8, table)
    face = faces[5]
    comp = complementary_split_face(face)
    assert np.abs(face.matrix + comp.matrix - np.eye(8)).max() < 1e-10
    again = complementary_split_face(comp)
    assert np.abs(again.matrix - face.matrix).max() < 1e-10
    assert np.abs(again.coeffs - face.coeffs).max() < 1e-10


def test_complement_of_full_is_empty(q8):
    table = character_table(q8)
    faces = split_faces(q8, table)
    comp = complementary_split_face(faces[-1])
    assert np.abs(comp.matrix).max() < 1e-12


def test_complement_of_two_dim_block_q8(q8):
    table = character_table(q8)
    faces = split_faces(q8, table)
    two_dim = table.dims.index(2)
    block_face = [f for f in faces if f.irreps == (two_dim,)][0]
    comp = complementary_split_face(block_face)
    abelian = [f for f in faces if f.irreps == (0, 1, 2, 3)][0]
    assert np.abs(comp.matrix - abelian.matrix).max() < 1e-9


def test_complement_requires_central(q8):
    table = character_table(q8)
    decomp = block_decompose(q8, table, seed=0)
    two_dim = table.dims.index(2)
    # a minimal (non-central) projection inside the 2-dim block
    from groupstates.groups import algebra_coefficients

    mat = decomp.unit_matrix(two_dim, 0, 0)
    face = FaceDescriptor(
        q8, algebra_coefficients(q8, mat), mat, is_central=False, is_split=False
    )
    with pytest.raises(NotCentral):
        complementary_split_face(face)


def test_chain_lengths(z4, s3, d4, q8, s4):
    for g in (z4, s3, d4, q8, s4):
        table = character_table(g)
        decomp = block_decompose(g, table, seed=0)
        for pi, d in enumerate(table.dims):
            assert maximal_chain_length(g, table, pi, decomp=decomp) == d


def test_chain_structure_d4(d4):
    table = character_table(d4)
    decomp = block_decompose(d4, table, seed=0)
    pi = table.dims.index(2)
    chain = block_face_chain(decomp, pi)
    assert chain.length == 2
    assert chain.ranks == (2, 4)  # regular-representation ranks grow by d
    q1, q2 = chain.projections
    assert np.abs(q1 @ q2 - q1).max() < 1e-9


def test_state_decomposition_supported_case(q8):
    table = character_table(q8)
    decomp = block_decompose(q8, table, seed=0)
    faces = split_faces(q8, table)
    rng = np.random.default_rng(4)
    state = _face_supported_state(decomp, (0, 1), rng)
    face = [f for f in faces if f.irreps == (0, 1)][0]
    t, w1, w2 = state_decomposition(state, face)
    assert t == 1.0 and w2 is None
    assert np.abs(w1.coefficients - state.coefficients).max() < 1e-12


def test_state_decomposition_tracial_z2(z2):
    table = character_table(z2)
    projs = minimal_central_projections(z2, table)
    plus = [p for p in projs if p.coeffs[1].real > 0][0]
    face = descriptor_from_projection(z2, plus.coeffs, plus.matrix)
    t, w1, w2 = state_decomposition(to_state(delta_e(z2)), face)
    assert abs(t - 0.5) < 1e-12
    assert np.abs(w1.coefficients - np.array([1.0, 1.0])).max() < 1e-10
    assert np.abs(w2.coefficients - np.array([1.0, -1.0])).max() < 1e-10


def test_state_decomposition_reconstruction(q8):
    table = character_table(q8)
    faces = split_faces(q8, table)
    rng = np.random.default_rng(5)
    for _ in range(50):
        state = to_state(random_p1(q8, rng))
        face = faces[int(rng.integers(1, 31))]
        t, w1, w2 = state_decomposition(state, face)
        if w1 is None or w2 is None:
            continue
        recon = t * w1.coefficients + (1 - t) * w2.coefficients
        assert np.abs(recon - state.coefficients).max() < 1e-10
        assert face_membership(face, w1)
        assert face_membership(complementary_split_face(face), w2)


def test_state_decomposition_requires_central(q8):
    table = character_table(q8)
    decomp = block_decompose(q8, table, seed=0)
    two_dim = table.dims.index(2)
    from groupstates.groups import algebra_coefficients

    mat = decomp.unit_matrix(two_dim, 0, 0)
    face = FaceDescriptor(
        q8, algebra_coefficients(q8, mat), mat, is_central=False, is_split=False
    )
    rng = np.random.default_rng(6)
    with pytest.raises(NotCentral):
        state_decomposition(to_state(random_p1(q8, rng)), face)


def test_complement_is_unique_free_partner(s3):
    """Among all central projections, only 1 - p pairs with p so that every
    state splits across the two faces: for any other candidate q the masses
    omega(p) + omega(q) miss 1 on a full-support state."""
    table = character_table(s3)
    faces = split_faces(s3, table)
    rng = np.random.default_rng(8)
    # a state with strictly positive weight on every block
    state = to_state(
        convex_combine(
            [1 / 3] * 3,
            [central_state_function(table, pi) for pi in range(3)],
        )
    )
    p_face = [f for f in faces if f.irreps == (0, 2)][0]
    partners = []
    for cand in faces:
        # a free partner must be disjoint from p and account for the
        # remaining mass of every state; the full-support state kills all
        # candidates that miss a block
        disjoint = np.abs(p_face.matrix @ cand.matrix).max() < 1e-9
        mass = (
            state.expectation(p_face.coeffs) + state.expectation(cand.coeffs)
        ).real
        if disjoint and abs(mass - 1.0) < 1e-9:
            partners.append(cand.irreps)
    assert partners == [(1,)]


def test_nonisomorphic_groups_have_different_face_data(s3):
    """The combinatorial face data (minimal split face count, chain lengths)
    separates groups with different invariants."""
    z6 = __import__("groupstates").cyclic_group(6)
    data = {}
    for g in (s3, z6):
        table = character_table(g)
        decomp = block_decompose(g, table, seed=0)
        lengths = sorted(
            maximal_chain_length(g, table, pi, decomp=decomp)
            for pi in range(table.num_irreps)
        )
        data[g.name] = (table.num_irreps, tuple(lengths))
    assert data["S3"] != data["Z6"]
    assert data["S3"] == (3, (1, 1, 2))
    assert data["Z6"] == (6, (1, 1, 1, 1, 1, 1))


def test_faces_are_convex(q8):
    table = character_table(q8)
    decomp = block_decompose(q8, table, seed=0)
    faces = split_faces(q8, table)
    face = [f for f in faces if f.irreps == (2, 4)][0]
    rng = np.random.default_rng(7)
    s1 = _face_supported_state(decomp, (2, 4), rng)
    s2 = _face_supported_state(decomp, (2, 4), rng)
    mix = to_state(
        convex_combine([0.3, 0.7], [GroupFunction(q8, s1.coefficients), GroupFunction(q8, s2.coefficients)])
    )
    assert face_membership(face, mix)
