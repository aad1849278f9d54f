import numpy as np
import pytest

from groupstates import (
    GroupFunction,
    a_norm,
    block_decompose,
    central_state_function,
    character_table,
    constant_one,
    convex_combine,
    cyclic_group,
    delta_e,
    from_state,
    gns,
    gram_matrix,
    is_extreme,
    is_positive_definite,
    pure_state_function,
    random_hermitian_symmetric,
    random_p1,
    to_state,
    vector_state,
)
from groupstates.errors import (
    BadWeights,
    GroupMismatch,
    NotHermitianSymmetric,
    NotNormalized,
    NotPositiveDefinite,
)
from groupstates.linalg import trace_norm


def test_gram_constant_one_z2(z2):
    fn = constant_one(z2)
    assert np.array_equal(gram_matrix(fn), np.ones((2, 2)))


def test_gram_delta_is_identity(q8):
    assert np.array_equal(gram_matrix(delta_e(q8)), np.eye(8))


def test_gram_character_z3_rank_one(z3):
    w = np.exp(2j * np.pi / 3)
    fn = GroupFunction(z3, np.array([1.0, w, w**2]))
    g = gram_matrix(fn)
    assert np.linalg.matrix_rank(g, tol=1e-10) == 1
    assert is_positive_definite(fn).is_psd


def test_delta_positive_definite(s3):
    verdict = is_positive_definite(delta_e(s3))
    assert verdict.is_psd


def test_z2_negative_witness(z2):
    fn = GroupFunction(z2, np.array([1.0, -1.5]))
    verdict = is_positive_definite(fn)
    assert not verdict.is_psd
    assert abs(verdict.witness - (-0.5)) < 1e-12


def test_not_hermitian_symmetric_raises(z3):
    fn = GroupFunction(z3, np.array([1.0, 1j, 1j]))
    with pytest.raises(NotHermitianSymmetric):
        is_positive_definite(fn)


def test_bochner_agreement_sample(z4):
    rng = np.random.default_rng(23)
    for n in (3, 8, 13):
        g = cyclic_group(n)
        for _ in range(100):
            fn = random_hermitian_symmetric(g, rng)
            verdict = is_positive_definite(fn)
            oracle_min = float(np.fft.fft(fn.values).real.min())
            if verdict.undecided or abs(oracle_min) <= 10 * verdict.cutoff:
                continue
            assert verdict.is_psd == (oracle_min >= -verdict.cutoff)


def test_to_state_constant_one(z4):
    st = to_state(constant_one(z4))
    assert np.linalg.matrix_rank(st.gram, tol=1e-10) == 1
    assert abs(np.trace(st.gram) / 4 - 1.0) < 1e-12


def test_to_state_tracial(q8):
    st = to_state(delta_e(q8))
    assert np.array_equal(st.gram, np.eye(8))
    assert from_state(st).values[q8.identity] == 1.0


def test_to_state_midpoint_z2(z2):
    fn = GroupFunction(z2, np.array([1.0, 0.0]))
    st = to_state(fn)
    assert np.array_equal(st.gram, np.eye(2))


def test_state_pairing_identity(q8):
    rng = np.random.default_rng(2)
    fn = random_p1(q8, rng)
    st = to_state(fn)
    # omega(lambda_s^*) = phi(s): expectation of the adjoint basis element
    for s in q8.elements():
        coeffs = np.zeros(8, dtype=complex)
        coeffs[q8.inv(s)] = 1.0
        assert abs(st.expectation(coeffs) - fn(s)) < 1e-12


def test_round_trip_random_states(q8):
    rng = np.random.default_rng(3)
    for _ in range(100):
        fn = random_p1(q8, rng)
        back = from_state(to_state(fn))
        assert np.abs(back.values - fn.values).max() < 1e-10


def test_to_state_affine(d4):
    rng = np.random.default_rng(4)
    for _ in range(50):
        f1, f2 = random_p1(d4, rng), random_p1(d4, rng)
        t = float(rng.uniform())
        mixed = convex_combine([t, 1 - t], [f1, f2])
        lhs = to_state(mixed).gram
        rhs = t * to_state(f1).gram + (1 - t) * to_state(f2).gram
        assert np.abs(lhs - rhs).max() < 1e-10


def test_to_state_rejects_unnormalized(z2):
    with pytest.raises(NotNormalized):
        to_state(GroupFunction(z2, np.array([0.5, 0.0])))


def test_to_state_rejects_indefinite(z2):
    with pytest.raises(NotPositiveDefinite):
        to_state(GroupFunction(z2, np.array([1.0, -1.5])))


def test_a_norm_is_one_on_p1(s3, q8):
    rng = np.random.default_rng(5)
    for g in (s3, q8):
        for _ in range(20):
            assert abs(a_norm(random_p1(g, rng)) - 1.0) < 1e-10


def test_a_norm_character_difference_z2(z2):
    # chi_+ - chi_- = (0, 2): density 2*lambda_g has eigenvalues +-2
    fn = GroupFunction(z2, np.array([0.0, 2.0]))
    assert abs(a_norm(fn) - 2.0) < 1e-12


def test_a_norm_homogeneity(d4):
    rng = np.random.default_rng(6)
    fn = random_p1(d4, rng)
    doubled = GroupFunction(d4, 2.0 * fn.values)
    assert abs(a_norm(doubled) - 2.0) < 1e-10


def test_a_norm_subadditive(d4):
    rng = np.random.default_rng(7)
    for _ in range(25):
        f = random_hermitian_symmetric(d4, rng)
        g = random_hermitian_symmetric(d4, rng)
        total = GroupFunction(d4, f.values + g.values)
        assert a_norm(total) <= a_norm(f) + a_norm(g) + 1e-9


def test_a_norm_matches_state_trace_distance(q8):
    rng = np.random.default_rng(8)
    for _ in range(20):
        f1, f2 = random_p1(q8, rng), random_p1(q8, rng)
        diff = GroupFunction(q8, f1.values - f2.values)
        direct = a_norm(diff)
        via_states = trace_norm(to_state(f1).gram - to_state(f2).gram) / q8.order
        assert abs(direct - via_states) < 1e-9


def test_convex_combine_single(z4):
    fn = constant_one(z4)
    assert np.array_equal(convex_combine([1.0], [fn]).values, fn.values)


def test_convex_combine_characters_z2(z2):
    chi_plus = GroupFunction(z2, np.array([1.0, 1.0]))
    chi_minus = GroupFunction(z2, np.array([1.0, -1.0]))
    mid = convex_combine([0.5, 0.5], [chi_plus, chi_minus])
    assert np.array_equal(mid.values, delta_e(z2).values)


def test_convex_combine_stays_positive_definite(d4):
    rng = np.random.default_rng(9)
    for _ in range(100):
        fns = [random_p1(d4, rng) for _ in range(3)]
        w = rng.dirichlet(np.ones(3))
        assert is_positive_definite(convex_combine(w, fns)).is_psd


def test_convex_combine_bad_weights(z2):
    fn = constant_one(z2)
    with pytest.raises(BadWeights):
        convex_combine([0.7, 0.7], [fn, fn])
    with pytest.raises(BadWeights):
        convex_combine([-0.5, 1.5], [fn, fn])


def test_convex_combine_group_mismatch(z2, z3):
    with pytest.raises(GroupMismatch):
        convex_combine([0.5, 0.5], [constant_one(z2), constant_one(z3)])


def test_gns_character_z3(z3):
    w = np.exp(2j * np.pi / 3)
    fn = GroupFunction(z3, np.array([1.0, w, w**2]))
    rep = gns(fn)
    assert rep.dim == 1
    for s in z3.elements():
        assert abs(rep.rep[s][0, 0] - fn(s)) < 1e-10


def test_gns_of_trace_is_regular(q8):
    rep = gns(delta_e(q8))
    assert rep.dim == 8
    # same character as the regular representation
    for s in q8.elements():
        expected = 8.0 if s == q8.identity else 0.0
        assert abs(np.trace(rep.rep[s]) - expected) < 1e-9


def test_gns_q8_half_character_dim_four(q8):
    table = character_table(q8)
    two_dim = table.dims.index(2)
    fn = GroupFunction(q8, table.char_values(two_dim) / 2.0)
    assert gns(fn).dim == 4


def test_gns_invariants_random(d4):
    rng = np.random.default_rng(10)
    fn = random_p1(d4, rng)
    rep = gns(fn)
    for s in d4.elements():
        for t in d4.elements():
            assert (
                np.abs(rep.rep[s] @ rep.rep[t] - rep.rep[d4.mul(s, t)]).max() < 1e-9
            )
    assert np.abs(rep.rep[d4.identity] - np.eye(rep.dim)).max() < 1e-10
    for s in d4.elements():
        assert abs(rep.matrix_coefficient(s) - fn(s)) < 1e-10


def test_extreme_examples(z2, q8):
    assert is_extreme(constant_one(q8))
    assert not is_extreme(delta_e(z2))
    # linear characters are extreme
    table = character_table(q8)
    for pi in range(4):
        assert is_extreme(GroupFunction(q8, table.char_values(pi)))


def test_extreme_pure_block_states(s3, d4, q8):
    rng = np.random.default_rng(11)
    for g in (s3, d4, q8):
        table = character_table(g)
        decomp = block_decompose(g, table, seed=1)
        for pi, d in enumerate(table.dims):
            v = rng.normal(size=d) + 1j * rng.normal(size=d)
            assert is_extreme(pure_state_function(decomp, pi, v))


def test_normalized_higher_character_is_a_proper_mixture(s3):
    """The d >= 2 normalized character is the average of d distinct pure
    states, hence not extreme; its GNS space has dimension d^2."""
    table = character_table(s3)
    pi = table.dims.index(2)
    decomp = block_decompose(s3, table, seed=2)
    p1 = pure_state_function(decomp, pi, np.array([1.0, 0.0]))
    p2 = pure_state_function(decomp, pi, np.array([0.0, 1.0]))
    assert np.abs(p1.values - p2.values).max() > 0.1  # genuinely distinct
    mid = convex_combine([0.5, 0.5], [p1, p2])
    central = central_state_function(table, pi)
    assert np.abs(mid.values - central.values).max() < 1e-9
    assert is_extreme(p1) and is_extreme(p2)
    assert not is_extreme(central)
    assert gns(central).dim == 4


def test_extremality_closed_under_inner_automorphisms(d4):
    rng = np.random.default_rng(12)
    table = character_table(d4)
    decomp = block_decompose(d4, table, seed=3)
    samples = [
        pure_state_function(decomp, table.dims.index(2), rng.normal(size=2)),
        central_state_function(table, 0),
        random_p1(d4, rng),
    ]
    for fn in samples:
        verdict = is_extreme(fn)
        for g in d4.elements():
            twisted = GroupFunction(
                d4,
                np.array(
                    [fn(d4.mul(d4.mul(g, s), d4.inv(g))) for s in d4.elements()]
                ),
            )
            assert is_extreme(twisted) == verdict


def test_vector_state_is_p1(s4):
    rng = np.random.default_rng(13)
    xi = rng.normal(size=24) + 1j * rng.normal(size=24)
    fn = vector_state(s4, xi)
    assert abs(fn.values[s4.identity] - 1.0) < 1e-12
    assert is_positive_definite(fn).is_psd
