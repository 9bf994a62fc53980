import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from weyl_spectra.linalg import (
    InnerProduct,
    JordanInvariants,
    Signature,
    adjoint,
    causal_type,
    inner,
    is_self_adjoint,
    jordan_equal,
    jordan_invariants,
    random_isometry,
    rank_tol,
    signature_of,
)

LORENTZ = InnerProduct.diagonal([-1.0, 1.0, 1.0])


def test_signature_needs_three_dimensions():
    with pytest.raises(ValueError):
        Signature(1, 1)
    assert Signature(1, 3).m == 4


def test_from_gram_checks_declared_signature():
    with pytest.raises(ValueError):
        InnerProduct.from_gram(np.eye(3), Signature(1, 2))
    with pytest.raises(ValueError):
        InnerProduct.from_gram(np.diag([1.0, 1.0, 0.0]))
    with pytest.raises(ValueError):
        InnerProduct.from_gram(np.array([[1.0, 2.0, 0], [0, 1, 0], [0, 0, 1]]))


def test_signature_counts_negative_directions():
    assert signature_of(np.diag([-1.0, 1.0, 1.0, -2.0])) == (2, 2)
    assert InnerProduct.standard(2, 3).signature == Signature(2, 3)


def test_inner_examples():
    e1 = np.array([1.0, 0, 0])
    assert inner(InnerProduct.euclidean(3), e1, e1) == 1
    assert inner(LORENTZ, e1, e1) == -1
    n = np.array([1.0, 1.0, 0])
    assert inner(LORENTZ, n, n) == 0


def test_inner_rejects_wrong_length():
    with pytest.raises(ValueError):
        inner(LORENTZ, np.ones(2), np.ones(3))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_inner_symmetric_and_gram_inverse(seed):
    r = np.random.default_rng(seed)
    S = r.standard_normal((4, 4))
    g = InnerProduct.from_gram(S + S.T + np.diag([5.0, -5.0, 5.0, -5.0]))
    x, y = r.standard_normal((2, 4))
    assert inner(g, x, y) == pytest.approx(inner(g, y, x), rel=1e-12, abs=1e-12)
    assert np.abs(g.gram @ g.gram_inv - np.eye(4)).max() < 1e-10


def test_causal_type_examples():
    assert causal_type(LORENTZ, [0, 1.0, 0]) == "spacelike"
    assert causal_type(LORENTZ, [1.0, 0, 0]) == "timelike"
    assert causal_type(LORENTZ, [1.0, 1.0, 0]) == "null"
    with pytest.raises(ValueError):
        causal_type(LORENTZ, [0.0, 0.0, 0.0])


def test_adjoint_and_self_adjointness():
    g = InnerProduct.standard(1, 2)
    T = np.arange(9.0).reshape(3, 3)
    x, y = np.array([1.0, 2, 3]), np.array([-1.0, 0.5, 2])
    assert inner(g, T @ x, y) == pytest.approx(inner(g, x, adjoint(g, T) @ y))
    assert is_self_adjoint(g, g.gram_inv @ (T + T.T))
    assert not is_self_adjoint(g, T)


def test_random_isometry_preserves_metric(rng):
    g = InnerProduct.standard(2, 3)
    L = random_isometry(g, rng)
    assert np.abs(L.T @ g.gram @ L - g.gram).max() < 1e-12


def test_rank_examples(rng):
    assert rank_tol(np.eye(4), 1e-9) == 4
    assert rank_tol(np.zeros((4, 4))) == 0
    u, w, v, z = rng.standard_normal((4, 5))
    assert rank_tol(np.outer(u, v) + np.outer(w, z)) == 2


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (3, 4), elements=st.floats(-10, 10)))
def test_rank_ignores_zero_padding(M):
    padded = np.zeros((5, 6))
    padded[:3, :4] = M
    assert rank_tol(padded) == rank_tol(M)


def test_rank_with_explicit_scale():
    M = np.diag([1e-12, 0.0, 0.0])
    assert rank_tol(M) == 1
    assert rank_tol(M, scale=1.0) == 0


def test_jordan_nilpotent_block():
    N = np.diag([1.0, 1.0], 1)
    fp = jordan_invariants(N)
    assert fp.clusters == ((0j, 3),)
    assert fp.overall_rank_chain == (2, 1, 0)
    assert fp.is_nilpotent
    assert fp.block_sizes(0) == [3]


def test_jordan_diagonal_clusters():
    fp = jordan_invariants(np.diag([2.0, 2.0, 5.0]))
    assert [(round(lam.real, 12), n) for lam, n in fp.clusters] == [(2.0, 2), (5.0, 1)]
    assert fp.rank_chains[0] == (1, 1, 1)
    assert fp.block_sizes(0) == [1, 1]


def test_jordan_equal_examples():
    A = np.zeros((4, 4))
    A[0, 2] = A[1, 3] = 1.0  # square zero, rank 2
    B = np.zeros((4, 4))
    B[0, 1] = B[1, 2] = 1.0  # rank 2 but cube zero, square rank 1
    fa, fb = jordan_invariants(A), jordan_invariants(B)
    assert fa.overall_rank_chain[:2] == (2, 0)
    assert fb.overall_rank_chain[:3] == (2, 1, 0)
    assert jordan_equal(fa, fa)
    assert not jordan_equal(fa, fb)
    tol = 1e-7
    one = jordan_invariants(np.eye(3), tol)
    near = jordan_invariants((1.0 + tol / 10) * np.eye(3), tol)
    assert jordan_equal(one, near, tol)


def test_jordan_detects_defective_vs_diagonal():
    J = np.array([[3.0, 1.0], [0.0, 3.0]])
    D = np.diag([3.0, 3.0])
    J3 = np.zeros((3, 3))
    J3[:2, :2] = J
    D3 = np.zeros((3, 3))
    D3[:2, :2] = D
    assert not jordan_equal(jordan_invariants(J3), jordan_invariants(D3))


def test_jordan_complex_pair():
    R = np.array([[0.0, -2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    fp = jordan_invariants(R)
    assert sorted(n for _, n in fp.clusters) == [1, 1, 1]
    assert sorted(round(lam.imag, 10) for lam, _ in fp.clusters) == [-2.0, 0.0, 2.0]


def test_jordan_rejects_non_finite():
    with pytest.raises(np.linalg.LinAlgError):
        jordan_invariants(np.array([[np.nan, 0, 0], [0, 1, 0], [0, 0, 1]]))


def test_jordan_round_trips_through_dict():
    fp = jordan_invariants(np.diag([1.0, 1.0], 1) + np.diag([0.0, 0.0, 4.0]))
    assert JordanInvariants.from_dict(fp.to_dict()) == fp


def _structured(seed):
    """Random operator with a prescribed mix of Jordan blocks."""
    r = np.random.default_rng(seed)
    # eigenvalues kept apart from each other and from zero so powers stay well scaled
    lam = r.choice([-1.0, 1.0], 2) * r.uniform(0.5, 2.0, 2)
    lam[1] = -lam[0] * r.uniform(0.5, 1.5)
    T = np.zeros((5, 5))
    T[:3, :3] = lam[0] * np.eye(3) + np.diag([1.0, 1.0], 1)
    T[3:, 3:] = lam[1] * np.eye(2)
    return T, r


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_jordan_similarity_invariant(seed):
    T, r = _structured(seed)
    S = np.eye(5) + 0.3 * r.standard_normal((5, 5))
    cond = np.linalg.cond(S)
    # powers of badly conditioned similarities lose the rank information in round-off
    assume(cond < 10)
    tol = 1e-7 * cond**2
    a = jordan_invariants(T, tol)
    b = jordan_invariants(S @ T @ np.linalg.inv(S), tol)
    assert a.overall_rank_chain == b.overall_rank_chain
    assert jordan_equal(a, b, tol)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 10.0), st.booleans())
def test_jordan_scaling(seed, c, flip):
    T, _ = _structured(seed)
    c = -c if flip else c
    a = jordan_invariants(T)
    b = jordan_invariants(c * T)
    assert a.overall_rank_chain == b.overall_rank_chain
    # clusters are listed in a canonical order, so match them by value
    for (lam, n), chain in zip(a.clusters, a.rank_chains):
        assert any(
            abs(c * lam - mu) < 1e-6 * (1 + abs(mu)) and n == k and chain == ch
            for (mu, k), ch in zip(b.clusters, b.rank_chains)
        )
