import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyl_spectra.curvature import (
    CurvatureTensor,
    OrientedPlane,
    bivector_operator,
    build_a_phi,
    build_constant_curvature,
    build_eq3c,
    jacobi,
    random_curvature,
    random_self_adjoint,
    rescale_conformal,
    ricci,
    scalar_curv,
    skew_operator,
    symmetrize,
    validate,
    weyl_project,
)
from weyl_spectra.linalg import InnerProduct, is_self_adjoint, is_skew_adjoint, rank_tol

E3 = InnerProduct.euclidean(3)
E4 = InnerProduct.euclidean(4)
LORENTZ = InnerProduct.diagonal([-1.0, 1.0, 1.0])


def _random_space(r, m_lo=3, m_hi=8):
    m = int(r.integers(m_lo, m_hi + 1))
    p = int(r.integers(0, m + 1))
    return InnerProduct.standard(p, m - p)


def test_validate_zero_and_constant_curvature():
    rep = validate(CurvatureTensor.zero(E3))
    assert rep.passed and rep.pair_swap == rep.antisymmetry == rep.bianchi == 0
    assert validate(build_a_phi(np.eye(4), E4)).passed


def test_validate_reports_injected_defect():
    C = build_a_phi(np.diag([1.0, 2.0, 3.0, 4.0]), E4).components.copy()
    C[0, 1, 2, 3] += 1e-3
    rep = validate(CurvatureTensor(C, E4))
    assert not rep.passed
    assert rep.antisymmetry == pytest.approx(1e-3)
    assert rep.bianchi == pytest.approx(1e-3)
    assert rep.pair_swap == pytest.approx(1e-3)


def test_a_phi_examples():
    A = build_a_phi(np.eye(3), E3)
    e = np.eye(3)
    assert A(e[0], e[1], e[1], e[0]) == 1
    assert not build_a_phi(np.zeros((3, 3)), E3).components.any()
    B = build_a_phi(np.diag([1.0, 1.0, -1.0]), E3)
    assert B(e[0], e[2], e[2], e[0]) == -1


def test_a_phi_rejects_non_self_adjoint():
    with pytest.raises(ValueError):
        build_a_phi(np.array([[0.0, 1, 0], [0, 0, 0], [0, 0, 0]]), E3)


def test_a_phi_always_valid(rng):
    for _ in range(100):
        g = _random_space(rng)
        phi = random_self_adjoint(g, rng)
        assert validate(build_a_phi(phi, g)).passed


def test_constant_curvature_examples():
    assert not build_constant_curvature(0.0, E3).components.any()
    assert np.array_equal(build_constant_curvature(1.0, E4).components, build_a_phi(np.eye(4), E4).components)
    e = np.eye(3)
    assert build_constant_curvature(2.0, LORENTZ)(e[0], e[1], e[1], e[0]) == -2


@pytest.mark.parametrize("m", [3, 4, 6])
def test_ricci_of_constant_curvature(m):
    g = InnerProduct.standard(1, m - 1)
    A = build_constant_curvature(1.0, g)
    assert np.allclose(ricci(A), (m - 1) * g.gram)
    assert scalar_curv(A) == pytest.approx(m * (m - 1))
    assert not ricci(CurvatureTensor.zero(g)).any()


def test_exceptional_four_dim_tensor():
    assert not build_eq3c(0.0, 0.0).components.any()
    A = build_eq3c(1.0, -2.0)
    assert validate(A).passed
    assert ricci(A)[0, 0] == pytest.approx(3.0)
    # with a2 + 2 a1 != 0 the listed components violate the Bianchi identity
    B = build_eq3c(1.0, 1.0)
    assert validate(B).bianchi == pytest.approx(3.0)
    assert ricci(B)[0, 0] == pytest.approx(-3.0)
    assert np.abs(ricci(weyl_project(B))).max() < 1e-12
    with pytest.raises(ValueError):
        build_eq3c(1.0, 1.0, InnerProduct.standard(1, 3))


def test_weyl_projection_properties(rng):
    for _ in range(30):
        g = _random_space(rng)
        A = random_curvature(g, rng)
        W = weyl_project(A)
        assert np.abs(ricci(W)).max() < 1e-9
        assert np.abs(weyl_project(W).components - W.components).max() < 1e-10
        assert validate(W, 1e-9).passed
        lam = float(rng.uniform(-3, 3))
        shifted = weyl_project(A + build_constant_curvature(lam, g))
        assert np.abs(shifted.components - W.components).max() < 1e-10


def test_weyl_projection_examples():
    assert np.abs(weyl_project(build_constant_curvature(1.0, E4)).components).max() < 1e-14
    W = weyl_project(random_curvature(E4, np.random.default_rng(3)))
    assert np.allclose(weyl_project(W).components, W.components)


def test_jacobi_identities(rng):
    for _ in range(30):
        g = _random_space(rng)
        A = random_curvature(g, rng)
        x = rng.standard_normal(g.m)
        J = jacobi(A, x)
        assert is_self_adjoint(g, J, 1e-9)
        assert np.abs(J @ x).max() < 1e-10 * max(1.0, np.abs(J).max())
        assert np.trace(J) == pytest.approx(x @ ricci(A) @ x, abs=1e-9)
        assert abs(np.trace(jacobi(weyl_project(A), x))) < 1e-9


def test_jacobi_of_identity_generator():
    x = np.array([0.6, 0.8, 0.0])
    J = jacobi(build_a_phi(np.eye(3), E3), x)
    assert np.allclose(J, np.eye(3) - np.outer(x, x))
    assert sorted(np.round(np.linalg.eigvalsh(J), 12)) == [0.0, 1.0, 1.0]


def test_jacobi_closed_form_spot_value():
    e = np.eye(3)
    J = jacobi(build_a_phi(np.diag([1.0, 1.0, -1.0]), E3), e[0])
    assert np.allclose(J @ e[2], -e[2])


def test_skew_operator_examples():
    e = np.eye(4)
    S = skew_operator(build_a_phi(np.eye(4), E4), OrientedPlane.checked(e[0], e[1], E4))
    assert np.allclose(S @ e[0], -e[1])
    assert np.allclose(S @ e[1], e[0])
    assert rank_tol(S) == 2
    plane = OrientedPlane.checked(e[0], e[1], E4)
    assert not skew_operator(CurvatureTensor.zero(E4), plane).any()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * np.pi))
def test_skew_operator_is_skew_and_rotation_invariant(seed, theta):
    r = np.random.default_rng(seed)
    g = InnerProduct.euclidean(5)
    A = random_curvature(g, r)
    Q, _ = np.linalg.qr(r.standard_normal((5, 2)))
    e1, e2 = Q[:, 0], Q[:, 1]
    S = skew_operator(A, OrientedPlane.checked(e1, e2, g))
    assert is_skew_adjoint(g, S)
    f1 = np.cos(theta) * e1 + np.sin(theta) * e2
    f2 = -np.sin(theta) * e1 + np.cos(theta) * e2
    assert np.abs(skew_operator(A, OrientedPlane.checked(f1, f2, g)) - S).max() < 1e-10 * max(1, np.abs(S).max())


def test_skew_operator_skew_in_indefinite_signature(rng):
    g = InnerProduct.standard(2, 3)
    A = random_curvature(g, rng)
    S = bivector_operator(A, rng.standard_normal(5), rng.standard_normal(5))
    assert np.abs(g.gram @ S + S.T @ g.gram).max() < 1e-10 * max(1, np.abs(S).max())


def test_oriented_plane_checks():
    e = np.eye(4)
    with pytest.raises(ValueError):
        OrientedPlane.checked(e[0], e[0], E4)
    with pytest.raises(ValueError):
        OrientedPlane.checked(e[0], e[0] + e[1], E4)
    g = InnerProduct.standard(2, 2)
    assert OrientedPlane.checked(e[0], e[1], g).kind == "timelike"
    with pytest.raises(ValueError):
        OrientedPlane.checked(e[0], e[2], g)


def test_rescale_conformal(rng):
    g = InnerProduct.standard(1, 4)
    A = weyl_project(random_curvature(g, rng))
    same = rescale_conformal(A, 1.0)
    assert np.array_equal(same.components, A.components)
    B = rescale_conformal(A, 4.0)
    x = np.array([0.0, 1.0, 0.0, 0.0, 0.0])
    ev_a = np.sort(np.linalg.eigvals(jacobi(A, x)).real)
    ev_b = np.sort(np.linalg.eigvals(jacobi(B, x / 2)).real)
    assert np.allclose(ev_b, ev_a / 4)
    assert rank_tol(jacobi(B, x / 2)) == rank_tol(jacobi(A, x))
    with pytest.raises(ValueError):
        rescale_conformal(A, 0.0)


def test_symmetrize_fills_companions():
    C = np.zeros((3, 3, 3, 3))
    C[0, 1, 0, 1] = 2.0
    S = symmetrize(C)
    assert S[1, 0, 0, 1] == -2 and S[0, 1, 1, 0] == -2 and S[1, 0, 1, 0] == 2
    assert validate(CurvatureTensor(S, E3)).passed


def test_tensor_arithmetic_requires_same_space():
    with pytest.raises(ValueError):
        CurvatureTensor.zero(E3) + CurvatureTensor.zero(LORENTZ)
    with pytest.raises(ValueError):
        CurvatureTensor(np.zeros((3, 3, 3)), E3)
