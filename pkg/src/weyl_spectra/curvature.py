"""Algebraic curvature tensors on an inner-product space.

Components are stored densely as ``A[i, j, k, l] = A(e_i, e_j, e_k, e_l)``
with every index lowered. Operators are extracted by raising one index
with the inverse Gram matrix. Complex component arrays are allowed: all
contractions are bilinear, never Hermitian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import InnerProduct, is_self_adjoint

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    components: np.ndarray
    space: InnerProduct

    def __post_init__(self):
        m = self.space.m
        if self.components.shape != (m, m, m, m):
            raise ValueError(f"expected components of shape {(m,) * 4}, got {self.components.shape}")

    @property
    def m(self) -> int:
        return self.space.m

    @classmethod
    def zero(cls, space: InnerProduct) -> "CurvatureTensor":
        return cls(np.zeros((space.m,) * 4), space)

    def __add__(self, other: "CurvatureTensor") -> "CurvatureTensor":
        if other.space != self.space:
            raise ValueError("tensors live on different inner-product spaces")
        return CurvatureTensor(self.components + other.components, self.space)

    def __sub__(self, other: "CurvatureTensor") -> "CurvatureTensor":
        return self + (-1.0) * other

    def __mul__(self, c) -> "CurvatureTensor":
        return CurvatureTensor(c * self.components, self.space)

    __rmul__ = __mul__

    def __call__(self, x, y, z, w):
        return np.einsum("ijkl,i,j,k,l->", self.components, x, y, z, w)

    def max_abs(self) -> float:
        return float(np.abs(self.components).max(initial=0.0))


@dataclass(frozen=True)
class SymmetryReport:
    pair_swap: float
    antisymmetry: float
    bianchi: float
    tol: float = SYMMETRY_TOL

    @property
    def passed(self) -> bool:
        return max(self.pair_swap, self.antisymmetry, self.bianchi) < self.tol

    def to_dict(self) -> dict:
        return {
            "pair_swap": self.pair_swap,
            "antisymmetry": self.antisymmetry,
            "bianchi": self.bianchi,
            "tol": self.tol,
            "passed": self.passed,
        }


def validate(A: CurvatureTensor, tol: float = SYMMETRY_TOL) -> SymmetryReport:
    """Largest violation of each curvature-tensor symmetry over all index tuples."""
    C = A.components
    pair = np.abs(C - C.transpose(2, 3, 0, 1)).max(initial=0.0)
    # both antisymmetries: first pair, and (by the same rule) the second pair
    anti = max(
        np.abs(C + C.transpose(1, 0, 2, 3)).max(initial=0.0),
        np.abs(C + C.transpose(0, 1, 3, 2)).max(initial=0.0),
    )
    # A(x,y,z,w) + A(y,z,x,w) + A(z,x,y,w)
    bianchi = np.abs(C + C.transpose(2, 0, 1, 3) + C.transpose(1, 2, 0, 3)).max(initial=0.0)
    return SymmetryReport(float(pair), float(anti), float(bianchi), tol)


def symmetrize(components: np.ndarray) -> np.ndarray:
    """Fill the symmetry companions of a partially specified tensor.

    Each non-zero entry is copied to its images under the antisymmetries
    and the pair swap; conflicting entries are left as given so that
    :func:`validate` can report them.
    """
    C = np.array(components)
    out = C.copy()
    for idx in zip(*np.nonzero(C)):
        i, j, k, l = idx
        v = C[idx]
        for (a, b, c, d), s in (
            ((i, j, k, l), 1),
            ((j, i, k, l), -1),
            ((i, j, l, k), -1),
            ((j, i, l, k), 1),
            ((k, l, i, j), 1),
            ((l, k, i, j), -1),
            ((k, l, j, i), -1),
            ((l, k, j, i), 1),
        ):
            if C[a, b, c, d] == 0:
                out[a, b, c, d] = s * v
    return out


def build_a_phi(phi, space: InnerProduct, tol: float = 1e-10) -> CurvatureTensor:
    """``A(x,y,z,w) = g(phi x, w) g(phi y, z) - g(phi x, z) g(phi y, w)`` for self-adjoint ``phi``."""
    phi = np.asarray(phi)
    if phi.shape != (space.m, space.m):
        raise ValueError(f"phi must be {space.m}x{space.m}")
    if not is_self_adjoint(space, phi, tol):
        raise ValueError("phi is not self-adjoint with respect to g")
    # P[a, b] = g(phi e_a, e_b); symmetric because phi is self-adjoint
    P = phi.T @ space.gram
    P = 0.5 * (P + P.T)
    C = np.einsum("ad,bc->abcd", P, P) - np.einsum("ac,bd->abcd", P, P)
    return CurvatureTensor(C, space)


def build_constant_curvature(lam: float, space: InnerProduct) -> CurvatureTensor:
    g = space.gram
    C = lam * (np.einsum("ad,bc->abcd", g, g) - np.einsum("ac,bd->abcd", g, g))
    return CurvatureTensor(C, space)


def build_eq3c(a1: float, a2: float, space: InnerProduct | None = None) -> CurvatureTensor:
    """Four-dimensional Euclidean fixture with twelve prescribed components.

    The listed entries (1-based) are ``W1212 = W3434 = a1``,
    ``W1313 = W1414 = W2323 = W2424 = a2``, ``W1234 = W3412 = a2``,
    ``W1423 = W2314 = a1`` and ``W1324 = W2413 = -a1``. No relation between
    ``a1`` and ``a2`` is imposed; the Bianchi identity holds only when
    ``a2 + 2 a1 = 0``.
    """
    if space is None:
        space = InnerProduct.euclidean(4)
    if space.m != 4 or space.signature.p != 0:
        raise ValueError("this fixture is defined on 4-dimensional Euclidean space only")
    table = {
        (1, 2, 1, 2): a1, (1, 2, 3, 4): a2,
        (1, 3, 1, 3): a2, (1, 3, 2, 4): -a1,
        (1, 4, 1, 4): a2, (1, 4, 2, 3): a1,
        (2, 3, 2, 3): a2, (2, 3, 1, 4): a1,
        (2, 4, 2, 4): a2, (2, 4, 1, 3): -a1,
        (3, 4, 3, 4): a1, (3, 4, 1, 2): a2,
    }
    C = np.zeros((4, 4, 4, 4))
    for (i, j, k, l), v in table.items():
        C[i - 1, j - 1, k - 1, l - 1] = v
    return CurvatureTensor(symmetrize(C), space)


def ricci(A: CurvatureTensor) -> np.ndarray:
    """``rho(x, y) = sum_ij g^ij A(x, e_i, e_j, y)``."""
    return np.einsum("ij,aijb->ab", A.space.gram_inv, A.components)


def scalar_curv(A: CurvatureTensor):
    return np.einsum("ij,ij->", A.space.gram_inv, ricci(A))


def weyl_project(A: CurvatureTensor) -> CurvatureTensor:
    m = A.m
    if m < 3:
        raise ValueError("Weyl projection needs dimension at least 3")
    g = A.space.gram
    rho = ricci(A)
    tau = np.einsum("ij,ij->", A.space.gram_inv, rho)
    C = (
        A.components
        - (np.einsum("ad,bc->abcd", rho, g) + np.einsum("ad,bc->abcd", g, rho)) / (m - 2)
        + (np.einsum("ac,bd->abcd", rho, g) + np.einsum("ac,bd->abcd", g, rho)) / (m - 2)
        + tau / ((m - 1) * (m - 2)) * (np.einsum("ad,bc->abcd", g, g) - np.einsum("ac,bd->abcd", g, g))
    )
    return CurvatureTensor(C, A.space)


def jacobi(A: CurvatureTensor, x) -> np.ndarray:
    """Matrix of ``J(x)`` with ``g(J(x) y, z) = A(y, x, x, z)``; columns are images of basis vectors."""
    x = np.asarray(x)
    # M[y, z] = A(y, x, x, z)
    M = np.tensordot(np.tensordot(A.components, x, axes=([1], [0])), x, axes=([1], [0]))
    return A.space.gram_inv @ M.T


@dataclass(frozen=True)
class OrientedPlane:
    e1: np.ndarray
    e2: np.ndarray
    kind: str

    @classmethod
    def checked(cls, e1, e2, space: InnerProduct, tol: float = 1e-10) -> "OrientedPlane":
        e1 = np.asarray(e1, dtype=float)
        e2 = np.asarray(e2, dtype=float)
        G = np.array([[e1 @ space.gram @ e1, e1 @ space.gram @ e2], [e2 @ space.gram @ e1, e2 @ space.gram @ e2]])
        if abs(np.linalg.det(G)) <= tol:
            raise ValueError("plane is degenerate")
        if abs(G[0, 1]) > tol:
            raise ValueError("basis vectors are not orthogonal")
        if abs(G[0, 0] - 1) <= tol and abs(G[1, 1] - 1) <= tol:
            kind = "spacelike"
        elif abs(G[0, 0] + 1) <= tol and abs(G[1, 1] + 1) <= tol:
            kind = "timelike"
        else:
            raise ValueError("basis is not orthonormal of a single causal kind")
        return cls(e1, e2, kind)


def skew_operator(A: CurvatureTensor, plane: OrientedPlane) -> np.ndarray:
    """Matrix of ``A(pi)`` with ``g(A(pi) x, y) = A(e1, e2, x, y)``."""
    return bivector_operator(A, plane.e1, plane.e2)


def bivector_operator(A: CurvatureTensor, u, v) -> np.ndarray:
    """Skew operator of the (not necessarily orthonormal) pair ``u, v``."""
    N = np.tensordot(np.asarray(v), np.tensordot(np.asarray(u), A.components, axes=([0], [0])), axes=([0], [0]))
    return A.space.gram_inv @ N.T


def rescale_conformal(A: CurvatureTensor, alpha: float) -> CurvatureTensor:
    """Tensor ``alpha * A`` on the rescaled space ``alpha * g``."""
    if not alpha > 0:
        raise ValueError(f"conformal factor must be positive, got {alpha}")
    return CurvatureTensor(alpha * A.components, A.space.scaled(alpha))


def random_self_adjoint(space: InnerProduct, rng: np.random.Generator) -> np.ndarray:
    S = rng.standard_normal((space.m, space.m))
    return space.gram_inv @ (S + S.T) / 2


def random_curvature(space: InnerProduct, rng: np.random.Generator, terms: int | None = None) -> CurvatureTensor:
    """Random algebraic curvature tensor as a combination of ``A_phi`` generators."""
    terms = terms or space.m + 2
    C = np.zeros((space.m,) * 4)
    for _ in range(terms):
        C += rng.standard_normal() * build_a_phi(random_self_adjoint(space, rng), space).components
    return CurvatureTensor(C, space)
