"""Signature-aware linear algebra.

Inner products of arbitrary signature, tolerance-based rank, and the
Jordan fingerprint used to decide whether two operators share a Jordan
normal form.

Convention: ``p`` counts timelike directions (``g(v, v) < 0``) and ``q``
counts spacelike ones, so a Lorentzian space has signature ``(1, m - 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import expm

RANK_TOL = 1e-8
EIG_TOL = 1e-7
NULL_TOL = 1e-9


@dataclass(frozen=True)
class Signature:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"signature counts must be non-negative, got ({self.p}, {self.q})")
        if self.p + self.q < 3:
            raise ValueError(f"dimension p + q must be at least 3, got {self.p + self.q}")

    @property
    def m(self) -> int:
        return self.p + self.q


def signature_of(gram: np.ndarray, tol: float = 1e-12) -> tuple[int, int]:
    """Return ``(negative, positive)`` eigenvalue counts of a symmetric matrix.

    Raises ``ValueError`` if any eigenvalue is zero to relative tolerance.
    """
    ev = np.linalg.eigvalsh(np.asarray(gram, dtype=float))
    scale = max(np.abs(ev).max(initial=0.0), 1e-300)
    if np.any(np.abs(ev) <= tol * scale):
        raise ValueError("inner product is degenerate")
    return int(np.sum(ev < 0)), int(np.sum(ev > 0))


@dataclass(frozen=True)
class InnerProduct:
    """Non-degenerate symmetric bilinear form given by its Gram matrix."""

    gram: np.ndarray
    gram_inv: np.ndarray = field(repr=False)
    signature: Signature

    @classmethod
    def from_gram(cls, gram, signature: tuple[int, int] | Signature | None = None) -> "InnerProduct":
        g = np.array(gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {g.shape}")
        if not np.allclose(g, g.T, rtol=0, atol=1e-12 * max(1.0, np.abs(g).max())):
            raise ValueError("Gram matrix is not symmetric")
        g = 0.5 * (g + g.T)
        found = Signature(*signature_of(g))
        if signature is not None:
            declared = signature if isinstance(signature, Signature) else Signature(*signature)
            if declared != found:
                raise ValueError(f"declared signature {(declared.p, declared.q)} but Gram has {(found.p, found.q)}")
        g_inv = np.linalg.inv(g)
        g.setflags(write=False)
        g_inv.setflags(write=False)
        return cls(g, g_inv, found)

    @classmethod
    def diagonal(cls, signs: Sequence[float]) -> "InnerProduct":
        return cls.from_gram(np.diag(np.asarray(signs, dtype=float)))

    @classmethod
    def euclidean(cls, m: int) -> "InnerProduct":
        return cls.diagonal([1.0] * m)

    @classmethod
    def standard(cls, p: int, q: int) -> "InnerProduct":
        """``diag(-1, ..., -1, +1, ..., +1)`` with ``p`` minus signs."""
        return cls.diagonal([-1.0] * p + [1.0] * q)

    @property
    def m(self) -> int:
        return self.gram.shape[0]

    def scaled(self, alpha: float) -> "InnerProduct":
        if not alpha > 0:
            raise ValueError(f"conformal factor must be positive, got {alpha}")
        return InnerProduct.from_gram(alpha * self.gram, self.signature)

    def __eq__(self, other):
        if not isinstance(other, InnerProduct):
            return NotImplemented
        return self.gram.shape == other.gram.shape and np.array_equal(self.gram, other.gram)

    def __hash__(self):
        return hash(self.gram.tobytes())


def inner(g: InnerProduct, x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != (g.m,) or y.shape != (g.m,):
        raise ValueError(f"expected vectors of length {g.m}, got {x.shape} and {y.shape}")
    return x @ g.gram @ y


def causal_type(g: InnerProduct, x, null_tol: float = NULL_TOL) -> str:
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        raise ValueError("causal type of the zero vector is undefined")
    n = inner(g, x, x)
    if n > null_tol:
        return "spacelike"
    if n < -null_tol:
        return "timelike"
    return "null"


def adjoint(g: InnerProduct, T: np.ndarray) -> np.ndarray:
    """Matrix of the ``g``-adjoint ``T*`` with ``g(Tx, y) = g(x, T*y)``."""
    return g.gram_inv @ T.T @ g.gram


def is_self_adjoint(g: InnerProduct, T: np.ndarray, tol: float = 1e-10) -> bool:
    G = g.gram @ T
    return bool(np.abs(G - G.T).max(initial=0.0) <= tol * max(1.0, np.abs(G).max(initial=0.0)))


def is_skew_adjoint(g: InnerProduct, T: np.ndarray, tol: float = 1e-10) -> bool:
    G = g.gram @ T
    return bool(np.abs(G + G.T).max(initial=0.0) <= tol * max(1.0, np.abs(G).max(initial=0.0)))


def random_isometry(g: InnerProduct, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """Random ``L`` with ``L^T G L = G``: the exponential of ``G^-1 S`` for a skew ``S``."""
    S = scale * rng.standard_normal((g.m, g.m))
    return expm(g.gram_inv @ (S - S.T) / 2)


def rank_tol(M, rel_tol: float = RANK_TOL, scale: float | None = None) -> int:
    """Count singular values above ``rel_tol * scale``.

    ``scale`` defaults to the largest singular value of ``M``. Passing an
    explicit scale lets callers measure the rank of a matrix power against
    the size of its factors, so that a power which is zero up to round-off
    is reported as rank 0.
    """
    M = np.asarray(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    ref = s[0] if scale is None else scale
    if ref <= 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rel_tol * ref))


@dataclass(frozen=True)
class JordanInvariants:
    """Comparable fingerprint of a Jordan normal form.

    ``clusters`` holds ``(eigenvalue, algebraic multiplicity)`` pairs,
    ``rank_chains[i]`` is ``rank((T - l_i)^k)`` for ``k = 1..m`` and
    ``overall_rank_chain`` is ``rank(T^k)``.
    """

    clusters: tuple[tuple[complex, int], ...]
    rank_chains: tuple[tuple[int, ...], ...]
    overall_rank_chain: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.overall_rank_chain)

    @property
    def is_nilpotent(self) -> bool:
        return self.overall_rank_chain[-1] == 0

    def spectral_radius(self) -> float:
        return max((abs(lam) for lam, _ in self.clusters), default=0.0)

    def block_sizes(self, index: int) -> list[int]:
        """Jordan block sizes of cluster ``index``, largest first, read off its rank chain."""
        m = self.m
        chain = (m,) + self.rank_chains[index]
        # number of blocks of size >= k is chain[k-1] - chain[k]
        at_least = [chain[k - 1] - chain[k] for k in range(1, m + 1)]
        sizes = []
        for k in range(m, 0, -1):
            exact = at_least[k - 1] - (at_least[k] if k < m else 0)
            sizes.extend([k] * exact)
        return sizes

    def to_dict(self) -> dict:
        return {
            "clusters": [[float(lam.real), float(lam.imag), int(n)] for lam, n in self.clusters],
            "rank_chains": [list(c) for c in self.rank_chains],
            "overall_rank_chain": list(self.overall_rank_chain),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "JordanInvariants":
        return cls(
            clusters=tuple((complex(re, im), int(n)) for re, im, n in d["clusters"]),
            rank_chains=tuple(tuple(int(r) for r in c) for c in d["rank_chains"]),
            overall_rank_chain=tuple(int(r) for r in d["overall_rank_chain"]),
        )


def _null_basis(M: np.ndarray, threshold: float) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of ``M``."""
    _, s, Vh = np.linalg.svd(M)
    r = int(np.sum(s > threshold))
    return Vh[r:].conj().T


def _power_chain(B: np.ndarray, base: float, rel_tol: float) -> tuple[int, ...]:
    """Ranks of ``B, B^2, ..., B^m`` with singular values measured against ``base``.

    Powers are never formed: ``ker B^k`` is the preimage of ``ker B^(k-1)``
    under ``B``, i.e. the kernel of ``(I - N N^*) B`` with ``N`` an
    orthonormal basis of ``ker B^(k-1)``. Every step only involves matrices
    of the size of ``B``, so strongly non-normal operators keep their true
    ranks.
    """
    m = B.shape[0]
    if base == 0:
        return (0,) * m
    threshold = rel_tol * base
    eye = np.eye(m, dtype=B.dtype)
    N = np.zeros((m, 0), dtype=B.dtype)
    chain = []
    for k in range(1, m + 1):
        N = _null_basis((eye - N @ N.conj().T) @ B, threshold)
        r = m - N.shape[1]
        # ranks of successive powers never increase; clip round-off artifacts
        chain.append(min(r, chain[-1]) if chain else r)
        if chain[-1] == 0:
            chain.extend([0] * (m - k))
            break
    return tuple(chain)


def _linked(values: list[complex], radius: float) -> list[list[complex]]:
    """Connected components of the graph joining values at distance ``<= radius``."""
    parent = list(range(len(values)))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) <= radius:
                parent[root(i)] = root(j)
    comps: dict[int, list[complex]] = {}
    for i, v in enumerate(values):
        comps.setdefault(root(i), []).append(v)
    return list(comps.values())


def _cluster_eigenvalues(ev: np.ndarray, abs_tol: float, scale: float) -> list[list[complex]]:
    """Single-linkage clustering of eigenvalues, largest multiplicities first.

    Round-off splits an eigenvalue of a Jordan block of size ``n`` over a
    circle of radius about ``(m * eps)^(1/n) * scale``. For ``n = m, ..., 1``
    the unassigned eigenvalues are linked at that radius (never less than
    ``abs_tol``) and every component with at least ``n`` members becomes a
    cluster.
    """
    m = len(ev)
    eps = np.finfo(float).eps
    left = [complex(v) for v in ev]
    groups = []
    for n in range(m, 0, -1):
        radius = max(abs_tol, 4.0 * (m * eps) ** (1.0 / n) * scale if n > 1 else 0.0)
        rest = []
        for comp in _linked(left, radius):
            if len(comp) >= n:
                groups.append(comp)
            else:
                rest.extend(comp)
        left = rest
    return groups


def jordan_invariants(
    T, tol: float = EIG_TOL, rel_tol: float = RANK_TOL, scale: float | None = None
) -> JordanInvariants:
    """Fingerprint the Jordan structure of ``T``.

    Eigenvalues are clustered with absolute tolerance ``tol * (1 + ||T||)``;
    each cluster is represented by the mean of its members, which is far
    more accurate than any single eigenvalue of a defective cluster.

    Ranks of ``(T - l)^k`` count singular values above
    ``rel_tol * (||T|| + |l|)^k``. The optional ``scale`` is a reference
    magnitude for the family ``T`` belongs to: if ``||T|| <= rel_tol * scale``
    the operator is fingerprinted as exactly zero. Without it, a collapsing
    operator looks as non-degenerate as a large one.
    """
    T = np.asarray(T)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {T.shape}")
    if not np.all(np.isfinite(T)):
        raise np.linalg.LinAlgError("operator has non-finite entries")
    m = T.shape[0]
    norm = float(np.linalg.norm(T, 2)) if T.size else 0.0
    if norm == 0.0 or (scale is not None and norm <= rel_tol * scale):
        return JordanInvariants(((0j, m),), ((0,) * m,), (0,) * m)
    ev = np.linalg.eigvals(T)
    groups = _cluster_eigenvalues(ev, tol * (1.0 + norm), norm)

    clusters = []
    for grp in groups:
        lam = complex(np.mean(grp))
        if abs(lam.imag) <= tol * (1.0 + norm):
            lam = complex(lam.real, 0.0)
        clusters.append((lam, len(grp)))
    clusters.sort(key=lambda c: (round(c[0].real, 12), round(c[0].imag, 12)))

    chains = []
    for lam, _ in clusters:
        if lam.imag == 0.0:
            B = T - lam.real * np.eye(m)
        else:
            B = T - lam * np.eye(m)
        chains.append(_power_chain(B, norm + abs(lam), rel_tol))
    overall = _power_chain(T, norm, rel_tol)
    return JordanInvariants(tuple(clusters), tuple(chains), overall)


def jordan_equal(a: JordanInvariants, b: JordanInvariants, tol: float = EIG_TOL) -> bool:
    """True iff both fingerprints describe the same Jordan normal form."""
    if a.m != b.m or len(a.clusters) != len(b.clusters):
        return False
    if a.overall_rank_chain != b.overall_rank_chain:
        return False
    atol = tol * (1.0 + max(a.spectral_radius(), b.spectral_radius()))
    unused = list(range(len(b.clusters)))
    for i, (lam, n) in enumerate(a.clusters):
        match = None
        for j in unused:
            mu, k = b.clusters[j]
            if abs(lam - mu) <= atol and n == k and a.rank_chains[i] == b.rank_chains[j]:
                if match is None or abs(lam - mu) < abs(lam - b.clusters[match][0]):
                    match = j
        if match is None:
            return False
        unused.remove(match)
    return True
