"""Metric fields on coordinate charts and their curvature at a point.

A :class:`MetricField` wraps a function from coordinates to the rows of
the Gram matrix. The function is written with ordinary arithmetic so the
same code evaluates on floats and on :class:`~weyl_spectra.jet.Jet2`
coordinates; the latter yield exact first and second metric derivatives,
from which Christoffel symbols and the Riemann tensor follow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jet
from .curvature import CurvatureTensor, weyl_project
from .linalg import InnerProduct, Signature, signature_of

GramFunction = Callable[[list], list]


@dataclass(frozen=True)
class MetricField:
    name: str
    dim: int
    signature: Signature
    func: GramFunction = field(repr=False)
    sample_radius: float = 1.0
    coordinates: tuple[str, ...] = ()

    def gram(self, point) -> np.ndarray:
        point = self._check(point)
        rows = self.func([float(a) for a in point])
        return np.array(rows, dtype=float)

    def jets(self, point):
        """Gram matrix and its first and second coordinate derivatives at ``point``.

        Returns ``(g, dg, ddg)`` with ``dg[k, i, j] = d_k g_ij`` and
        ``ddg[k, l, i, j] = d_k d_l g_ij``.
        """
        point = self._check(point)
        rows = self.func(jet.seed(point))
        return jet.unpack(rows, self.dim)

    def space_at(self, point) -> InnerProduct:
        return InnerProduct.from_gram(self.gram(point), self.signature)

    def _check(self, point) -> np.ndarray:
        point = np.asarray(point, dtype=float)
        if point.shape != (self.dim,):
            raise ValueError(f"{self.name}: expected a point with {self.dim} coordinates, got shape {point.shape}")
        return point


def _as_jet(e, n):
    return e if isinstance(e, jet.Jet2) else jet.Jet2.constant(float(e), n)


def christoffel_from_jets(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """``Gamma[k, i, j]`` = Christoffel symbol of the second kind ``Gamma^k_ij``."""
    # first kind: Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    first = 0.5 * (dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg)
    # dg.transpose(1,0,2)[l,i,j] = dg[i,l,j] = d_i g_lj ; dg.transpose(1,2,0)[l,i,j] = dg[j,l,i] = d_j g_li
    return np.einsum("kl,lij->kij", np.linalg.inv(g), first)


def christoffel(gf: MetricField, point) -> np.ndarray:
    g, dg, _ = gf.jets(point)
    _check_nondegenerate(g, gf.name)
    return christoffel_from_jets(g, dg)


def _check_nondegenerate(g: np.ndarray, name: str):
    try:
        signature_of(g)
    except ValueError:
        raise ValueError(f"{name}: Gram matrix is singular at this point") from None


def riemann_from_jets(g: np.ndarray, dg: np.ndarray, ddg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Christoffel symbols and the all-lowered Riemann tensor ``R(d_i, d_j, d_k, d_l)``.

    Convention: ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]`` and
    ``R(x, y, z, w) = g(R(x, y) z, w)``, so the round sphere has
    ``R(x, y, y, x) > 0``.
    """
    ginv = np.linalg.inv(g)
    first = 0.5 * (dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg)
    gamma = np.einsum("kl,lij->kij", ginv, first)
    # d_a Gamma_{l,ij} = 1/2 (d_a d_i g_jl + d_a d_j g_il - d_a d_l g_ij)
    d_first = 0.5 * (
        np.einsum("aijl->alij", ddg)
        + np.einsum("ajil->alij", ddg)
        - np.einsum("alij->alij", ddg)
    )
    d_ginv = -np.einsum("kp,apq,ql->akl", ginv, dg, ginv)
    d_gamma = np.einsum("akl,lij->akij", d_ginv, first) + np.einsum("kl,alij->akij", ginv, d_first)
    # R^l_{ijk} = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_in Gamma^n_jk - Gamma^l_jn Gamma^n_ik
    up = (
        np.einsum("iljk->ijkl", d_gamma)
        - np.einsum("jlik->ijkl", d_gamma)
        + np.einsum("lin,njk->ijkl", gamma, gamma)
        - np.einsum("ljn,nik->ijkl", gamma, gamma)
    )
    R = np.einsum("ijkn,nl->ijkl", up, g)
    return gamma, R


@dataclass(frozen=True, eq=False)
class PointFrame:
    point: np.ndarray
    gram: np.ndarray
    gram_inv: np.ndarray
    christoffel: np.ndarray
    riemann: CurvatureTensor
    weyl: CurvatureTensor

    @property
    def space(self) -> InnerProduct:
        return self.riemann.space


def riemann_at(gf: MetricField, point) -> PointFrame:
    point = np.asarray(point, dtype=float)
    g, dg, ddg = gf.jets(point)
    _check_nondegenerate(g, gf.name)
    space = InnerProduct.from_gram(g, gf.signature)
    gamma, R = riemann_from_jets(space.gram, dg, ddg)
    # exact symmetries hold analytically; remove round-off asymmetry of the pair swap
    R = 0.5 * (R + R.transpose(2, 3, 0, 1))
    riemann = CurvatureTensor(R, space)
    return PointFrame(point, space.gram, space.gram_inv, gamma, riemann, weyl_project(riemann))


def sample_points(gf: MetricField, n: int, rng: np.random.Generator, radius: float | None = None) -> np.ndarray:
    """Draw ``n`` chart points uniformly from the coordinate box, skipping near-degenerate ones."""
    r = gf.sample_radius if radius is None else radius
    out = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 1000 * max(n, 1):
            raise RuntimeError(f"{gf.name}: could not find non-degenerate sample points")
        x = rng.uniform(-r, r, gf.dim)
        G = gf.gram(x)
        if not np.all(np.isfinite(G)):
            continue
        det = np.linalg.det(G)
        if abs(det) < 1e-8 or np.linalg.cond(G) > 1e8:
            continue
        if signature_of(G) != (gf.signature.p, gf.signature.q):
            raise ValueError(f"{gf.name}: Gram at {x.tolist()} has signature {signature_of(G)}, declared {gf.signature}")
        out.append(x)
    return np.array(out)


# -- built-in families --------------------------------------------------------


def flat(m: int, p: int = 0) -> MetricField:
    signs = [-1.0] * p + [1.0] * (m - p)

    def rows(x):
        return [[signs[i] if i == j else 0.0 for j in range(m)] for i in range(m)]

    return MetricField(f"flat:m={m}" + (f",p={p}" if p else ""), m, Signature(p, m - p), rows)


def constant_curvature_model(K: float, m: int) -> MetricField:
    """``4 (1 + K |x|^2)^-2`` times the Euclidean metric; sectional curvature ``K``."""

    def rows(x):
        r2 = sum(xi * xi for xi in x)
        c = 4.0 / (1.0 + K * r2) ** 2
        return [[c if i == j else 0.0 for j in range(m)] for i in range(m)]

    return MetricField(f"constcurv:K={K:g},m={m}", m, Signature(0, m), rows, sample_radius=0.5)


def family_gf(p: int, f, name: str | None = None) -> MetricField:
    """Neutral metric on ``R^{2p}`` in coordinates ``(x_1..x_p, y_1..y_p)``.

    ``g(dx_i, dx_j) = d_i f d_j f``, ``g(dx_i, dy_j) = delta_ij``,
    ``g(dy_i, dy_j) = 0``. ``f`` depends on the x-block only and must
    provide ``partial(i)`` (a :class:`~weyl_spectra.expr.Polynomial` does).
    """
    if p < 2:
        raise ValueError(f"g_f needs p >= 2, got {p}")
    grads = [f.partial(i) for i in range(p)]
    m = 2 * p

    def rows(c):
        xs = c[:p]
        df = [d(xs) for d in grads]
        out = [[0.0] * m for _ in range(m)]
        for i in range(p):
            for j in range(p):
                out[i][j] = df[i] * df[j]
            out[i][p + i] = 1.0
            out[p + i][i] = 1.0
        return out

    coords = tuple(f"x{i + 1}" for i in range(p)) + tuple(f"y{i + 1}" for i in range(p))
    return MetricField(name or f"gf:p={p},f={f}", m, Signature(p, p), rows, coordinates=coords)


def family_gF(s: int, fs, name: str | None = None) -> MetricField:
    """Metric of signature ``(2s, s)`` on ``R^{3s}`` in coordinates ``(u, t, w)``.

    ``g(du_i, du_j) = -2 delta_ij (F(u) + sum_k u_k t_k)`` with
    ``F(u) = sum_i f_i(u_i)``, ``g(du_i, dw_j) = delta_ij``,
    ``g(dt_i, dt_j) = -delta_ij``; all other pairings vanish.
    """
    if s < 2:
        raise ValueError(f"g_F needs s >= 2, got {s}")
    if len(fs) != s:
        raise ValueError(f"expected {s} one-variable functions, got {len(fs)}")
    m = 3 * s

    def rows(c):
        u, t = c[:s], c[s : 2 * s]
        F = sum((fi([ui]) for fi, ui in zip(fs, u)), 0.0)
        ut = sum((ui * ti for ui, ti in zip(u, t)), 0.0)
        a = -2.0 * (F + ut)
        out = [[0.0] * m for _ in range(m)]
        for i in range(s):
            out[i][i] = a
            out[i][2 * s + i] = 1.0
            out[2 * s + i][i] = 1.0
            out[s + i][s + i] = -1.0
        return out

    coords = tuple(f"{b}{i + 1}" for b in "utw" for i in range(s))
    return MetricField(name or f"gF:s={s}", m, Signature(2 * s, s), rows, coordinates=coords)


def rescale_field(gf: MetricField, alpha: Callable, alpha_name: str = "alpha") -> MetricField:
    """Conformally rescaled field ``alpha(x) * g(x)``; ``alpha`` must be positive and jet-evaluable."""

    def rows(x):
        a = alpha(x)
        val = a.value if isinstance(a, jet.Jet2) else a
        if not val > 0:
            raise ValueError(f"conformal factor must be positive, got {val} at {[float(getattr(v, 'value', v)) for v in x]}")
        return [[a * e for e in row] for row in gf.func(x)]

    return MetricField(
        f"rescale:alpha={alpha_name}@{gf.name}", gf.dim, gf.signature, rows, gf.sample_radius, gf.coordinates
    )


def exp_first_coordinate(x):
    return jet.exp(x[0])
