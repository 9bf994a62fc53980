"""Sampling-based deciders for constant Jordan structure.

A property such as "the Jordan normal form of ``J(v)`` is constant on the
unit spacelike pseudo-sphere" is tested by fingerprinting the operator at
many random samples and comparing every fingerprint with the first one.
Degenerations of the Jordan form usually sit on thin subsets that random
samples miss, so each probe also runs a short Nelder-Mead search that
drives the singular values governing the reference rank chain towards
zero. A verdict of ``holds=True`` therefore means "no violation found".
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize

from .curvature import CurvatureTensor, OrientedPlane, bivector_operator, jacobi
from .geometry import MetricField, riemann_at, sample_points
from .linalg import EIG_TOL, NULL_TOL, RANK_TOL, InnerProduct, JordanInvariants, jordan_equal, jordan_invariants

log = logging.getLogger(__name__)

DEFAULT_SEED = 0x5EED
KINDS = ("spacelike", "timelike")

# stream tags for SeedSequence spawn keys
_POINTS, _VECTORS, _PLANES = 0, 1, 2


@dataclass(frozen=True)
class ProbeConfig:
    n_vectors: int = 100
    n_planes: int = 100
    n_points: int = 10
    seed: int = DEFAULT_SEED
    rank_tol: float = RANK_TOL
    eig_tol: float = EIG_TOL
    null_tol: float = NULL_TOL
    box: float = 1.0
    n_search: int = 2
    search_margin: float = 1e-2
    search_maxfev: int = 600
    workers: int = 1

    def __post_init__(self):
        for name in ("n_vectors", "n_planes", "n_points", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.n_search < 0:
            raise ValueError("n_search must be non-negative")
        if not self.box > 0:
            raise ValueError("box radius must be positive")
        for name in ("rank_tol", "eig_tol", "null_tol", "search_margin"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def rng(self, *key: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=tuple(int(k) for k in key)))


@dataclass
class ProbeVerdict:
    property: str
    kind: str
    holds: bool | None
    reference: JordanInvariants | None
    witnesses: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    # one (sample, fingerprint) pair per evaluated sample; kept out of to_dict
    records: list[tuple[dict, JordanInvariants]] = field(default_factory=list, repr=False)

    @property
    def holds_label(self) -> str:
        return {True: "true", False: "false", None: "inconclusive"}[self.holds]

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "kind": self.kind,
            "holds": self.holds_label,
            "reference": self.reference.to_dict() if self.reference else None,
            "witnesses": self.witnesses,
            "stats": self.stats,
        }


def _sign(kind: str) -> float:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return 1.0 if kind == "spacelike" else -1.0


def _draw_unit(g: InnerProduct, sign: float, rng: np.random.Generator, cfg: ProbeConfig, counter: list) -> np.ndarray:
    # candidates are drawn in small batches; the first acceptable one wins
    while True:
        if counter[0] > 10_000_000:
            raise RuntimeError("pseudo-sphere sampling did not terminate")
        U = rng.uniform(-cfg.box, cfg.box, (8, g.m))
        n = np.einsum("ij,jk,ik->i", U, g.gram, U)
        ok = np.flatnonzero((sign * n >= cfg.null_tol * np.einsum("ij,ij->i", U, U)) & (n != 0))
        if ok.size:
            i = ok[0]
            counter[0] += i + 1
            counter[1] += 1
            return U[i] / np.sqrt(abs(n[i]))
        counter[0] += len(U)


def sample_pseudo_sphere(g: InnerProduct, kind: str, cfg: ProbeConfig, key: tuple = (), n: int | None = None):
    """Unit vectors ``v`` with ``g(v, v) = +1`` (spacelike) or ``-1`` (timelike).

    Raw directions are drawn uniformly from the coordinate box, rejected
    when of the wrong kind or within ``null_tol`` of the null cone, then
    normalized. Returns ``(vectors, acceptance_fraction)``.
    """
    sign = _sign(kind)
    if (sign > 0 and g.signature.q == 0) or (sign < 0 and g.signature.p == 0):
        raise ValueError(f"no {kind} vectors in signature ({g.signature.p}, {g.signature.q})")
    n = cfg.n_vectors if n is None else n
    counter = [0, 0]
    out = np.array([_draw_unit(g, sign, cfg.rng(_VECTORS, sign > 0, *key, i), cfg, counter) for i in range(n)])
    return out, counter[1] / counter[0]


def _orthonormal_pair(g: InnerProduct, u1, u2, sign: float, margin: float):
    n1 = u1 @ g.gram @ u1
    if sign * n1 < margin * (u1 @ u1) or n1 == 0:
        return None
    e1 = u1 / np.sqrt(abs(n1))
    w = u2 - sign * (e1 @ g.gram @ u2) * e1
    n2 = w @ g.gram @ w
    if sign * n2 < margin * (w @ w) or n2 == 0:
        return None
    return e1, w / np.sqrt(abs(n2))


def sample_planes(g: InnerProduct, kind: str, cfg: ProbeConfig, key: tuple = (), n: int | None = None):
    """Oriented orthonormal pairs spanning spacelike or timelike 2-planes.

    Returns ``(planes, redraws)``.
    """
    sign = _sign(kind)
    avail = g.signature.q if sign > 0 else g.signature.p
    if avail < 2:
        raise ValueError(f"no {kind} 2-planes in signature ({g.signature.p}, {g.signature.q})")
    n = cfg.n_planes if n is None else n
    planes = []
    redraws = 0
    for i in range(n):
        rng = cfg.rng(_PLANES, sign > 0, *key, i)
        counter = [0, 0]
        while True:
            a = _draw_unit(g, sign, rng, cfg, counter)
            b = _draw_unit(g, sign, rng, cfg, counter)
            pair = _orthonormal_pair(g, a, b, sign, cfg.null_tol)
            if pair is not None:
                break
            redraws += 1
        planes.append(OrientedPlane(pair[0], pair[1], kind))
    return planes, redraws


def tensor_scale(A: CurvatureTensor) -> float:
    """Upper bound for ``||J(v)|| / |v|^2`` and ``||A(u, w)|| / (|u| |w|)`` in Euclidean norms.

    Operators below ``rank_tol`` times this bound are fingerprinted as zero.
    """
    return float(np.linalg.norm(A.components) * np.linalg.norm(A.space.gram_inv, 2))


def jacobi_fingerprint(A: CurvatureTensor, v, cfg: ProbeConfig, tscale: float | None = None) -> JordanInvariants:
    """Fingerprint of ``J(v)``; it counts as zero when negligible against ``||A|| |v|^2``."""
    tscale = tensor_scale(A) if tscale is None else tscale
    v = np.asarray(v)
    return jordan_invariants(jacobi(A, v), cfg.eig_tol, cfg.rank_tol, scale=tscale * float(v @ v))


def skew_fingerprint(A: CurvatureTensor, e1, e2, cfg: ProbeConfig, tscale: float | None = None) -> JordanInvariants:
    tscale = tensor_scale(A) if tscale is None else tscale
    scale = tscale * float(np.linalg.norm(e1) * np.linalg.norm(e2))
    return jordan_invariants(bivector_operator(A, e1, e2), cfg.eig_tol, cfg.rank_tol, scale=scale)


def _rank_drop(T: np.ndarray, chain: tuple[int, ...]) -> float:
    """``min_k log(sigma_{r_k}(T^k) / ||T||^k)`` over powers with positive reference rank ``r_k``."""
    s = np.linalg.svd(T, compute_uv=False)
    if s[0] == 0:
        return -700.0
    B = T / s[0]
    s = s / s[0]
    P = B
    best = 0.0
    for k, r in enumerate(chain):
        if r == 0:
            break
        if k:
            P = P @ B
            s = np.linalg.svd(P, compute_uv=False)
        best = min(best, np.log(s[r - 1] + 1e-300))
    return float(best)


def _collapse(T: np.ndarray, scale: float) -> float:
    """``log(||T|| / scale)``: how close the operator is to vanishing outright."""
    norm = float(np.linalg.norm(T, 2))
    if scale <= 0 or norm == 0:
        return -700.0
    return float(np.log(norm / scale))


class _Space:
    """Parametrization of a sample space for the degeneration search."""

    def __init__(self, A: CurvatureTensor, kind: str, planes: bool, cfg: ProbeConfig, tscale: float | None = None):
        self.A = A
        self.g = A.space
        self.sign = _sign(kind)
        self.planes = planes
        self.cfg = cfg
        self.tscale = tensor_scale(A) if tscale is None else tscale

    def sample(self, theta):
        m = self.g.m
        if self.planes:
            return _orthonormal_pair(self.g, theta[:m], theta[m:], self.sign, self.cfg.search_margin)
        n = theta @ self.g.gram @ theta
        if self.sign * n < self.cfg.search_margin * (theta @ theta) or n == 0:
            return None
        return theta / np.sqrt(abs(n))

    def operator(self, sample):
        if self.planes:
            e1, e2 = sample
            return bivector_operator(self.A, e1, e2), self.tscale * np.linalg.norm(e1) * np.linalg.norm(e2)
        return jacobi(self.A, sample), self.tscale * float(sample @ sample)

    def fingerprint(self, sample):
        if self.planes:
            return skew_fingerprint(self.A, sample[0], sample[1], self.cfg, self.tscale)
        return jacobi_fingerprint(self.A, sample, self.cfg, self.tscale)

    def encode(self, sample) -> dict:
        if self.planes:
            return {"e1": sample[0].tolist(), "e2": sample[1].tolist()}
        return {"vector": sample.tolist()}


def _chart(space: _Space, start):
    """Affine chart ``z -> theta`` around a start sample, free of scale/frame redundancy.

    Vectors use ``v0 + B z`` with ``B`` spanning the Euclidean complement of
    ``v0`` (a projective chart); planes use ``(q1 + C z1, q2 + C z2)`` with
    ``q1, q2`` an orthonormal basis of the start plane and ``C`` its
    complement (a Grassmannian chart).
    """
    if space.planes:
        Q, _ = np.linalg.qr(np.column_stack(start))
        C = null_space(Q.T)
        k = C.shape[1]
        return 2 * k, lambda z: np.concatenate([Q[:, 0] + C @ z[:k], Q[:, 1] + C @ z[k:]])
    v0 = np.asarray(start) / np.linalg.norm(start)
    B = null_space(v0[None, :])
    return B.shape[1], lambda z: v0 + B @ z


def _search(space: _Space, starts: list, ref: JordanInvariants, cfg: ProbeConfig, step: float = 0.25):
    """Hunt for samples whose fingerprint differs from ``ref``.

    From each start, first minimize the relative rank-drop measure, then the
    collapse measure; the two are kept apart because near the null cone the
    collapse measure has spurious valleys. Returns ``(hits, best_value)``.
    """
    chain = ref.overall_rank_chain
    measures = (
        lambda s: _rank_drop(space.operator(s)[0], chain),
        lambda s: _collapse(*space.operator(s)),
    )
    best = np.inf
    for start in starts:
        dim, to_theta = _chart(space, start)
        simplex = np.vstack([np.zeros(dim), step * np.eye(dim)])
        for measure in measures:

            def objective(z):
                s = space.sample(to_theta(z))
                return 50.0 if s is None else measure(s)

            res = minimize(
                objective,
                np.zeros(dim),
                method="Nelder-Mead",
                options={
                    "maxfev": cfg.search_maxfev,
                    "xatol": 1e-15,
                    "fatol": 1e-15,
                    "adaptive": True,
                    "initial_simplex": simplex,
                },
            )
            best = min(best, float(res.fun))
            theta_opt = to_theta(res.x)
            for theta in (_snap(theta_opt), theta_opt):
                s = space.sample(theta)
                if s is None:
                    continue
                fp = space.fingerprint(s)
                if not jordan_equal(fp, ref, cfg.eig_tol):
                    return [(s, fp, float(measure(s)))], best
    return [], best


def _snap(theta: np.ndarray, rel: float = 1e-6) -> np.ndarray:
    """Set coordinates that are negligible against the largest one to exactly zero."""
    out = np.array(theta, dtype=float)
    out[np.abs(out) < rel * np.abs(out).max(initial=0.0)] = 0.0
    return out


def _probe(space: _Space, samples: list, prop: str, kind: str, cfg: ProbeConfig, stats: dict) -> ProbeVerdict:
    try:
        fps = [space.fingerprint(s) for s in samples]
    except (np.linalg.LinAlgError, ValueError) as exc:
        log.warning("%s probe inconclusive: %s", prop, exc)
        return ProbeVerdict(prop, kind, None, None, [], {**stats, "error": str(exc)})
    ref = fps[0]
    ref_sample = space.encode(samples[0])
    witnesses = []
    for s, fp in zip(samples, fps):
        if not jordan_equal(fp, ref, cfg.eig_tol):
            witnesses.append(
                {
                    "source": "sample",
                    "sample": space.encode(s),
                    "fingerprint": fp.to_dict(),
                    "reference_sample": ref_sample,
                    "reference": ref.to_dict(),
                }
            )
    stats = {**stats, "samples": len(samples), "mismatches": len(witnesses)}
    if not witnesses and cfg.n_search and ref.overall_rank_chain[0] > 0:
        scores = []
        for s in samples:
            T, scale = space.operator(s)
            scores.append(min(_rank_drop(T, ref.overall_rank_chain), _collapse(T, scale)))
        order = np.argsort(scores, kind="stable")[: cfg.n_search]
        try:
            hits, best = _search(space, [samples[i] for i in order], ref, cfg)
        except (np.linalg.LinAlgError, ValueError) as exc:
            log.warning("%s search failed: %s", prop, exc)
            hits, best = [], float("nan")
        stats["search_best_log_sigma"] = round(best, 6) if np.isfinite(best) else None
        for s, fp, val in hits:
            witnesses.append(
                {
                    "source": "search",
                    "sample": space.encode(s),
                    "fingerprint": fp.to_dict(),
                    "reference_sample": ref_sample,
                    "reference": ref.to_dict(),
                    "log_sigma": round(val, 6),
                }
            )
    records = [(space.encode(s), fp) for s, fp in zip(samples, fps)]
    return ProbeVerdict(prop, kind, not witnesses, ref, witnesses, stats, records)


def osserman_probe(
    A: CurvatureTensor, kind: str, cfg: ProbeConfig = ProbeConfig(), key: tuple = (), tscale: float | None = None
) -> ProbeVerdict:
    """Is the Jordan form of ``J(v)`` constant on the unit ``kind`` pseudo-sphere?

    ``tscale`` sets the size below which operators count as zero; it
    defaults to :func:`tensor_scale` of ``A``.
    """
    vectors, accept = sample_pseudo_sphere(A.space, kind, cfg, key)
    space = _Space(A, kind, False, cfg, tscale)
    return _probe(space, list(vectors), "osserman", kind, cfg, {"acceptance": round(accept, 6)})


def ip_probe(
    A: CurvatureTensor, kind: str, cfg: ProbeConfig = ProbeConfig(), key: tuple = (), tscale: float | None = None
) -> ProbeVerdict:
    """Is the Jordan form of the skew operator constant on oriented ``kind`` 2-planes?"""
    planes, redraws = sample_planes(A.space, kind, cfg, key)
    space = _Space(A, kind, True, cfg, tscale)
    return _probe(space, [(p.e1, p.e2) for p in planes], "ip", kind, cfg, {"redraws": redraws})


PROBES: dict[str, Callable] = {"osserman": osserman_probe, "ip": ip_probe}


def point_scale(frame) -> float:
    """Zero-operator scale for the Weyl tensor at a chart point."""
    return max(tensor_scale(frame.weyl), tensor_scale(frame.riemann))


def conformal_probe(gf: MetricField, prop: str, kind: str, cfg: ProbeConfig = ProbeConfig()) -> ProbeVerdict:
    """Run a probe on the Weyl tensor at each sampled chart point.

    The reference fingerprint may differ from point to point; the verdict
    holds iff every per-point verdict holds. Operators are measured against
    the size of the full curvature tensor at the point, so a Weyl tensor
    that is pure round-off fingerprints as zero.
    """
    probe = PROBES[prop]
    points = sample_points(gf, cfg.n_points, cfg.rng(_POINTS))

    def at(item):
        idx, x = item
        frame = riemann_at(gf, x)
        return probe(frame.weyl, kind, cfg, key=(idx,), tscale=point_scale(frame))

    items = list(enumerate(points))
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            verdicts = list(pool.map(at, items))
    else:
        verdicts = [at(it) for it in items]

    witnesses = []
    per_point = []
    records = []
    for (idx, x), v in zip(items, verdicts):
        records.extend(({"point": x.tolist(), **s}, fp) for s, fp in v.records)
        per_point.append(
            {
                "point": x.tolist(),
                "holds": v.holds_label,
                "reference": v.reference.to_dict() if v.reference else None,
            }
        )
        for w in v.witnesses:
            witnesses.append({"point": x.tolist(), **w})
    labels = [v.holds for v in verdicts]
    if any(h is False for h in labels):
        holds = False
    elif any(h is None for h in labels):
        holds = None
    else:
        holds = True
    stats = {"points": len(points), "per_point": per_point}
    return ProbeVerdict(f"conformal_{prop}", kind, holds, verdicts[0].reference, witnesses, stats, records)


def recheck_witness(A: CurvatureTensor, witness: dict, cfg: ProbeConfig, tscale: float | None = None) -> bool:
    """Recompute both fingerprints of a stored witness; True iff they still differ."""

    def fp(sample):
        if "vector" in sample:
            return jacobi_fingerprint(A, np.array(sample["vector"]), cfg, tscale)
        return skew_fingerprint(A, np.array(sample["e1"]), np.array(sample["e2"]), cfg, tscale)

    return not jordan_equal(fp(witness["sample"]), fp(witness["reference_sample"]), cfg.eig_tol)


def with_overrides(cfg: ProbeConfig, **kw) -> ProbeConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
