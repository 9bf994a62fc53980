"""Random sweep over Weyl parts of single-generator curvature tensors.

Each trial draws a signature and a self-adjoint generator ``phi`` of one of
three types (``phi^2 = Id``, ``phi^2 = -Id``, ``phi^2 = 0``), forms the Weyl
part of ``A_phi`` and probes it. Two kinds of noteworthy outcomes are
logged:

* candidates: the spacelike Ivanov-Petrova probe holds, ``W != 0`` and the
  reference skew operator is not nilpotent;
* Riemannian inconsistencies: definite signature, ``m`` not 3 or 7, the
  probe holds and ``W != 0``.

An empty log means no counterexample was found at the sampled resolution.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .curvature import build_a_phi, weyl_project
from .linalg import InnerProduct, random_isometry
from .probes import ProbeConfig, ip_probe, osserman_probe

TYPES = ("isometry", "para_isometry", "nilpotent")
_EXPLORE = 11
# per-trial sample counts; the sweep trades resolution for breadth
TRIAL_SAMPLES = 24


def _generator(kind: str, g: InnerProduct, rng: np.random.Generator) -> np.ndarray:
    m, p, q = g.m, g.signature.p, g.signature.q
    L = random_isometry(g, rng)
    Linv = np.linalg.inv(L)
    if kind == "isometry":
        d = rng.choice([-1.0, 1.0], size=m)
        return L @ np.diag(d) @ Linv
    if kind == "para_isometry":
        n = p
        I, Z = np.eye(n), np.zeros((n, n))
        # g = diag(-I, I) here; J swaps the blocks up to sign and is self-adjoint
        J = np.block([[Z, I], [-I, Z]])
        return L @ J @ Linv
    k = int(rng.integers(1, min(p, q) + 1))
    N = np.zeros((m, k))
    for i in range(k):
        N[i, i] = 1.0
        N[p + i, i] = 1.0
    N = L @ N
    C = rng.standard_normal((k, k))
    return N @ (C + C.T) / 2 @ N.T @ g.gram


def _signature(kind: str, rng: np.random.Generator) -> tuple[int, int]:
    if kind == "para_isometry":
        n = int(rng.integers(2, 4))
        return n, n
    m = int(rng.integers(4, 8))
    if kind == "nilpotent":
        p = int(rng.integers(1, m - 1))
    else:
        p = int(rng.integers(0, m - 1))
    return p, m - p


def explore_conjectures(cfg: ProbeConfig = ProbeConfig(), trials: int = 60) -> dict:
    probe_cfg = replace(
        cfg,
        n_vectors=min(cfg.n_vectors, TRIAL_SAMPLES),
        n_planes=min(cfg.n_planes, TRIAL_SAMPLES),
        n_search=0,
    )
    summary = {t: {"trials": 0, "weyl_zero": 0, "ip_holds": 0, "ip_nilpotent": 0, "osserman_holds": 0} for t in TYPES}
    candidates = []
    inconsistencies = []
    for trial in range(trials):
        rng = cfg.rng(_EXPLORE, trial)
        kind = TYPES[trial % len(TYPES)]
        p, q = _signature(kind, rng)
        g = InnerProduct.standard(p, q)
        phi = _generator(kind, g, rng)
        lam = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0))
        A = lam * build_a_phi(phi, g)
        W = weyl_project(A)
        row = summary[kind]
        row["trials"] += 1
        zero = W.max_abs() <= 1e-10 * max(1.0, A.max_abs())
        row["weyl_zero"] += zero
        if zero:
            continue
        iv = ip_probe(W, "spacelike", probe_cfg, key=(_EXPLORE, trial))
        ov = osserman_probe(W, "spacelike", probe_cfg, key=(_EXPLORE, trial))
        nilpotent = iv.reference is not None and iv.reference.is_nilpotent
        row["ip_holds"] += iv.holds is True
        row["ip_nilpotent"] += iv.holds is True and nilpotent
        row["osserman_holds"] += ov.holds is True
        entry = {
            "trial": trial,
            "type": kind,
            "signature": [p, q],
            "lambda": round(lam, 12),
            "ip_reference": iv.reference.to_dict() if iv.reference else None,
        }
        if iv.holds is True and not nilpotent:
            candidates.append(entry)
        if iv.holds is True and p == 0 and g.m not in (3, 7):
            inconsistencies.append(entry)
    return {
        "trials": trials,
        "seed": cfg.seed,
        "samples_per_trial": TRIAL_SAMPLES,
        "by_type": summary,
        "nilpotency_candidates": candidates,
        "riemannian_inconsistencies": len(inconsistencies),
        "riemannian_inconsistency_log": inconsistencies,
        "finding": (
            "no counterexample found"
            if not candidates and not inconsistencies
            else f"{len(candidates) + len(inconsistencies)} candidate(s) logged for closer inspection"
        ),
    }
