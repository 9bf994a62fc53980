import numpy as np
import pytest
from dataclasses import replace

from weyl_spectra.curvature import CurvatureTensor, build_a_phi, build_constant_curvature, random_curvature, weyl_project
from weyl_spectra.families import resolve_family
from weyl_spectra.linalg import InnerProduct, inner
from weyl_spectra.probes import (
    ProbeConfig,
    conformal_probe,
    ip_probe,
    jacobi_fingerprint,
    osserman_probe,
    recheck_witness,
    sample_planes,
    sample_pseudo_sphere,
)


@pytest.mark.parametrize("p,q", [(0, 4), (1, 3), (2, 2), (3, 5)])
def test_pseudo_sphere_samples_are_unit(p, q, small_cfg):
    g = InnerProduct.standard(p, q)
    for kind, sign in (("spacelike", 1.0), ("timelike", -1.0)):
        if (sign > 0 and q == 0) or (sign < 0 and p == 0):
            continue
        V, accept = sample_pseudo_sphere(g, kind, small_cfg)
        assert V.shape == (small_cfg.n_vectors, p + q)
        assert np.allclose(np.einsum("ij,jk,ik->i", V, g.gram, V), sign, atol=1e-12)
        assert 0 < accept <= 1


def test_neutral_acceptance_fraction_is_recorded():
    cfg = ProbeConfig(n_vectors=200)
    V, accept = sample_pseudo_sphere(InnerProduct.standard(2, 2), "timelike", cfg)
    assert 0.2 < accept < 0.8
    assert np.allclose(np.einsum("ij,jk,ik->i", V, np.diag([-1.0, -1, 1, 1]), V), -1)


def test_no_timelike_vectors_in_definite_signature(small_cfg):
    with pytest.raises(ValueError):
        sample_pseudo_sphere(InnerProduct.euclidean(3), "timelike", small_cfg)
    with pytest.raises(ValueError):
        sample_planes(InnerProduct.standard(1, 3), "timelike", small_cfg)


@pytest.mark.parametrize("p,q", [(0, 4), (2, 3), (3, 3)])
def test_planes_are_orthonormal(p, q, small_cfg):
    g = InnerProduct.standard(p, q)
    for kind, sign in (("spacelike", 1.0), ("timelike", -1.0)):
        if (q if sign > 0 else p) < 2:
            continue
        planes, _ = sample_planes(g, kind, small_cfg)
        for pl in planes:
            G = np.array([[inner(g, a, b) for b in (pl.e1, pl.e2)] for a in (pl.e1, pl.e2)])
            assert np.allclose(G, sign * np.eye(2), atol=1e-10)


def test_sampling_is_deterministic(small_cfg):
    g = InnerProduct.standard(1, 3)
    a, _ = sample_pseudo_sphere(g, "spacelike", small_cfg)
    b, _ = sample_pseudo_sphere(g, "spacelike", small_cfg)
    c, _ = sample_pseudo_sphere(g, "spacelike", replace(small_cfg, seed=1))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_zero_tensor_properties_hold(small_cfg):
    A = CurvatureTensor.zero(InnerProduct.standard(1, 3))
    for probe in (osserman_probe, ip_probe):
        v = probe(A, "spacelike", small_cfg)
        assert v.holds is True
        assert v.reference.overall_rank_chain[0] == 0


def test_constant_curvature_is_osserman(small_cfg):
    A = build_constant_curvature(1.0, InnerProduct.standard(1, 3))
    for kind in ("spacelike", "timelike"):
        assert osserman_probe(A, kind, small_cfg).holds is True


def test_generic_weyl_tensor_is_not_osserman(small_cfg):
    A = weyl_project(random_curvature(InnerProduct.euclidean(4), np.random.default_rng(7)))
    v = osserman_probe(A, "spacelike", small_cfg)
    assert v.holds is False
    assert v.witnesses
    assert all(recheck_witness(A, w, small_cfg) for w in v.witnesses)


def test_verdict_is_invariant_under_scaling(small_cfg):
    A = weyl_project(random_curvature(InnerProduct.standard(1, 4), np.random.default_rng(2)))
    base = osserman_probe(A, "spacelike", small_cfg)
    for c in (0.5, 3.0):
        v = osserman_probe(c * A, "spacelike", small_cfg)
        assert v.holds == base.holds
        assert v.reference.overall_rank_chain == base.reference.overall_rank_chain


def test_ip_probe_on_definite_a_phi(small_cfg):
    # A_phi with phi = Id has skew operators of rank 2 on every plane
    A = build_a_phi(np.eye(5), InnerProduct.euclidean(5))
    v = ip_probe(A, "spacelike", small_cfg)
    assert v.holds is True
    assert v.reference.overall_rank_chain[:2] == (2, 2)


def test_fingerprint_relabeling_invariance():
    # permuting coordinates does not change fingerprints at corresponding vectors
    cfg = ProbeConfig()
    g = InnerProduct.standard(1, 3)
    A = weyl_project(random_curvature(g, np.random.default_rng(4)))
    perm = [0, 2, 3, 1]
    P = np.eye(4)[perm]
    B = CurvatureTensor(np.einsum("ai,bj,ck,dl,ijkl->abcd", P, P, P, P, A.components), g)
    v = np.array([0.3, 1.1, -0.4, 0.5])
    v = v / np.sqrt(inner(g, v, v))
    fa = jacobi_fingerprint(A, v, cfg)
    fb = jacobi_fingerprint(B, P @ v, cfg)
    assert fa.overall_rank_chain == fb.overall_rank_chain
    assert np.allclose([c for c, _ in fa.clusters], [c for c, _ in fb.clusters])


def test_conformal_probe_records_points(small_cfg):
    v = conformal_probe(resolve_family("gf:p=2,f=sum_sq"), "osserman", "spacelike", small_cfg)
    assert v.stats["points"] == small_cfg.n_points
    assert len(v.records) == small_cfg.n_points * small_cfg.n_vectors
    assert all("point" in s for s, _ in v.records)


def test_conformal_probe_on_flat_space_holds(small_cfg):
    v = conformal_probe(resolve_family("rescale:alpha=exp_x1@flat:m=4,p=1"), "osserman", "timelike", small_cfg)
    assert v.holds is True


def test_config_rejects_non_positive():
    with pytest.raises(ValueError):
        ProbeConfig(n_vectors=0)
