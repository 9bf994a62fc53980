import pytest

from weyl_spectra.probes import ProbeConfig
from weyl_spectra.verify import JOBS, verify_theorems

FAST = ProbeConfig(n_vectors=20, n_planes=20, n_points=2)


@pytest.mark.parametrize("job", ["T2.1", "T2.2", "T3.1", "T3.2"])
def test_algebraic_jobs_pass(job):
    (res,) = verify_theorems(FAST, [job])
    d = res.to_dict()
    assert d["verdict"] == "pass", d["measured"]
    assert d["job"] == job and d["samples"] > 0


def test_worked_examples():
    t22, t31 = verify_theorems(FAST, ["T2.2", "T3.1"])
    assert t22.measured["example"]["trace"] == pytest.approx(8.0)
    assert t31.measured["worked_example"]["trace_e_plus"] == pytest.approx(0.0, abs=1e-12)
    assert t31.measured["sum_of_trace_coefficients"] == [-2]
    assert t31.measured["constrained_a1_1_a2_m2"]["rho_e1e1"] == pytest.approx(3.0)


def test_unknown_job():
    with pytest.raises(KeyError):
        verify_theorems(FAST, ["T9.9"])


def test_default_run_passes():
    results = verify_theorems(ProbeConfig(workers=4))
    assert [r.job for r in results] == list(JOBS)
    failed = {r.job: r.measured for r in results if not r.passed}
    assert not failed
