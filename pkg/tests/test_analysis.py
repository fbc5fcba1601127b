import math

import pytest

from singlet_ghz.analysis import CorrelationEstimates, chsh, summarize
from singlet_ghz.engine import ExperimentConfig
from singlet_ghz.experiments import run_enumeration, run_ghz, run_hv, run_singlet


@pytest.mark.parametrize("means, value, satisfied", [
    ((-1, -1, 0, 0), 2.0, True),
    ((0, 0, 0, 0), 0.0, True),
    ((-1, -1, -0.7, 0.7), 3.4, False),
])
def test_chsh_examples(means, value, satisfied):
    result = chsh(CorrelationEstimates(*means))
    assert result.value == pytest.approx(value, abs=1e-12)
    assert result.satisfied is satisfied


def test_chsh_error_allowance():
    est = CorrelationEstimates(-1, -1, -0.02, 0.0, se_Q=0.01)
    assert chsh(est).std_error == pytest.approx(0.01)
    assert chsh(est).satisfied  # 2.02 <= 2 + 3 * 0.01


def test_correlation_range():
    with pytest.raises(ValueError):
        CorrelationEstimates(-1.1, 0, 0, 0)


def test_ghz_report():
    report = summarize([run_ghz(ExperimentConfig(2000, seed=4))])
    assert report.kind == "ghz"
    means = [report.quantity(f"product_mean_{k}").value for k in "ABCD"]
    assert means == [1.0, 1.0, 1.0, -1.0]
    assert report.verdicts["ghz_deterministic"] is True


def test_enumeration_report():
    report = summarize([run_enumeration()])
    assert report.enumeration["ghz_satisfying_count"] == 0
    assert report.enumeration["ghz_assignments"] == 64
    assert report.enumeration["ghz_all_plus_count"] == 8
    assert report.verdicts["st_all_products_one"] is True


def test_empty_report():
    report = summarize([])
    assert report.status == "insufficient-data"


def test_singlet_report_shows_both_claims():
    report = summarize([run_singlet("ideal", ExperimentConfig(20_000, seed=1))])
    assert report.verdicts["chsh_satisfied"] is True
    assert report.quantity("st_value").value == -1.0
    assert report.verdicts["st_bound"] == "QUANTUM_VIOLATION"
    assert report.quantity("mean_R").value == -1.0
    assert not report.notes


def test_detector_report_flags_chsh():
    report = summarize([run_singlet("chsh", ExperimentConfig(2000, eta=0.5, seed=1))])
    assert any("eta < 1" in n for n in report.notes)


def test_hv_report_side_by_side():
    report = summarize([run_hv(ExperimentConfig(50_000, eta=1.0, seed=2))])
    assert report.quantity("quantum_st_value").value == -1.0
    assert report.quantity("hv_st_value").value == 1.0
    assert report.verdicts["quantum_st_bound"] == "QUANTUM_VIOLATION"
    assert report.verdicts["hv_st_bound"] == "HV_CONSISTENT"
    # uniform model through the factorized estimator: -(1/2)(1/2)(1)
    q = report.quantity("hv_st_factorized")
    assert abs(q.value + 0.25) <= 3 * q.std_error + 1e-12


def test_report_is_pure():
    config = ExperimentConfig(3000, eta=0.7, seed=9)
    a = summarize([run_singlet("detector", config)]).to_dict()
    b = summarize([run_singlet("detector", config)]).to_dict()
    assert a == b
