"""Exit criteria, each at its stated tolerance."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from oracles import detector_protocol_values
from singlet_ghz.analysis import CorrelationEstimates, chsh, summarize
from singlet_ghz.cli import main, to_csv, to_json
from singlet_ghz.engine import ExperimentConfig, Setting, run_trials
from singlet_ghz.experiments import run_enumeration, run_ghz, run_hv, run_singlet
from singlet_ghz.hvcore import (
    NoncontextualModel,
    ghz_consistency_count,
    hv_expectation_st,
    simulate_hv_experiment,
    st_product_check,
)
from singlet_ghz.pipeline import run_quantum
from singlet_ghz.qcore import GHZ_A, GHZ_B, GHZ_C, GHZ_D, OutcomeSampler, make_ghz, make_singlet
from singlet_ghz.rng import OUTCOME, counter_uniform
from singlet_ghz.select import Verdict, check_bound, paired_st_from_tally, st_from_tally


def record(log, n, name, ok, detail=""):
    log.append(f"criterion {n} [{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


def test_criterion_1_ghz_determinism(acceptance_log):
    n = 100_000
    t0 = time.perf_counter()
    state = make_ghz()
    ok = True
    for k, (obs, expected) in enumerate(((GHZ_A, 1), (GHZ_B, 1), (GHZ_C, 1), (GHZ_D, -1))):
        u = counter_uniform(42, np.arange(k * n, (k + 1) * n), OUTCOME)
        ok &= bool(np.all(OutcomeSampler(state, obs).sample(u).prod(axis=1) == expected))
    result = run_ghz(ExperimentConfig(n, seed=42))
    for label, expected in (("A", 1), ("B", 1), ("C", 1), ("D", -1)):
        count, plus, minus = result.products[label]
        ok &= count == n and (plus if expected == 1 else minus) == n
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5
    assert record(acceptance_log, 1, "GHZ determinism", ok,
                  f"1e5 samples each of A,B,C=+1 and D=-1 exact, {elapsed:.2f}s")


def test_criterion_2_exhaustive_hv_contradiction(acceptance_log):
    t0 = time.perf_counter()
    ghz = ghz_consistency_count()
    st = st_product_check()
    elapsed = time.perf_counter() - t0
    ok = ghz.satisfying_count == 0 and ghz.abcd_product_always_one and st.all_equal \
        and st.all_products_one and elapsed < 1
    assert record(acceptance_log, 2, "exhaustive HV contradiction", ok,
                  f"satisfying={ghz.satisfying_count}/64, ABCD=+1 always={ghz.abcd_product_always_one}, "
                  f"v(S)=v(T) and v(S)v(T)=+1 over 16={st.all_equal and st.all_products_one}, {elapsed:.3f}s")


@pytest.fixture(scope="module")
def ideal_runs():
    n = 100_000
    return n, run_trials(make_singlet(), 1.0, 2024, 0, 4 * n)


def test_criterion_3_ideal_postselected_singlet(acceptance_log, ideal_runs):
    n, runs = ideal_runs
    rr = runs.product[(runs.setting == Setting.R) | (runs.setting == Setting.R_PRIME)]
    ok = bool(np.all(rr == -1))
    exact = all(st_from_tally(run_quantum(ExperimentConfig(k, seed=k))).st_value == -1.0
                for k in (1, 2, 3, 10, 1000))
    tally = run_quantum(ExperimentConfig(n, seed=2024))
    est = st_from_tally(tally)
    kept = tally.t_kept / n
    sigma = math.sqrt(0.25 / n)
    ok &= exact and est.st_value == -1.0 and abs(kept - 0.5) <= 3 * sigma
    assert record(acceptance_log, 3, "ideal postselected singlet", ok,
                  f"R,R' products all -1; st=-1 exactly for trials 1..1e5; "
                  f"kept-T fraction {kept:.5f} ({(kept - 0.5) / sigma:+.2f} sigma)")


def test_criterion_4_chsh_boundary(acceptance_log):
    n = 100_000
    tally = run_quantum(ExperimentConfig(n, seed=2024))
    corr = CorrelationEstimates.from_tally(tally)
    targets = (-1.0, -1.0, 0.0, 0.0)
    ok = all(abs(m - t) <= 3 * s for m, t, s in zip(corr.means, targets, corr.std_errors))
    c = chsh(corr)
    ok &= abs(c.value - 2.0) <= 3 * c.std_error and c.satisfied
    # the same data also gives the postselected contradiction
    st = st_from_tally(tally)
    ok &= st.st_value == -1.0 and check_bound(st).verdict is Verdict.QUANTUM_VIOLATION
    assert record(acceptance_log, 4, "CHSH boundary", ok,
                  "means=" + ",".join(f"{m:+.4f}" for m in corr.means)
                  + f"; CHSH={c.value:.4f}+-{c.std_error:.4f} satisfied={c.satisfied}; "
                  f"same data st={st.st_value}")


def test_criterion_5_detector_limited_st(acceptance_log):
    eta, n = 0.5, 10_000_000
    closed = float(detector_protocol_values(Fraction(1, 2))[3])
    eta4 = eta**4
    assert closed == pytest.approx(-eta4 * (eta4 / 2) / (1 - eta4 / 2), rel=1e-15)
    t0 = time.perf_counter()
    est = st_from_tally(run_quantum(ExperimentConfig(n, eta=eta, seed=7)))
    elapsed = time.perf_counter() - t0
    eta8_order = -(eta**2) ** 4
    within = abs(est.st_value - closed) <= 3 * est.standard_error
    negative = est.st_value < -3 * est.standard_error
    same_order = abs(math.log10(est.st_value / eta8_order)) < 1
    ok = within and negative and same_order and elapsed < 60
    assert record(acceptance_log, 5, "detector-limited ST", ok,
                  f"st={est.st_value:.6e}+-{est.standard_error:.2e} vs closed form {closed:.6e} "
                  f"({(est.st_value - closed) / est.standard_error:+.2f} sigma); "
                  f"{-est.st_value / est.standard_error:.0f} sigma below 0; "
                  f"ratio to -(eta^2)^4 = {est.st_value / eta8_order:.3f}; {elapsed:.1f}s")


def test_criterion_6_hv_positivity(acceptance_log):
    rng = np.random.default_rng(6)
    exact = all(
        hv_expectation_st(NoncontextualModel.from_weights(
            rng.dirichlet(np.full(16, rng.uniform(0.05, 5))), detection_probability=rng.uniform())) >= 0
        for _ in range(1000)
    )
    worst = math.inf
    ok_sim = True
    for eta in (0.5, 1.0):
        for seed in range(20):
            w = np.random.default_rng(seed).dirichlet(np.ones(16))
            for model in (NoncontextualModel.uniform(), NoncontextualModel.from_weights(w)):
                est = simulate_hv_experiment(model, ExperimentConfig(20_000, eta=eta, seed=seed))
                worst = min(worst, _z(est))
                ok_sim &= est.st_value >= -3 * est.standard_error
    ok = exact and ok_sim
    assert record(acceptance_log, 6, "HV positivity", ok,
                  f"1000 random models >= 0: {exact}; 80 simulations, lowest z = {worst:.2f}")


def _z(est):
    if est.standard_error > 0:
        return est.st_value / est.standard_error
    return math.inf if est.st_value > 0 else 0.0


def _reports(threads, chunk):
    out = []
    config = ExperimentConfig(30_000, eta=0.7, seed=99)
    for result in (run_ghz(config, threads, chunk), run_singlet("detector", config, threads, chunk),
                   run_hv(config, "uniform", threads, chunk), run_enumeration()):
        report = summarize([result])
        out.append(to_json(report).encode() + to_csv(report).encode())
    return out


def test_criterion_7_reproducibility(acceptance_log, tmp_path):
    single = _reports(1, 4 * 2**18)
    many = _reports(4, 4 * 1000)
    ok = single == many
    outputs = []
    for threads in ("1", "3"):
        path = tmp_path / f"out{threads}.json"
        ok &= main(["detector", "--trials", "600000", "--eta", "0.6", "--seed", "3",
                    "--threads", threads, "--out", str(path)]) == 0
        outputs.append(path.read_bytes())
    ok &= outputs[0] == outputs[1]
    assert record(acceptance_log, 7, "reproducibility across workers", ok,
                  "byte-identical JSON/CSV for 1 vs 4 workers (small chunks) and CLI 1 vs 3 threads")
