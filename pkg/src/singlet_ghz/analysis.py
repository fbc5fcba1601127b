"""CHSH evaluation and report assembly."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .engine import ExperimentConfig, Setting
from .errors import InsufficientDataError
from .experiments import EnumerationResult, GHZResult, HVResult, SingletResult
from .select import (
    SIGMA_THRESHOLD,
    STEstimate,
    Tally,
    check_bound,
    paired_st_from_tally,
    st_from_tally,
)

CHSH_BOUND = 2.0
_MEAN_NAMES = {Setting.R: "mean_R", Setting.R_PRIME: "mean_Rp",
               Setting.Q: "mean_Q", Setting.Q_PRIME: "mean_Qp"}


@dataclass(frozen=True)
class CorrelationEstimates:
    mean_R: float
    mean_Rp: float
    mean_Q: float
    mean_Qp: float
    se_R: float = 0.0
    se_Rp: float = 0.0
    se_Q: float = 0.0
    se_Qp: float = 0.0
    counts: tuple[int, int, int, int] = (0, 0, 0, 0)

    def __post_init__(self):
        for m in (self.mean_R, self.mean_Rp, self.mean_Q, self.mean_Qp):
            if not -1.0 <= m <= 1.0:
                raise ValueError(f"correlation mean {m} outside [-1, 1]")

    @classmethod
    def from_tally(cls, tally: Tally) -> "CorrelationEstimates":
        means, ses = [], []
        for s in Setting:
            n = tally.setting_n[s]
            if n == 0:
                raise InsufficientDataError(f"no {s.label} runs")
            plus, minus = tally.setting_plus[s], tally.setting_minus[s]
            mean = (plus - minus) / n
            # products are in {-1, 0, 1}, so E[x^2] is the nonzero fraction
            var = max((plus + minus) / n - mean * mean, 0.0)
            means.append(mean)
            ses.append(math.sqrt(var / n))
        return cls(*means, *ses, counts=tuple(tally.setting_n))

    @property
    def means(self) -> tuple[float, float, float, float]:
        return (self.mean_R, self.mean_Rp, self.mean_Q, self.mean_Qp)

    @property
    def std_errors(self) -> tuple[float, float, float, float]:
        return (self.se_R, self.se_Rp, self.se_Q, self.se_Qp)


@dataclass(frozen=True)
class ChshResult:
    value: float
    std_error: float
    satisfied: bool


def chsh(est: CorrelationEstimates, sigmas: float = SIGMA_THRESHOLD) -> ChshResult:
    """``|<R> + <R'> + <Q> - <Q'>|`` against the bound 2, with a ``sigmas`` allowance."""
    value = abs(est.mean_R + est.mean_Rp + est.mean_Q - est.mean_Qp)
    se = math.sqrt(sum(s * s for s in est.std_errors))
    return ChshResult(value, se, value <= CHSH_BOUND + sigmas * se)


@dataclass(frozen=True)
class Quantity:
    name: str
    value: float
    std_error: float = 0.0
    count: int = 0


@dataclass
class Report:
    kind: str
    config: dict = field(default_factory=dict)
    quantities: list[Quantity] = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    enumeration: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    status: str = "ok"

    def add(self, name: str, value: float, std_error: float = 0.0, count: int = 0) -> None:
        self.quantities.append(Quantity(name, float(value), float(std_error), int(count)))

    def quantity(self, name: str) -> Quantity:
        for q in self.quantities:
            if q.name == name:
                return q
        raise KeyError(name)

    def to_dict(self) -> dict:
        return asdict(self)


def _config_echo(config: ExperimentConfig) -> dict:
    return {
        "trials": config.trials_per_setting,
        "eta": config.eta,
        "seed": config.seed,
        "state": config.state,
        "selection": config.selection,
    }


def _add_estimate(report: Report, prefix: str, est: STEstimate) -> None:
    report.add(f"{prefix}st_value", est.st_value, est.standard_error, est.counts.get("T_kept", 0))
    report.verdicts[f"{prefix}st_bound"] = check_bound(est).verdict.value
    report.verdicts[f"{prefix}st_upper_limit_satisfied"] = check_bound(est).satisfies_upper_limit


def _add_singlet(report: Report, tally: Tally, eta: float, prefix: str = "") -> None:
    corr = CorrelationEstimates.from_tally(tally)
    for s in Setting:
        report.add(prefix + _MEAN_NAMES[s], corr.means[s], corr.std_errors[s], corr.counts[s])
    for s in Setting:
        n = tally.setting_n[s]
        zeros = n - tally.setting_plus[s] - tally.setting_minus[s]
        f = zeros / n
        report.add(f"{prefix}undetected_fraction_{_MEAN_NAMES[s][5:]}", f, math.sqrt(f * (1 - f) / n), n)
    c = chsh(corr)
    report.add(prefix + "chsh_value", c.value, c.std_error, sum(corr.counts))
    report.verdicts[prefix + "chsh_satisfied"] = c.satisfied
    if eta < 1.0:
        report.notes.append("CHSH at eta < 1 includes non-detections and lies outside the ideal-case claim")

    n_t = tally.t_kept + tally.t_dropped_plus
    kept = tally.t_kept / n_t
    report.add(prefix + "kept_T_fraction", kept, math.sqrt(kept * (1 - kept) / n_t), n_t)
    est = st_from_tally(tally)
    report.add(prefix + "p_R_minus", est.p_R_minus,
               math.sqrt(est.p_R_minus * (1 - est.p_R_minus) / est.counts["R"]), est.counts["R"])
    report.add(prefix + "p_Rp_minus", est.p_Rp_minus,
               math.sqrt(est.p_Rp_minus * (1 - est.p_Rp_minus) / est.counts["R'"]), est.counts["R'"])
    report.add(prefix + "p_T_minus", est.p_T_minus,
               math.sqrt(est.p_T_minus * (1 - est.p_T_minus) / est.counts["T_kept"]), est.counts["T_kept"])
    _add_estimate(report, prefix, est)
    paired = paired_st_from_tally(tally)
    report.add(prefix + "st_paired", paired.st_value, paired.standard_error, paired.counts["T_kept"])


def _summarize_one(report: Report, result) -> None:
    if isinstance(result, GHZResult):
        report.config = _config_echo(result.config)
        deterministic = True
        for label, expected in (("A", 1), ("B", 1), ("C", 1), ("D", -1)):
            n, plus, minus = result.products[label]
            report.add(f"product_mean_{label}", (plus - minus) / n, 0.0, n)
            hits = plus if expected == 1 else minus
            report.add(f"product_agreement_{label}", hits / n, 0.0, n)
            deterministic &= hits == n
        report.verdicts["ghz_deterministic"] = deterministic
    elif isinstance(result, SingletResult):
        report.config = _config_echo(result.config)
        _add_singlet(report, result.tally, result.config.eta)
    elif isinstance(result, HVResult):
        report.config = dict(_config_echo(result.config), model=result.model_name)
        quantum = st_from_tally(result.quantum_tally)
        _add_estimate(report, "quantum_", quantum)
        hv = paired_st_from_tally(result.hv_tally)
        _add_estimate(report, "hv_", hv)
        # the hidden-variable runs pushed through the factorized estimator,
        # for comparison only; it cannot be positive by construction
        try:
            hv_fact = st_from_tally(result.hv_tally)
            report.add("hv_st_factorized", hv_fact.st_value, hv_fact.standard_error,
                       hv_fact.counts["T_kept"])
        except InsufficientDataError:
            report.notes.append("hv factorized estimate undefined: no kept T events")
    elif isinstance(result, EnumerationResult):
        report.enumeration = {
            "ghz_assignments": result.ghz_total,
            "ghz_satisfying_count": result.ghz.satisfying_count,
            "abcd_product_always_one": result.ghz.abcd_product_always_one,
            "ghz_all_plus_count": result.ghz_all_plus_count,
            "st_assignments": result.st_total,
            "st_all_equal": result.st.all_equal,
            "st_all_products_one": result.st.all_products_one,
        }
        report.add("ghz_satisfying_count", result.ghz.satisfying_count, 0.0, result.ghz_total)
        report.add("ghz_all_plus_count", result.ghz_all_plus_count, 0.0, result.ghz_total)
        report.verdicts["ghz_contradiction"] = result.ghz.satisfying_count == 0
        report.verdicts["abcd_product_always_one"] = result.ghz.abcd_product_always_one
        report.verdicts["st_all_equal"] = result.st.all_equal
        report.verdicts["st_all_products_one"] = result.st.all_products_one
    else:
        raise TypeError(f"cannot summarize {type(result).__name__}")


def summarize(results: Sequence, kind: str | None = None) -> Report:
    """Assemble a report; the same results always give an identical report."""
    results = list(results)
    report = Report(kind or _default_kind(results))
    if not results:
        report.status = "insufficient-data"
        report.notes.append("no completed experiment")
        return report
    try:
        for r in results:
            _summarize_one(report, r)
    except InsufficientDataError as exc:
        report.status = "insufficient-data"
        report.notes.append(str(exc))
    _check_ranges(report)
    return report


def _default_kind(results) -> str:
    if not results:
        return "empty"
    r = results[0]
    return {GHZResult: "ghz", HVResult: "hv", EnumerationResult: "enumerate"}.get(
        type(r), getattr(r, "kind", "singlet")
    )


def _check_ranges(report: Report) -> None:
    for q in report.quantities:
        if q.name.startswith(("p_", "kept_", "undetected_", "product_agreement")) and not 0 <= q.value <= 1:
            raise AssertionError(f"probability {q.name}={q.value} outside [0, 1]")
        if "mean" in q.name and not -1 <= q.value <= 1:
            raise AssertionError(f"mean {q.name}={q.value} outside [-1, 1]")
