"""Postselection of T events and the estimators of the postselected ST value.

Two estimators are provided:

``factorized``
    ``-P(R=-1) * P(R'=-1) * P(T=-1)``, each probability estimated
    separately.  R and R' denominators count every run (non-detections
    included); the T denominator is the kept T ensemble.
``paired``
    the direct mean of ``S_k * T_k`` over pair ranks ``k`` whose T event was
    kept, with zero-valued events counted in the denominator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .engine import EventKind, EventTable, RunTable, Setting
from .errors import InsufficientDataError, KindError

SIGMA_THRESHOLD = 3.0


@dataclass
class SelectedEnsemble:
    kept_S: EventTable
    kept_T: EventTable
    dropped_T_plus: int = 0


def select_source_quality(events: EventTable) -> EventTable:
    """Hook for selecting runs by source correlation quality.

    The simulated source is an exact singlet, so nothing is removed.
    """
    return events


def select_T(t_events: EventTable, s_events: EventTable | None = None) -> SelectedEnsemble:
    """Keep T events with value -1 or 0 and drop those with value +1.

    S events, if given, pass through unchanged.
    """
    if len(t_events) and np.any(t_events.kind != int(EventKind.T)):
        raise KindError("select_T only accepts T events")
    keep = t_events.value != 1
    if s_events is None:
        s_events = t_events[np.zeros(len(t_events), dtype=bool)]
    return SelectedEnsemble(s_events, t_events[keep], int(np.count_nonzero(~keep)))


def no_selection(events: EventTable) -> SelectedEnsemble:
    return SelectedEnsemble(events.of_kind(EventKind.S), events.of_kind(EventKind.T), 0)


@dataclass(frozen=True)
class Tally:
    """Integer counts sufficient for every estimator; tallies add up across partitions.

    ``setting_*`` tuples are indexed by :class:`Setting`.
    """

    setting_n: tuple[int, int, int, int] = (0, 0, 0, 0)
    setting_plus: tuple[int, int, int, int] = (0, 0, 0, 0)
    setting_minus: tuple[int, int, int, int] = (0, 0, 0, 0)
    s_plus: int = 0
    s_minus: int = 0
    s_zero: int = 0
    t_kept_minus: int = 0
    t_kept_zero: int = 0
    t_dropped_plus: int = 0
    t_kept_plus: int = 0
    paired_sum: int = 0
    paired_nonzero: int = 0

    def __add__(self, other: "Tally") -> "Tally":
        merged = {}
        for f in fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            merged[f.name] = tuple(x + y for x, y in zip(a, b)) if isinstance(a, tuple) else a + b
        return Tally(**merged)

    @property
    def t_kept(self) -> int:
        return self.t_kept_minus + self.t_kept_zero + self.t_kept_plus

    @classmethod
    def from_tables(cls, runs: RunTable, ensemble: SelectedEnsemble) -> "Tally":
        product = runs.product
        n, plus, minus = [], [], []
        for s in Setting:
            p = product[runs.setting == int(s)]
            n.append(len(p))
            plus.append(int(np.count_nonzero(p == 1)))
            minus.append(int(np.count_nonzero(p == -1)))
        s_val = ensemble.kept_S.value
        t_val = ensemble.kept_T.value
        paired = _paired_values(ensemble)
        return cls(
            setting_n=tuple(n),
            setting_plus=tuple(plus),
            setting_minus=tuple(minus),
            s_plus=int(np.count_nonzero(s_val == 1)),
            s_minus=int(np.count_nonzero(s_val == -1)),
            s_zero=int(np.count_nonzero(s_val == 0)),
            t_kept_minus=int(np.count_nonzero(t_val == -1)),
            t_kept_zero=int(np.count_nonzero(t_val == 0)),
            t_kept_plus=int(np.count_nonzero(t_val == 1)),
            t_dropped_plus=ensemble.dropped_T_plus,
            paired_sum=int(paired.sum()),
            paired_nonzero=int(np.count_nonzero(paired)),
        )


def _paired_values(ensemble: SelectedEnsemble) -> np.ndarray:
    """``S_k * T_k`` for each kept T event, joined to the S event of the same rank."""
    t = ensemble.kept_T
    if not len(t):
        return np.zeros(0, dtype=np.int64)
    s = ensemble.kept_S
    lookup = np.zeros(max(int(s.pair_index.max(initial=-1)), int(t.pair_index.max())) + 1, dtype=np.int64)
    lookup[s.pair_index] = s.value
    return lookup[t.pair_index] * t.value.astype(np.int64)


def estimate_probabilities(runs: RunTable, ensemble: SelectedEnsemble) -> tuple[float, float, float]:
    return probabilities_from_tally(Tally.from_tables(runs, ensemble))


def probabilities_from_tally(tally: Tally) -> tuple[float, float, float]:
    n_r, n_rp = tally.setting_n[Setting.R], tally.setting_n[Setting.R_PRIME]
    if n_r == 0 or n_rp == 0:
        raise InsufficientDataError("no R or R' runs to estimate from")
    if tally.t_kept == 0:
        raise InsufficientDataError("no kept T events")
    return (
        tally.setting_minus[Setting.R] / n_r,
        tally.setting_minus[Setting.R_PRIME] / n_rp,
        tally.t_kept_minus / tally.t_kept,
    )


@dataclass(frozen=True)
class STEstimate:
    """Estimate of the postselected ST value.

    For ``method == "factorized"``, ``st_value == -p_R_minus * p_Rp_minus * p_T_minus``.
    """

    p_R_minus: float
    p_Rp_minus: float
    p_T_minus: float
    st_value: float
    standard_error: float
    counts: dict = field(default_factory=dict)
    method: str = "factorized"


def _binomial_var(p: float, n: int | None) -> float:
    if not n:
        return 0.0
    return p * (1.0 - p) / n


def st_estimate(probs: tuple[float, float, float], counts: tuple[int, int, int] | None = None) -> STEstimate:
    """Combine the three probabilities; the error is first-order (delta method).

    ``counts`` are the denominators ``(n_R, n_R', n_T_kept)``.  Without them
    the probabilities are treated as exact and the error is zero.
    """
    p1, p2, p3 = (float(p) for p in probs)
    for p in (p1, p2, p3):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability out of range: {p}")
    n1, n2, n3 = counts if counts is not None else (None, None, None)
    var = (
        (p2 * p3) ** 2 * _binomial_var(p1, n1)
        + (p1 * p3) ** 2 * _binomial_var(p2, n2)
        + (p1 * p2) ** 2 * _binomial_var(p3, n3)
    )
    st = -(p1 * p2 * p3)
    return STEstimate(
        p1, p2, p3, st + 0.0, math.sqrt(var),
        counts={} if counts is None else {"R": n1, "R'": n2, "T_kept": n3},
    )


def st_from_tally(tally: Tally) -> STEstimate:
    probs = probabilities_from_tally(tally)
    est = st_estimate(
        probs, (tally.setting_n[Setting.R], tally.setting_n[Setting.R_PRIME], tally.t_kept)
    )
    counts = dict(est.counts, T_dropped_plus=tally.t_dropped_plus)
    return STEstimate(est.p_R_minus, est.p_Rp_minus, est.p_T_minus, est.st_value,
                      est.standard_error, counts)


def paired_st_from_tally(tally: Tally) -> STEstimate:
    """Direct mean of ``S_k T_k`` over kept pairs; 0 when nothing was kept."""
    n = tally.t_kept
    try:
        p1, p2, p3 = probabilities_from_tally(tally)
    except InsufficientDataError:
        p1 = p2 = p3 = 0.0
    if n == 0:
        mean = se = 0.0
    else:
        mean = tally.paired_sum / n
        var = max(tally.paired_nonzero / n - mean * mean, 0.0)
        se = math.sqrt(var / n)
    counts = {
        "R": tally.setting_n[Setting.R],
        "R'": tally.setting_n[Setting.R_PRIME],
        "T_kept": n,
        "T_dropped_plus": tally.t_dropped_plus,
    }
    return STEstimate(p1, p2, p3, mean, se, counts, method="paired")


class Verdict(str, enum.Enum):
    QUANTUM_VIOLATION = "QUANTUM_VIOLATION"
    HV_CONSISTENT = "HV_CONSISTENT"
    INVALID = "INVALID"


@dataclass(frozen=True)
class BoundCheck:
    verdict: Verdict
    satisfies_upper_limit: bool  # st_value <= 0
    in_range: bool
    threshold: float


def check_bound(est: STEstimate, sigmas: float = SIGMA_THRESHOLD) -> BoundCheck:
    """Compare an ST estimate with the non-negative hidden-variable bound.

    A value more than ``sigmas`` standard errors below zero is a violation.
    A factorized estimate outside [-1, 0] breaks its own construction and
    is reported as INVALID.
    """
    hi = 0.0 if est.method == "factorized" else 1.0
    in_range = -1.0 <= est.st_value <= hi
    threshold = -sigmas * est.standard_error
    if not in_range:
        verdict = Verdict.INVALID
    elif est.st_value < threshold:
        verdict = Verdict.QUANTUM_VIOLATION
    else:
        verdict = Verdict.HV_CONSISTENT
    return BoundCheck(verdict, est.st_value <= 0.0, in_range, threshold)
