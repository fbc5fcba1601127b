"""Postselected GHZ-type test of local hidden variables on a two-particle singlet."""

from .engine import ExperimentConfig, RunRecord, RunTable, Setting, pair_events, run_trial, run_trials, schedule
from .hvcore import (
    Assignment,
    NoncontextualModel,
    enumerate_assignments,
    ghz_consistency_count,
    hv_expectation_st,
    simulate_hv_experiment,
    st_product_check,
)
from .qcore import (
    GHZ_A, GHZ_B, GHZ_C, GHZ_D, Q, Q_PRIME, R, R_PRIME,
    PauliObservable, PureState, expectation, joint_outcome_distribution,
    make_ghz, make_singlet, sample_joint,
)
from .select import STEstimate, Verdict, check_bound, select_T, st_estimate

__version__ = "0.1.0"
