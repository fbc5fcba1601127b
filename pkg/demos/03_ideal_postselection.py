"""
Ideal detectors on the singlet: CHSH stays at its bound, the selected ST does not.

With eta = 1, R and R' always give -1, Q and Q' are unbiased coins.  The
ensemble averages satisfy |<R> + <R'> + <Q> - <Q'>| <= 2, yet keeping only
the T events with qq' = -1 gives ST = -1 on every selected pair.
"""

from singlet_ghz.analysis import summarize
from singlet_ghz.engine import ExperimentConfig
from singlet_ghz.experiments import run_singlet

report = summarize([run_singlet("ideal", ExperimentConfig(100_000, seed=1))])
for name in ("mean_R", "mean_Rp", "mean_Q", "mean_Qp", "chsh_value", "kept_T_fraction", "st_value"):
    q = report.quantity(name)
    print(f"{name:>16} = {q.value:+.5f} +- {q.std_error:.5f}  (n={q.count})")
print(report.verdicts)
