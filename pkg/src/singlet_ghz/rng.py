"""Counter-based random numbers.

Every uniform variate is a pure function of ``(seed, index, tag)``, so any
partition of trial indices across workers draws exactly the same numbers.
The mixing function is the SplitMix64 finalizer applied twice.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TAG_SALT = np.uint64(0xD1B54A32D192ED03)

# purpose tags
DETECT_1 = 1
DETECT_2 = 2
OUTCOME = 3
ASSIGNMENT = 4

MAX_SEED = 2**64 - 1


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def counter_uniform(seed: int, index, tag: int) -> np.ndarray:
    """Uniform floats in [0, 1) keyed by ``(seed, index, tag)``.

    ``index`` may be a scalar or an integer array; the result always has
    the shape of ``np.atleast_1d(index)``.
    """
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    idx = np.atleast_1d(np.asarray(index)).astype(np.uint64)
    with np.errstate(over="ignore"):
        key = _mix64(np.atleast_1d(np.uint64(seed)) ^ (np.uint64(tag) * _TAG_SALT))
        z = _mix64(key + (idx + np.uint64(1)) * _GOLDEN)
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


class TrialStream:
    """Scalar view of the counter stream for one trial index."""

    def __init__(self, seed: int, trial_index: int):
        self.seed = int(seed)
        self.trial_index = int(trial_index)

    def uniform(self, tag: int) -> float:
        return float(counter_uniform(self.seed, self.trial_index, tag)[0])

    def random(self) -> float:
        # lets a TrialStream stand in where a Generator-like ``random()`` is expected
        return self.uniform(OUTCOME)

    def __repr__(self) -> str:
        return f"TrialStream(seed={self.seed}, trial_index={self.trial_index})"
