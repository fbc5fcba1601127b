"""Non-contextual hidden-variable assignments and models.

An :class:`Assignment` fixes a ±1 value for every (particle, axis) pair, the
same value whatever else is measured alongside.  Contextual models are
represented by one assignment per measurement context.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import partial
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np

from . import rng as _rng
from .engine import N_SETTINGS, ExperimentConfig, RunTable, Setting, detections
from .errors import ConfigError, ContextArityError, IncompleteAssignmentError
from .pipeline import CHUNK_TRIALS, run_pipeline
from .qcore import GHZ_A, GHZ_B, GHZ_C, GHZ_D, PauliObservable
from .select import STEstimate, paired_st_from_tally

HV_AXES = ("x", "y")


@dataclass(frozen=True)
class Assignment:
    values: Mapping[tuple[int, str], int]

    def __post_init__(self):
        values = {(int(p), str(a)): int(v) for (p, a), v in dict(self.values).items()}
        if not values:
            raise ValueError("empty assignment")
        for key, v in values.items():
            if v not in (1, -1):
                raise ValueError(f"value for {key} must be +1 or -1, got {v}")
        particles = sorted({p for p, _ in values})
        axes = sorted({a for _, a in values})
        if len(values) != len(particles) * len(axes):
            raise ValueError("assignment must cover a full particle x axis grid")
        object.__setattr__(self, "values", dict(sorted(values.items())))

    @classmethod
    def constant(cls, num_particles: int, value: int = 1, axes: Sequence[str] = HV_AXES):
        return cls({(p, a): value for p in range(num_particles) for a in axes})

    def flipped(self, *keys: tuple[int, str]) -> "Assignment":
        values = dict(self.values)
        for k in keys:
            values[k] = -values[k]
        return Assignment(values)

    def __getitem__(self, key: tuple[int, str]) -> int:
        return self.values[key]

    def __hash__(self):
        return hash(tuple(self.values.items()))

    def __eq__(self, other):
        return isinstance(other, Assignment) and self.values == other.values


def enumerate_assignments(num_particles: int, axes: Sequence[str] = HV_AXES) -> list[Assignment]:
    """All 2**(num_particles * len(axes)) assignments, lexicographic, all-+1 first."""
    if num_particles not in (2, 3):
        raise ValueError("num_particles must be 2 or 3")
    if not axes:
        raise ValueError("need at least one axis")
    grid = [(p, a) for p in range(num_particles) for a in axes]
    return [Assignment(dict(zip(grid, vals)))
            for vals in itertools.product((1, -1), repeat=len(grid))]


def assigned_product(a: Assignment, obs: PauliObservable) -> int:
    out = 1
    for key in obs.factors:
        try:
            out *= a.values[key]
        except KeyError:
            raise IncompleteAssignmentError(f"assignment has no value for {key}") from None
    return out


def contextual_product(contexts: Sequence[Assignment], observables: Sequence[PauliObservable]) -> int:
    """Product over contexts of each context's value for its own observable."""
    if len(contexts) != len(observables):
        raise ContextArityError(
            f"{len(contexts)} contexts given for {len(observables)} observables"
        )
    out = 1
    for a, obs in zip(contexts, observables):
        out *= assigned_product(a, obs)
    return out


def count_assignments(predicate: Callable[[Assignment], bool], num_particles: int = 3) -> int:
    return sum(1 for a in enumerate_assignments(num_particles) if predicate(a))


class GHZCheck(NamedTuple):
    satisfying_count: int
    abcd_product_always_one: bool


def ghz_consistency_count() -> GHZCheck:
    """Count assignments giving A = B = C = +1 and D = -1 (there are none)."""
    satisfying = 0
    always_one = True
    for a in enumerate_assignments(3):
        va, vb, vc, vd = (assigned_product(a, o) for o in (GHZ_A, GHZ_B, GHZ_C, GHZ_D))
        satisfying += va == vb == vc == 1 and vd == -1
        always_one &= va * vb * vc * vd == 1
    return GHZCheck(satisfying, always_one)


def s_value(a: Assignment) -> int:
    """Value of S = RR' = s1x s2x s1y s2y under one assignment."""
    return a[0, "x"] * a[1, "x"] * a[0, "y"] * a[1, "y"]


def t_value(a: Assignment) -> int:
    """Value of T = QQ' = s1x s2y s1y s2x under one assignment."""
    return a[0, "x"] * a[1, "y"] * a[0, "y"] * a[1, "x"]


class STCheck(NamedTuple):
    all_equal: bool
    all_products_one: bool


def st_product_check() -> STCheck:
    pairs = [(s_value(a), t_value(a)) for a in enumerate_assignments(2)]
    return STCheck(all(s == t for s, t in pairs), all(s * t == 1 for s, t in pairs))


@dataclass(frozen=True)
class NoncontextualModel:
    """Weighted distribution over assignments.

    ``detection_probability``, when set, replaces the experiment's detector
    efficiency and is applied independently of the assignment.
    """

    support: tuple[tuple[Assignment, float], ...]
    detection_probability: float | None = None

    def __post_init__(self):
        support = tuple((a, float(w)) for a, w in self.support)
        if not support:
            raise ValueError("model needs at least one assignment")
        weights = np.array([w for _, w in support])
        if np.any(weights < 0):
            raise ValueError("weights must be non-negative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {weights.sum()!r}, not 1")
        d = self.detection_probability
        if d is not None and not 0.0 <= d <= 1.0:
            raise ValueError("detection_probability must lie in [0, 1]")
        object.__setattr__(self, "support", support)

    @classmethod
    def uniform(cls, num_particles: int = 2, detection_probability: float | None = None):
        assignments = enumerate_assignments(num_particles)
        w = 1.0 / len(assignments)
        return cls(tuple((a, w) for a in assignments), detection_probability)

    @classmethod
    def deterministic(cls, assignment: Assignment, detection_probability: float | None = None):
        return cls(((assignment, 1.0),), detection_probability)

    @classmethod
    def from_weights(cls, weights, num_particles: int = 2, detection_probability: float | None = None):
        """Model over all assignments of ``num_particles``; weights are normalized here."""
        w = np.asarray(weights, dtype=float)
        assignments = enumerate_assignments(num_particles)
        if w.shape != (len(assignments),):
            raise ValueError(f"need {len(assignments)} weights")
        w = w / w.sum()
        return cls(tuple(zip(assignments, w.tolist())), detection_probability)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.support])


def hv_expectation_st(model: NoncontextualModel) -> float:
    """Sum over assignments of weight * v(S) * v(T), scaled by the detection mass.

    Undetected events carry the value zero and drop out of the sum, so the
    result is the detection probability times a sum of non-negative terms.
    """
    d = 1.0 if model.detection_probability is None else model.detection_probability
    total = sum(w * s_value(a) * t_value(a) for a, w in model.support)
    return d * total


def _value_table(model: NoncontextualModel) -> np.ndarray:
    """``table[m, particle, axis]`` with axis 0 = x, 1 = y."""
    table = np.empty((len(model.support), 2, 2), dtype=np.int8)
    for m, (a, _) in enumerate(model.support):
        for p in range(2):
            for j, ax in enumerate(HV_AXES):
                try:
                    table[m, p, j] = a[p, ax]
                except KeyError:
                    raise IncompleteAssignmentError(f"assignment has no value for {(p, ax)}") from None
    return table


_SETTING_AXES = np.array([[0 if ax == "x" else 1 for ax in s.axes] for s in Setting])


def hv_run_trials(model: NoncontextualModel, eta: float, seed: int, start: int, stop: int) -> RunTable:
    """Runs whose outcomes are read off an assignment.

    One assignment is drawn per pair rank ``trial_index // 4`` and shared by
    all four runs of that rank, so the S and T events of a rank see the same
    hidden variable.  Detection uses the same streams as the quantum engine.
    """
    table = _value_table(model)
    cdf = np.cumsum(model.weights)
    cdf[np.flatnonzero(model.weights)[-1]:] = 1.0
    idx = np.arange(start, stop, dtype=np.int64)
    settings = (idx % N_SETTINGS).astype(np.int8)
    pair = idx // N_SETTINGS
    lam = np.minimum(
        np.searchsorted(cdf, _rng.counter_uniform(seed, pair, _rng.ASSIGNMENT), side="right"),
        len(cdf) - 1,
    )
    axes = _SETTING_AXES[settings]
    o1 = table[lam, 0, axes[:, 0]]
    o2 = table[lam, 1, axes[:, 1]]
    det1, det2 = detections(seed, idx, eta)
    o1 = np.where(det1, o1, 0).astype(np.int8)
    o2 = np.where(det2, o2, 0).astype(np.int8)
    return RunTable(idx, settings, o1, o2)


def simulate_hv_tally(
    model: NoncontextualModel,
    config: ExperimentConfig,
    threads: int | None = None,
    chunk: int = CHUNK_TRIALS,
):
    """Run a hidden-variable model through the same schedule, detection,
    pairing and selection chain as the quantum runs and return the tally."""
    eta = config.eta if model.detection_probability is None else model.detection_probability
    if not 0.0 <= eta <= 1.0:
        raise ConfigError(f"detection probability {eta!r} outside [0, 1]")
    return run_pipeline(config, partial(hv_run_trials, model, eta, config.seed), threads, chunk)


def simulate_hv_experiment(
    model: NoncontextualModel,
    config: ExperimentConfig,
    threads: int | None = None,
    chunk: int = CHUNK_TRIALS,
) -> STEstimate:
    """Paired ST estimate of a hidden-variable model (mean of ``S_k T_k`` over
    kept ranks, i.e. S and T read at the same hidden variable)."""
    return paired_st_from_tally(simulate_hv_tally(model, config, threads, chunk))
