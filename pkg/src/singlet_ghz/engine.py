"""Trial generation for the singlet experiment.

Trials follow a fixed round-robin schedule R, R', Q, Q', so the setting of a
trial is ``trial_index % 4`` and its pair rank is ``trial_index // 4``.  All
randomness of a trial is drawn from the counter stream at its trial index
(see :mod:`singlet_ghz.rng`), which makes results independent of how trial
ranges are split across workers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import rng as _rng
from .errors import ConfigError, PairingError
from .qcore import Q, Q_PRIME, R, R_PRIME, OutcomeSampler, PauliObservable, PureState


class Setting(enum.IntEnum):
    R = 0
    R_PRIME = 1
    Q = 2
    Q_PRIME = 3

    @property
    def observable(self) -> PauliObservable:
        return _OBSERVABLES[self]

    @property
    def axes(self) -> tuple[str, str]:
        return self.observable.axes

    @property
    def label(self) -> str:
        return self.observable.label


_OBSERVABLES = {
    Setting.R: R,
    Setting.R_PRIME: R_PRIME,
    Setting.Q: Q,
    Setting.Q_PRIME: Q_PRIME,
}

N_SETTINGS = len(Setting)


class EventKind(enum.IntEnum):
    S = 0
    T = 1


@dataclass(frozen=True)
class ExperimentConfig:
    trials_per_setting: int
    eta: float = 1.0
    seed: int = 0
    state: str = "singlet"
    selection: str = "postselected"

    def __post_init__(self):
        if int(self.trials_per_setting) != self.trials_per_setting or self.trials_per_setting < 1:
            raise ConfigError(f"trials_per_setting must be an integer >= 1, got {self.trials_per_setting!r}")
        check_eta(self.eta)
        if int(self.seed) != self.seed or not 0 <= self.seed <= _rng.MAX_SEED:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.state not in ("singlet", "ghz"):
            raise ConfigError(f"unknown state {self.state!r}")
        if self.selection not in ("ideal", "postselected"):
            raise ConfigError(f"unknown selection {self.selection!r}")

    @property
    def total_trials(self) -> int:
        return N_SETTINGS * self.trials_per_setting


def check_eta(eta: float) -> None:
    if not (isinstance(eta, (int, float)) and 0.0 < eta <= 1.0):
        raise ConfigError(f"eta must lie in (0, 1], got {eta!r}")


@dataclass(frozen=True)
class RunRecord:
    trial_index: int
    setting: Setting
    outcome1: int
    outcome2: int
    product: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "setting", Setting(self.setting))
        for o in (self.outcome1, self.outcome2):
            if o not in (-1, 0, 1):
                raise ValueError(f"outcome must be -1, 0 or +1, got {o!r}")
        product = self.outcome1 * self.outcome2
        if self.product is None:
            object.__setattr__(self, "product", product)
        elif self.product != product:
            raise ValueError("product must equal outcome1 * outcome2")


class RunTable:
    """Columnar storage for many :class:`RunRecord` rows."""

    def __init__(self, trial_index, setting, outcome1, outcome2):
        self.trial_index = np.asarray(trial_index, dtype=np.int64)
        self.setting = np.asarray(setting, dtype=np.int8)
        self.outcome1 = np.asarray(outcome1, dtype=np.int8)
        self.outcome2 = np.asarray(outcome2, dtype=np.int8)
        n = len(self.trial_index)
        if not len(self.setting) == len(self.outcome1) == len(self.outcome2) == n:
            raise ValueError("column lengths differ")

    @classmethod
    def from_records(cls, records: Iterable[RunRecord]) -> "RunTable":
        rows = [(r.trial_index, int(r.setting), r.outcome1, r.outcome2) for r in records]
        if not rows:
            return cls([], [], [], [])
        return cls(*zip(*rows))

    @property
    def product(self) -> np.ndarray:
        return self.outcome1 * self.outcome2

    def __len__(self) -> int:
        return len(self.trial_index)

    def __getitem__(self, i):
        if isinstance(i, (int, np.integer)):
            return RunRecord(
                int(self.trial_index[i]),
                Setting(int(self.setting[i])),
                int(self.outcome1[i]),
                int(self.outcome2[i]),
            )
        return RunTable(self.trial_index[i], self.setting[i], self.outcome1[i], self.outcome2[i])

    def __iter__(self) -> Iterator[RunRecord]:
        return (self[i] for i in range(len(self)))

    def of_setting(self, setting: Setting) -> "RunTable":
        return self[self.setting == int(setting)]

    def equals(self, other: "RunTable") -> bool:
        return all(
            np.array_equal(getattr(self, c), getattr(other, c))
            for c in ("trial_index", "setting", "outcome1", "outcome2")
        )

    @staticmethod
    def concat(tables: Sequence["RunTable"]) -> "RunTable":
        return RunTable(
            *(np.concatenate([getattr(t, c) for t in tables])
              for c in ("trial_index", "setting", "outcome1", "outcome2"))
        )


@dataclass(frozen=True)
class CompositeEvent:
    kind: EventKind
    first: RunRecord
    second: RunRecord
    value: int


class EventTable:
    """Composite S = RR' and T = QQ' events, one row per pair."""

    def __init__(self, kind, pair_index, first: RunTable, second: RunTable):
        self.kind = np.asarray(kind, dtype=np.int8)
        self.pair_index = np.asarray(pair_index, dtype=np.int64)
        self.first = first
        self.second = second

    @property
    def value(self) -> np.ndarray:
        return self.first.product * self.second.product

    def __len__(self) -> int:
        return len(self.kind)

    def __getitem__(self, i):
        if isinstance(i, (int, np.integer)):
            first, second = self.first[i], self.second[i]
            return CompositeEvent(
                EventKind(int(self.kind[i])), first, second, first.product * second.product
            )
        return EventTable(self.kind[i], self.pair_index[i], self.first[i], self.second[i])

    def __iter__(self) -> Iterator[CompositeEvent]:
        return (self[i] for i in range(len(self)))

    def of_kind(self, kind: EventKind) -> "EventTable":
        return self[self.kind == int(kind)]

    @classmethod
    def from_events(cls, events: Sequence[CompositeEvent]) -> "EventTable":
        events = list(events)
        return cls(
            [int(e.kind) for e in events],
            np.arange(len(events)),
            RunTable.from_records(e.first for e in events),
            RunTable.from_records(e.second for e in events),
        )


def schedule(trials_per_setting: int) -> list[Setting]:
    if trials_per_setting < 1:
        raise ConfigError("trials_per_setting must be >= 1")
    return list(Setting) * trials_per_setting


def detections(seed: int, trial_index: np.ndarray, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Independent per-particle detection flags, each true with probability ``eta``."""
    det1 = _rng.counter_uniform(seed, trial_index, _rng.DETECT_1) < eta
    det2 = _rng.counter_uniform(seed, trial_index, _rng.DETECT_2) < eta
    return det1, det2


def run_trial(state: PureState, setting: Setting, eta: float, stream: _rng.TrialStream) -> RunRecord:
    """One run on a fresh pair; ``stream`` fixes the seed and trial index."""
    check_eta(eta)
    setting = Setting(setting)
    setting.observable.check(state.num_particles)
    det1 = stream.uniform(_rng.DETECT_1) < eta
    det2 = stream.uniform(_rng.DETECT_2) < eta
    o1 = o2 = 0
    if det1 or det2:
        sampler = OutcomeSampler(state, setting.observable)
        o1, o2 = (int(v) for v in sampler.sample(np.array([stream.uniform(_rng.OUTCOME)]))[0])
    return RunRecord(stream.trial_index, setting, o1 if det1 else 0, o2 if det2 else 0)


def run_trials(state: PureState, eta: float, seed: int, start: int, stop: int) -> RunTable:
    """Vectorized :func:`run_trial` over trial indices ``start <= i < stop``.

    Row ``i - start`` equals ``run_trial(state, i % 4, eta, TrialStream(seed, i))``.
    """
    check_eta(eta)
    idx = np.arange(start, stop, dtype=np.int64)
    settings = (idx % N_SETTINGS).astype(np.int8)
    det1, det2 = detections(seed, idx, eta)
    seen = det1 | det2
    o1 = np.zeros(len(idx), dtype=np.int8)
    o2 = np.zeros(len(idx), dtype=np.int8)
    for s in Setting:
        mask = seen & (settings == int(s))
        if not mask.any():
            continue
        u = _rng.counter_uniform(seed, idx[mask], _rng.OUTCOME)
        out = OutcomeSampler(state, s.observable).sample(u)
        o1[mask] = out[:, 0]
        o2[mask] = out[:, 1]
    o1[~det1] = 0
    o2[~det2] = 0
    return RunTable(idx, settings, o1, o2)


def pair_events(records: RunTable | Sequence[RunRecord]) -> EventTable:
    """Pair the i-th R run with the i-th R' run (S) and likewise Q with Q' (T).

    Ranks follow trial index order.  The result lists all S events first.
    """
    runs = records if isinstance(records, RunTable) else RunTable.from_records(records)
    runs = runs[np.argsort(runs.trial_index, kind="stable")]
    kinds, pairs, firsts, seconds = [], [], [], []
    for kind, a, b in ((EventKind.S, Setting.R, Setting.R_PRIME),
                       (EventKind.T, Setting.Q, Setting.Q_PRIME)):
        first, second = runs.of_setting(a), runs.of_setting(b)
        if len(first) != len(second):
            raise PairingError(
                f"{len(first)} {a.label} runs cannot pair with {len(second)} {b.label} runs"
            )
        kinds.append(np.full(len(first), int(kind)))
        pairs.append(np.arange(len(first)))
        firsts.append(first)
        seconds.append(second)
    return EventTable(
        np.concatenate(kinds), np.concatenate(pairs),
        RunTable.concat(firsts), RunTable.concat(seconds),
    )
