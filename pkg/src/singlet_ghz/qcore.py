"""Pure states of two or three spin-1/2 particles and Pauli product observables.

Basis convention: the amplitude index is read as a bitstring with particle 0
as the most significant bit, and a 0 bit means spin up along z (``|+>``).
This matches ``np.kron`` ordering, so ``|+->`` of two particles is index 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidObservableError

AXES = ("x", "y", "z")
ATOL = 1e-12

_SQRT_HALF = 1.0 / np.sqrt(2.0)

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# rows are the conjugated eigenvectors for eigenvalue +1 and -1
_EIGENBASIS = {
    "x": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    "y": np.array([[1, -1j], [1, 1j]], dtype=complex) * _SQRT_HALF,
    "z": np.eye(2, dtype=complex),
}


@dataclass(frozen=True)
class PureState:
    num_particles: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.num_particles not in (2, 3):
            raise ValueError("only 2- and 3-particle states are supported")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.num_particles:
            raise ValueError(
                f"expected {2**self.num_particles} amplitudes, got {amps.size}"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state is not normalized (squared norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, spins: str) -> complex:
        """Amplitude of a basis ket written as a string of '+'/'-', e.g. ``"+-"``."""
        if len(spins) != self.num_particles or set(spins) - {"+", "-"}:
            raise ValueError(f"bad basis label {spins!r}")
        index = int("".join("0" if s == "+" else "1" for s in spins), 2)
        return complex(self.amplitudes[index])

    @property
    def squared_norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_particles)


@dataclass(frozen=True)
class PauliObservable:
    """Tensor product of single-particle spin components, one axis per particle."""

    factors: tuple[tuple[int, str], ...]
    label: str | None = None

    def __post_init__(self):
        factors = tuple((int(p), str(a)) for p, a in self.factors)
        if not factors:
            raise InvalidObservableError("observable needs at least one factor")
        particles = [p for p, _ in factors]
        if len(set(particles)) != len(particles):
            raise InvalidObservableError(f"repeated particle index in {factors}")
        for p, a in factors:
            if p < 0:
                raise InvalidObservableError(f"negative particle index {p}")
            if a not in AXES:
                raise InvalidObservableError(f"unknown axis {a!r}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_axes(cls, axes: str | Sequence[str], label: str | None = None):
        """``from_axes("xyy")`` measures particle k along ``axes[k]``."""
        return cls(tuple(enumerate(axes)), label)

    @property
    def particles(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def axes(self) -> tuple[str, ...]:
        return tuple(a for _, a in self.factors)

    def check(self, num_particles: int) -> None:
        for p in self.particles:
            if p >= num_particles:
                raise InvalidObservableError(
                    f"particle {p} out of range for a {num_particles}-particle state"
                )

    def matrix(self, num_particles: int) -> np.ndarray:
        self.check(num_particles)
        ops = dict(self.factors)
        out = np.ones((1, 1), dtype=complex)
        for k in range(num_particles):
            out = np.kron(out, PAULI[ops[k]] if k in ops else np.eye(2))
        return out

    def __str__(self):
        if self.label:
            return self.label
        return "".join(f"s{p + 1}{a}" for p, a in self.factors)


def make_singlet() -> PureState:
    amps = np.zeros(4, dtype=complex)
    amps[0b01] = _SQRT_HALF
    amps[0b10] = -_SQRT_HALF
    return PureState(2, amps)


def make_ghz() -> PureState:
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = _SQRT_HALF
    amps[0b111] = -_SQRT_HALF
    return PureState(3, amps)


# GHZ operators
GHZ_A = PauliObservable.from_axes("xyy", "A")
GHZ_B = PauliObservable.from_axes("yxy", "B")
GHZ_C = PauliObservable.from_axes("yyx", "C")
GHZ_D = PauliObservable.from_axes("xxx", "D")

# singlet settings
R = PauliObservable.from_axes("xx", "R")
R_PRIME = PauliObservable.from_axes("yy", "R'")
Q = PauliObservable.from_axes("xy", "Q")
Q_PRIME = PauliObservable.from_axes("yx", "Q'")


def expectation(state: PureState, obs: PauliObservable) -> float:
    psi = state.amplitudes
    value = np.vdot(psi, obs.matrix(state.num_particles) @ psi)
    return float(value.real)


def outcome_tuples(k: int) -> list[tuple[int, ...]]:
    """All ±1 outcome tuples for ``k`` measured particles, ``(+1, ..., +1)`` first."""
    return list(itertools.product((1, -1), repeat=k))


def _outcome_probabilities(state: PureState, obs: PauliObservable) -> np.ndarray:
    obs.check(state.num_particles)
    psi = state.tensor()
    for p, a in obs.factors:
        psi = np.moveaxis(np.tensordot(_EIGENBASIS[a], psi, axes=([1], [p])), 0, p)
    probs = np.abs(psi) ** 2
    unmeasured = tuple(k for k in range(state.num_particles) if k not in obs.particles)
    if unmeasured:
        probs = probs.sum(axis=unmeasured)
    # remaining axes are in increasing particle order; reorder to factor order
    order = sorted(range(len(obs.factors)), key=lambda i: obs.particles[i])
    probs = np.transpose(probs, np.argsort(order)).reshape(-1)
    probs[probs < ATOL * ATOL] = 0.0
    return probs / probs.sum()


def joint_outcome_distribution(
    state: PureState, obs: PauliObservable
) -> dict[tuple[int, ...], float]:
    """Born-rule probability of each per-particle outcome tuple, in factor order."""
    probs = _outcome_probabilities(state, obs)
    return dict(zip(outcome_tuples(len(obs.factors)), probs.tolist()))


class OutcomeSampler:
    """Inverse-CDF sampler over the joint outcomes of one observable.

    Sampling many trials at once from an array of uniforms gives the same
    tuples as calling :func:`sample_joint` one uniform at a time.
    """

    def __init__(self, state: PureState, obs: PauliObservable):
        probs = _outcome_probabilities(state, obs)
        self.outcomes = np.array(outcome_tuples(len(obs.factors)), dtype=np.int8)
        self.cdf = np.cumsum(probs)
        # pin the top at 1 from the last reachable outcome on, so trailing
        # zero-probability outcomes stay unreachable
        self.cdf[np.flatnonzero(probs)[-1]:] = 1.0

    def indices(self, uniforms: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.cdf, uniforms, side="right")
        return np.minimum(idx, len(self.cdf) - 1)

    def sample(self, uniforms: np.ndarray) -> np.ndarray:
        """Outcome tuples, shape ``(len(uniforms), num_factors)``."""
        return self.outcomes[self.indices(np.asarray(uniforms))]


def sample_joint(state: PureState, obs: PauliObservable, rng) -> tuple[int, ...]:
    """Draw one outcome tuple. ``rng`` is anything with a ``random()`` method."""
    sampler = OutcomeSampler(state, obs)
    return tuple(int(v) for v in sampler.sample(np.array([rng.random()]))[0])
