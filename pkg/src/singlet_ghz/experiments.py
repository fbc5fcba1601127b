"""Runners for each experiment kind; they return raw results for :mod:`analysis`."""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import partial, reduce

import numpy as np

from . import rng as _rng
from .engine import ExperimentConfig
from .hvcore import (
    Assignment,
    GHZCheck,
    NoncontextualModel,
    STCheck,
    assigned_product,
    count_assignments,
    ghz_consistency_count,
    simulate_hv_tally,
    st_product_check,
)
from .pipeline import CHUNK_TRIALS, chunk_ranges, map_chunks, run_quantum
from .qcore import GHZ_A, GHZ_B, GHZ_C, GHZ_D, OutcomeSampler, make_ghz
from .select import Tally

GHZ_OBSERVABLES = (GHZ_A, GHZ_B, GHZ_C, GHZ_D)


@dataclass(frozen=True)
class GHZResult:
    config: ExperimentConfig
    # label -> (n, n_plus, n_minus) over sampled outcome products
    products: dict


@dataclass(frozen=True)
class SingletResult:
    kind: str
    config: ExperimentConfig
    tally: Tally


@dataclass(frozen=True)
class HVResult:
    config: ExperimentConfig
    model_name: str
    hv_tally: Tally
    quantum_tally: Tally


@dataclass(frozen=True)
class EnumerationResult:
    ghz: GHZCheck
    ghz_all_plus_count: int
    st: STCheck
    ghz_total: int = 64
    st_total: int = 16


def ghz_products(seed: int, start: int, stop: int) -> dict:
    """Sample A, B, C, D round-robin on the GHZ state for trial indices in range."""
    state = make_ghz()
    idx = np.arange(start, stop, dtype=np.int64)
    which = idx % len(GHZ_OBSERVABLES)
    out = {}
    for k, obs in enumerate(GHZ_OBSERVABLES):
        sel = idx[which == k]
        tuples = OutcomeSampler(state, obs).sample(_rng.counter_uniform(seed, sel, _rng.OUTCOME))
        prod = tuples.prod(axis=1)
        out[obs.label] = (len(sel), int(np.count_nonzero(prod == 1)), int(np.count_nonzero(prod == -1)))
    return out


def _merge_products(a: dict, b: dict) -> dict:
    return {k: tuple(x + y for x, y in zip(a[k], b[k])) for k in a}


def _ghz_chunk(seed: int, bounds: tuple[int, int]) -> dict:
    return ghz_products(seed, *bounds)


def run_ghz(config: ExperimentConfig, threads: int | None = None, chunk: int = CHUNK_TRIALS) -> GHZResult:
    ranges = chunk_ranges(len(GHZ_OBSERVABLES) * config.trials_per_setting, chunk)
    parts = map_chunks(partial(_ghz_chunk, config.seed), ranges, threads)
    return GHZResult(replace(config, state="ghz"), reduce(_merge_products, parts))


def run_singlet(kind: str, config: ExperimentConfig, threads: int | None = None,
                chunk: int = CHUNK_TRIALS) -> SingletResult:
    return SingletResult(kind, config, run_quantum(config, threads, chunk))


HV_MODELS = ("uniform", "all-plus", "flip-1x")


def named_model(name: str) -> NoncontextualModel:
    if name == "uniform":
        return NoncontextualModel.uniform(2)
    if name == "all-plus":
        return NoncontextualModel.deterministic(Assignment.constant(2))
    if name == "flip-1x":
        return NoncontextualModel.deterministic(Assignment.constant(2).flipped((0, "x")))
    raise ValueError(f"unknown model {name!r}; choose from {HV_MODELS}")


def run_hv(config: ExperimentConfig, model: str = "uniform", threads: int | None = None,
           chunk: int = CHUNK_TRIALS) -> HVResult:
    hv = simulate_hv_tally(named_model(model), config, threads, chunk)
    quantum = run_quantum(config, threads, chunk)
    return HVResult(config, model, hv, quantum)


def run_enumeration() -> EnumerationResult:
    def all_plus(a):
        return all(assigned_product(a, o) == 1 for o in GHZ_OBSERVABLES)

    return EnumerationResult(ghz_consistency_count(), count_assignments(all_plus, 3), st_product_check())
