"""Chunked, optionally threaded execution of the run -> pair -> select -> tally chain."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from functools import partial, reduce
from typing import Callable

from .engine import EventKind, ExperimentConfig, N_SETTINGS, RunTable, pair_events, run_trials
from .qcore import make_singlet
from .select import Tally, no_selection, select_T, select_source_quality

# trials per chunk; a multiple of the schedule length so every chunk holds whole pairs
CHUNK_TRIALS = N_SETTINGS * 2**18

RunMaker = Callable[[int, int], RunTable]


def default_threads() -> int:
    return os.cpu_count() or 1


def chunk_ranges(total: int, chunk: int = CHUNK_TRIALS) -> list[tuple[int, int]]:
    if chunk % N_SETTINGS:
        raise ValueError("chunk size must be a multiple of the schedule length")
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def map_chunks(fn, ranges: list[tuple[int, int]], threads: int | None = None) -> list:
    """``[fn(r) for r in ranges]``, evaluated on a thread pool; order is preserved."""
    threads = threads or default_threads()
    if threads == 1 or len(ranges) <= 1:
        return [fn(r) for r in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, ranges))


def tally_runs(runs: RunTable, selection: str = "postselected") -> Tally:
    events = select_source_quality(pair_events(runs))
    if selection == "postselected":
        ensemble = select_T(events.of_kind(EventKind.T), events.of_kind(EventKind.S))
    else:
        ensemble = no_selection(events)
    return Tally.from_tables(runs, ensemble)


def _tally_chunk(make_runs: RunMaker, selection: str, bounds: tuple[int, int]) -> Tally:
    return tally_runs(make_runs(*bounds), selection)


def run_pipeline(
    config: ExperimentConfig,
    make_runs: RunMaker,
    threads: int | None = None,
    chunk: int = CHUNK_TRIALS,
) -> Tally:
    """Tally all ``config.total_trials`` runs produced by ``make_runs``.

    The result does not depend on ``threads`` or ``chunk``: every trial's
    randomness is keyed by its own index and tallies are integer sums.
    """
    work = partial(_tally_chunk, make_runs, config.selection)
    tallies = map_chunks(work, chunk_ranges(config.total_trials, chunk), threads)
    return reduce(Tally.__add__, tallies, Tally())


def quantum_run_maker(config: ExperimentConfig) -> RunMaker:
    if config.state != "singlet":
        raise ValueError("the R/R'/Q/Q' experiment needs the singlet state")
    state = make_singlet()
    return partial(run_trials, state, config.eta, config.seed)


def run_quantum(config: ExperimentConfig, threads: int | None = None, chunk: int = CHUNK_TRIALS) -> Tally:
    return run_pipeline(config, quantum_run_maker(config), threads, chunk)

