"""Per-run metric series: rolling reward, novelty and cumulative regret."""
from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from freewill.errors import InvalidInput

if TYPE_CHECKING:
    from freewill.env.bandit import PhaseSchedule
    from freewill.experiment.records import StepRecord


def moving_average(series, window: int) -> np.ndarray:
    """Mean of every full window; length ``len(series) - window + 1``."""
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise InvalidInput("moving_average expects a 1D series")
    if window < 1:
        raise InvalidInput(f"window must be positive, got {window}")
    if x.size < window:
        raise InvalidInput(f"series of length {x.size} is shorter than window {window}")
    return sliding_window_view(x, window).mean(axis=1)


def novelty_series(actions: Iterable[int], num_arms: int) -> np.ndarray:
    """Fraction of distinct arms tried in each prefix of ``actions``."""
    if num_arms < 1:
        raise InvalidInput(f"num_arms must be positive, got {num_arms}")
    acts = np.asarray(list(actions), dtype=np.int64)
    if acts.size and (acts.min() < 0 or acts.max() >= num_arms):
        raise InvalidInput(f"actions must lie in [0, {num_arms})")
    seen = np.zeros(num_arms, dtype=bool)
    out = np.empty(acts.size, dtype=float)
    count = 0
    for i, a in enumerate(acts):
        if not seen[a]:
            seen[a] = True
            count += 1
        out[i] = count / num_arms
    return out


def cumulative_regret(records: Sequence["StepRecord"], schedule: "PhaseSchedule") -> np.ndarray:
    """Running sum of ``optimal_expected(t) - probs_at(t)[action]``."""
    if len(records) == 0:
        raise InvalidInput("cumulative_regret needs at least one record")
    gaps = np.empty(len(records), dtype=float)
    for i, rec in enumerate(records):
        probs = schedule.probs_at(rec.t)
        gaps[i] = schedule.best_expected_at(rec.t) - probs[rec.action]
    return np.cumsum(gaps)
