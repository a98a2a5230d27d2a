"""Scalar summaries of an aggregated experiment."""
from __future__ import annotations

from typing import Any

import numpy as np

from freewill.errors import InvalidInput
from freewill.experiment.runner import AGENTS, AggregateResult


def first_change_step(result: AggregateResult) -> int | None:
    changes = result.config.phase_schedule().change_steps
    return changes[0] if changes else None


def mean_reward(result: AggregateResult, agent: str, start: int, stop: int) -> float:
    """Reward averaged over steps ``[start, stop)`` and over seeds."""
    start, stop = max(0, start), min(result.total_steps, stop)
    if stop <= start:
        raise InvalidInput(f"empty step range [{start}, {stop})")
    return float(np.mean([run.traces[agent].rewards[start:stop].mean() for run in result.runs]))


def final_mean_reward(result: AggregateResult, agent: str = "freewill", last: int = 500) -> float:
    """Mean reward over the final ``last`` steps (the whole run if shorter)."""
    return mean_reward(result, agent, result.total_steps - last, result.total_steps)


def saturation_step(novelty: np.ndarray) -> int | None:
    """First step at which every arm has been tried, or None."""
    hits = np.flatnonzero(novelty >= 1.0)
    return int(hits[0]) if hits.size else None


def summarize(result: AggregateResult) -> dict[str, Any]:
    """Per-agent summary statistics, JSON-ready."""
    change = first_change_step(result)
    window = result.window
    T = result.total_steps
    pre_end = change if change is not None else T
    out: dict[str, Any] = {
        "seeds": result.seeds,
        "total_steps": T,
        "metrics_window": window,
        "change_step": change,
        "agents": {},
    }
    for agent in AGENTS:
        rewards = np.vstack([run.traces[agent].rewards for run in result.runs])
        entry: dict[str, Any] = {
            "pre_change_final_mean_reward": float(rewards[:, max(0, pre_end - window):pre_end].mean()),
            "final_mean_reward": final_mean_reward(result, agent),
            "final_regret_mean": float(result.series("regret", agent).mean[-1]),
            "novelty_saturation_step": [
                saturation_step(run.metrics[("novelty", agent)]) for run in result.runs
            ],
        }
        if change is not None and change < T:
            post = rewards[:, change:]
            entry["post_change_mean_reward"] = float(post.mean())
            entry["post_change_reward_area"] = float(post.sum(axis=1).mean())
        out["agents"][agent] = entry
    return out
