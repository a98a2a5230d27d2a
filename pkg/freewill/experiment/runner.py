"""Seeded experiment runs and their aggregation across seeds.

One run pits the Free-Will agent against the epsilon-greedy baseline on two
environments that share a schedule but draw rewards from separate streams.
Every stochastic input of a run derives from its seed:

- Free-Will environment: ``RngStream(seed)``
- baseline environment:  ``RngStream(seed ^ ENV_SEED_MIX)``
- Free-Will agent:       ``RngStream(seed, stream=1)``
- baseline agent:        ``RngStream(seed, stream=2)``

so a run is a pure function of ``(config, seed)`` and runs can execute in any
order or process. :func:`run_many` fans seeds out with joblib and joins the
results in ascending seed order before aggregating.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from freewill.agents.baseline import EpsilonGreedyAgent
from freewill.agents.freewill import FreeWillAgent
from freewill.config import ExperimentConfig
from freewill.core.rng import RngStream
from freewill.env.bandit import BanditEnv
from freewill.errors import FreeWillError, InvalidInput, RunFailed
from freewill.experiment.records import RunTrace, StepRecord
from freewill.metrics.information import kl_divergence, shannon_entropy
from freewill.metrics.series import cumulative_regret, moving_average, novelty_series

logger = logging.getLogger(__name__)

ENV_SEED_MIX = 0x9E3779B97F4A7C15
FREEWILL_STREAM = 1
BASELINE_STREAM = 2

AGENTS = ("freewill", "baseline")
KL_LABEL = "freewill_baseline"
AGENT_METRICS = ("rolling_reward", "entropy_bits", "entropy_nats", "novelty", "regret")
METRICS = AGENT_METRICS + ("kl",)


def _state_key(mode: str, t: int):
    return t if mode == "time" else 0


def run_single(config: ExperimentConfig, seed: int) -> tuple[RunTrace, RunTrace]:
    """Run both agents for ``config.total_steps`` steps under one seed."""
    schedule = config.phase_schedule()
    n_arms = schedule.num_arms
    fw_env = BanditEnv(schedule, RngStream(seed))
    base_env = BanditEnv(schedule, RngStream(seed ^ ENV_SEED_MIX))
    fw_rng = RngStream(seed, stream=FREEWILL_STREAM)
    base_rng = RngStream(seed, stream=BASELINE_STREAM)
    fw = FreeWillAgent(n_arms, config.freewill)
    base = EpsilonGreedyAgent(n_arms, config.baseline)

    mode = config.freewill.state_mode
    oracle = config.freewill.trigger_variant == "oracle"
    changes = frozenset(schedule.change_steps)
    fw_trace = RunTrace("freewill", seed, n_arms)
    base_trace = RunTrace("baseline", seed, n_arms)

    for t in range(config.total_steps):
        s, s_next = _state_key(mode, t), _state_key(mode, t + 1)

        a = fw.select_action(s, fw_rng)
        r = fw_env.step(a)
        fw.observe(s, a, r, s_next, change_signal=oracle and t in changes)
        fw_trace.append(StepRecord(t, a, r, fw.policy(s), fw.T, fw.eps, fw.psi_value(s, a)))

        b = base.select_action(s, base_rng)
        rb = base_env.step(b)
        base.observe(s, b, rb, s_next)
        base_trace.append(StepRecord(t, b, rb, base.policy(s), None, base.eps))

    return fw_trace, base_trace


@dataclass(frozen=True)
class SeriesStats:
    mean: np.ndarray
    std: np.ndarray


@dataclass
class RunResult:
    """Traces and metric series of one seed; metrics keyed ``(metric, agent)``."""

    seed: int
    traces: dict[str, RunTrace]
    metrics: dict[tuple[str, str], np.ndarray]


@dataclass
class AggregateResult:
    """Mean and population std of every metric series across runs.

    ``runs`` are ordered by ascending seed. Rolling-reward series hold
    ``total_steps - metrics_window + 1`` points (entry ``i`` is the window
    ending at step ``i + metrics_window - 1``); every other series holds
    ``total_steps`` points.
    """

    config: ExperimentConfig
    stats: dict[tuple[str, str], SeriesStats]
    runs: list[RunResult] = field(default_factory=list)

    @property
    def seeds(self) -> list[int]:
        return [run.seed for run in self.runs]

    @property
    def total_steps(self) -> int:
        return self.config.total_steps

    @property
    def window(self) -> int:
        return self.config.metrics_window

    def series(self, metric: str, agent: str) -> SeriesStats:
        try:
            return self.stats[(metric, agent)]
        except KeyError:
            raise InvalidInput(f"no series for metric {metric!r} and agent {agent!r}") from None

    def aligned(self, metric: str, agent: str) -> SeriesStats:
        """Series padded with NaN so entry ``t`` belongs to step ``t``."""
        st = self.series(metric, agent)
        pad = self.total_steps - st.mean.size
        if pad == 0:
            return st
        head = np.full(pad, np.nan)
        return SeriesStats(np.concatenate([head, st.mean]), np.concatenate([head, st.std]))

    def keys(self) -> list[tuple[str, str]]:
        return list(self.stats)


def run_metrics(fw_trace: RunTrace, base_trace: RunTrace, config: ExperimentConfig) -> dict[tuple[str, str], np.ndarray]:
    """All metric series of one run."""
    schedule = config.phase_schedule()
    window = config.metrics_window
    out: dict[tuple[str, str], np.ndarray] = {}
    for trace in (fw_trace, base_trace):
        name = trace.agent
        out[("rolling_reward", name)] = moving_average(trace.rewards, window)
        out[("entropy_bits", name)] = np.array([shannon_entropy(r.policy, 2) for r in trace])
        out[("entropy_nats", name)] = np.array([shannon_entropy(r.policy, "e") for r in trace])
        out[("novelty", name)] = novelty_series(trace.actions, trace.num_arms)
        out[("regret", name)] = cumulative_regret(trace.records, schedule)
    out[("kl", KL_LABEL)] = np.array(
        [kl_divergence(p.policy, q.policy) for p, q in zip(fw_trace, base_trace)]
    )
    return out


def _run_seed(config: ExperimentConfig, seed: int) -> RunResult:
    try:
        fw_trace, base_trace = run_single(config, seed)
        metrics = run_metrics(fw_trace, base_trace, config)
    except RunFailed:
        raise
    except Exception as exc:
        raise RunFailed(seed, exc) from exc
    logger.debug("seed %d done: %d steps", seed, len(fw_trace))
    return RunResult(seed, {"freewill": fw_trace, "baseline": base_trace}, metrics)


def aggregate(series_set) -> tuple[np.ndarray, np.ndarray]:
    """Elementwise mean and population std (divisor N) of equal-length series."""
    rows = [np.asarray(s, dtype=float) for s in series_set]
    if not rows:
        raise InvalidInput("aggregate needs at least one series")
    length = rows[0].shape
    if any(r.ndim != 1 or r.shape != length for r in rows):
        raise InvalidInput("aggregate needs 1D series of equal length")
    stack = np.vstack(rows)
    return stack.mean(axis=0), stack.std(axis=0, ddof=0)


def aggregate_runs(config: ExperimentConfig, runs: list[RunResult]) -> AggregateResult:
    runs = sorted(runs, key=lambda run: run.seed)
    if not runs:
        raise InvalidInput("no runs to aggregate")
    stats = {}
    for key in runs[0].metrics:
        mean, std = aggregate([run.metrics[key] for run in runs])
        stats[key] = SeriesStats(mean, std)
    return AggregateResult(config, stats, runs)


def run_many(config: ExperimentConfig, jobs: int | None = None, backend: str | None = None) -> AggregateResult:
    """Run every seed of ``config`` and aggregate the metric series.

    Args:
        config: Validated experiment configuration.
        jobs: Worker cap; None uses every available processor.
        backend: joblib backend name ("loky", "threading", "sequential").
    """
    seeds = config.seeds
    n_jobs = 1 if len(seeds) == 1 else (jobs if jobs else -1)
    logger.info("running %d seed(s) x %d steps (jobs=%s)", len(seeds), config.total_steps, n_jobs)
    try:
        runs = Parallel(n_jobs=n_jobs, backend=backend)(
            delayed(_run_seed)(config, seed) for seed in seeds
        )
    except FreeWillError:
        raise
    except Exception as exc:
        # worker crashes surface without a seed
        raise RunFailed(-1, exc) from exc
    return aggregate_runs(config, list(runs))
