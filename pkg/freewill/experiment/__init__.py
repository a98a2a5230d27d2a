"""Seeded runs, metric collection and cross-seed aggregation."""
from .records import StepRecord, RunTrace
from .runner import (
    AggregateResult,
    RunResult,
    SeriesStats,
    aggregate,
    run_many,
    run_metrics,
    run_single,
)
from .summary import final_mean_reward, mean_reward, summarize
