"""CSV emission and read-back for traces and aggregate series.

All files use LF line endings and ``%.9g`` for floating-point fields;
fields with no meaning for a row (the baseline's temperature and psi value,
the rolling reward before its first full window) are left empty.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable

import numpy as np
import pandas as pd

from freewill.errors import ReportIOError
from freewill.experiment.records import RunTrace
from freewill.experiment.runner import AGENT_METRICS, AGENTS, KL_LABEL, AggregateResult
from freewill.metrics.information import shannon_entropy
from freewill.metrics.series import novelty_series

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["t", "agent", "action", "reward", "T", "eps",
                 "entropy_bits", "entropy_nats", "novelty", "psi_chosen"]
FLOAT_FORMAT = "%.9g"


def trace_frame(trace: RunTrace) -> pd.DataFrame:
    return pd.DataFrame({
        "t": trace.steps,
        "agent": trace.agent,
        "action": trace.actions,
        "reward": trace.rewards.astype(np.int64),
        "T": trace.temperatures,
        "eps": trace.epsilons,
        "entropy_bits": [shannon_entropy(r.policy, 2) for r in trace],
        "entropy_nats": [shannon_entropy(r.policy, "e") for r in trace],
        "novelty": novelty_series(trace.actions, trace.num_arms),
        "psi_chosen": trace.psi,
    }, columns=TRACE_COLUMNS)


def aggregate_column_names() -> list[str]:
    cols = []
    for metric in AGENT_METRICS:
        for agent in AGENTS:
            cols += [f"{metric}_{agent}_mean", f"{metric}_{agent}_std"]
    cols += [f"kl_{KL_LABEL}_mean", f"kl_{KL_LABEL}_std"]
    return cols


def aggregate_frame(result: AggregateResult) -> pd.DataFrame:
    data: dict[str, np.ndarray] = {"t": np.arange(result.total_steps)}
    keys = [(m, a) for m in AGENT_METRICS for a in AGENTS] + [("kl", KL_LABEL)]
    for metric, agent in keys:
        st = result.aligned(metric, agent)
        data[f"{metric}_{agent}_mean"] = st.mean
        data[f"{metric}_{agent}_std"] = st.std
    return pd.DataFrame(data)


def _write_frame(df: pd.DataFrame, path: str | Path) -> Path:
    p = Path(path)
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(p, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    except OSError as exc:
        raise ReportIOError(p, exc.strerror or str(exc)) from None
    logger.info("wrote %s (%d rows)", p, len(df))
    return p


def write_trace_csv(traces: RunTrace | Iterable[RunTrace], path: str | Path) -> Path:
    """One row per step per agent, agents in the order given."""
    if isinstance(traces, RunTrace):
        traces = [traces]
    df = pd.concat([trace_frame(tr) for tr in traces], ignore_index=True)
    return _write_frame(df, path)


def write_aggregate_csv(result: AggregateResult, path: str | Path) -> Path:
    return _write_frame(aggregate_frame(result), path)


def _read_frame(path: str | Path) -> pd.DataFrame:
    p = Path(path)
    try:
        return pd.read_csv(p)
    except OSError as exc:
        raise ReportIOError(p, exc.strerror or str(exc)) from None


def read_trace_csv(path: str | Path) -> pd.DataFrame:
    """Parse a trace CSV; empty fields come back as NaN."""
    return _read_frame(path)


def read_aggregate_csv(path: str | Path) -> pd.DataFrame:
    return _read_frame(path)
