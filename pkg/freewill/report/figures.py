"""Assemble a complete output directory from an aggregated experiment."""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Iterable

from freewill.errors import InvalidInput, ReportIOError
from freewill.experiment.runner import AGENTS, KL_LABEL, AggregateResult
from freewill.experiment.summary import summarize
from freewill.report.csv_io import write_aggregate_csv, write_trace_csv
from freewill.report.manifest import MANIFEST_NAME, build_manifest, write_manifest
from freewill.report.svg import emit_svg

logger = logging.getLogger(__name__)

AGENT_LABELS = {"freewill": "Free-Will agent", "baseline": "epsilon-greedy baseline"}


def _agent_series(result: AggregateResult, metric: str, stop: int | None = None):
    out = []
    for agent in AGENTS:
        st = result.series(metric, agent)
        out.append((AGENT_LABELS[agent], st.mean[:stop], st.std[:stop]))
    return out


def _change_markers(result: AggregateResult, shift: int = 0) -> list[tuple[float, str]]:
    return [(step - shift, "change") for step in result.config.phase_schedule().change_steps]


def plot_reward(result: AggregateResult, path: Path) -> Path:
    # rolling series start at 0, so the change sits window steps early
    w = result.window
    return emit_svg(_agent_series(result, "rolling_reward"), _change_markers(result, shift=w), path,
                    title=f"Rolling average reward (window={w})", y_label="reward")


def plot_entropy(result: AggregateResult, path: Path) -> Path:
    return emit_svg(_agent_series(result, "entropy_bits"), _change_markers(result), path,
                    title="Policy entropy", y_label="entropy (bits)")


def plot_kl(result: AggregateResult, path: Path) -> Path:
    st = result.series("kl", KL_LABEL)
    return emit_svg([("KL(Free-Will || baseline)", st.mean, st.std)], _change_markers(result), path,
                    title="Policy divergence", y_label="KL (nats)")


def plot_novelty(result: AggregateResult, path: Path) -> Path:
    zoom = result.config.report.novelty_zoom
    title = "Novelty score" + (f" (zoom: 0-{zoom})" if zoom else "")
    markers = [m for m in _change_markers(result) if zoom is None or m[0] < zoom]
    return emit_svg(_agent_series(result, "novelty", stop=zoom), markers, path,
                    title=title, y_label="fraction of arms tried")


def plot_regret(result: AggregateResult, path: Path) -> Path:
    return emit_svg(_agent_series(result, "regret"), _change_markers(result), path,
                    title="Cumulative regret", y_label="regret")


PLOTTERS = {
    "reward": plot_reward,
    "entropy": plot_entropy,
    "kl": plot_kl,
    "novelty": plot_novelty,
    "regret": plot_regret,
}


def write_plots(result: AggregateResult, plots_dir: str | Path, names: Iterable[str] | None = None) -> list[Path]:
    names = list(result.config.report.plots if names is None else names)
    unknown = [n for n in names if n not in PLOTTERS]
    if unknown:
        raise InvalidInput(f"unknown plot name(s): {', '.join(unknown)}")
    return [PLOTTERS[n](result, Path(plots_dir) / f"{n}.svg") for n in names]


def write_summary(result: AggregateResult, path: str | Path) -> Path:
    p = Path(path)
    text = json.dumps(summarize(result), sort_keys=True, indent=2) + "\n"
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(p, exc.strerror or str(exc)) from None
    return p


def write_report(result: AggregateResult, output_dir: str | Path, seed_base: int = 0,
                 extra: dict[str, Any] | None = None) -> Path:
    """Write traces, aggregate CSV, summary, plots and finally the manifest.

    Returns the manifest path.
    """
    out = Path(output_dir)
    written: list[Path] = []
    if result.config.report.write_traces:
        for run in result.runs:
            written.append(write_trace_csv([run.traces[a] for a in AGENTS], out / "traces" / f"seed_{run.seed}.csv"))
    written.append(write_aggregate_csv(result, out / "aggregate.csv"))
    written.append(write_summary(result, out / "summary.json"))
    written.extend(write_plots(result, out / "plots"))
    manifest = build_manifest(result.config, out, written, seed_base=seed_base, extra=extra)
    path = write_manifest(manifest, out / MANIFEST_NAME)
    logger.info("report complete: %s", out)
    return path
