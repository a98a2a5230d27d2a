"""Configuration models for Free-Will bandit experiments.

This module centralizes every tunable parameter (agent constants, schedule,
run length, seeds, report options) so the CLI, presets and tests share one
validated description of a run. A run configuration is a JSON document with
the sections ``schedule``, ``agents.freewill``, ``agents.baseline``,
``experiment`` and ``report``; see ``docs/config_schema.md``.

Validation failures are reported as :class:`~freewill.errors.ConfigError`
carrying the dotted key of the offending field.
"""
from __future__ import annotations

import copy
import json
from pathlib import Path
from typing import Any, Iterable, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from freewill.env.bandit import PhaseSchedule
from freewill.env.schedules import BUILTIN_SCHEDULES, builtin_schedule
from freewill.errors import ConfigError, InvalidInput

PLOT_NAMES = ("reward", "entropy", "kl", "novelty", "regret")

# CLI shorthands for nested sections
KEY_ALIASES = {
    "freewill": ("agents", "freewill"),
    "baseline": ("agents", "baseline"),
}


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class FreeWillParams(_Section):
    """Free-Will agent constants.

    Attributes:
        alpha: Intrinsic-bonus weight.
        eta: Learning rate for Q and the psi field.
        tau: Surprise threshold (reward units).
        T_init: Initial temperature; also the oracle reset value.
        T_min: Temperature floor.
        T_max: Temperature ceiling.
        gamma_inc: Multiplier applied on surprise.
        gamma_dec: Multiplier applied otherwise.
        discount: Weight of max Q(s_next, .) in the TD target.
        surprise_window: Length of the reward ring buffer.
        eps_init: Exploration overlay start (and oracle reset) value; 0 disables it.
        eps_decay: Linear decay of the overlay per step.
        eps_floor: Overlay floor.
        score_variant: "formula" -> (Q + alpha*I)/T; "code" -> Q + T*alpha*I.
        trigger_variant: "endogenous" (surprise drives T) or "oracle"
            (external change signal resets T and eps).
        state_mode: "single" (one bandit state) or "time" (state = step index).
    """

    alpha: float = Field(0.1, ge=0.0)
    eta: float = Field(0.1, gt=0.0, le=1.0)
    tau: float = Field(0.4, ge=0.0)
    T_init: float = Field(0.5, gt=0.0)
    T_min: float = Field(0.01, gt=0.0)
    T_max: float = Field(2.0, gt=0.0)
    gamma_inc: float = Field(1.05, gt=1.0)
    gamma_dec: float = Field(0.85, gt=0.0, lt=1.0)
    discount: float = Field(0.9, ge=0.0, lt=1.0)
    surprise_window: int = Field(50, ge=1)
    eps_init: float = Field(0.5, ge=0.0, le=1.0)
    eps_decay: float = Field(0.001, ge=0.0)
    eps_floor: float = Field(0.01, ge=0.0, le=1.0)
    score_variant: Literal["formula", "code"] = "formula"
    trigger_variant: Literal["endogenous", "oracle"] = "endogenous"
    state_mode: Literal["single", "time"] = "single"

    @model_validator(mode="after")
    def _check_ranges(self):
        if not self.T_min <= self.T_init <= self.T_max:
            raise ValueError("temperatures must satisfy T_min <= T_init <= T_max")
        if self.eps_floor > self.eps_init:
            raise ValueError("eps_floor must not exceed eps_init")
        return self


class BaselineParams(_Section):
    """Decaying epsilon-greedy Q-learner constants.

    ``step_size="sample_average"`` replaces ``eta`` with 1/N(s, a).
    """

    eta: float = Field(0.1, gt=0.0, le=1.0)
    discount: float = Field(0.9, ge=0.0, lt=1.0)
    eps_init: float = Field(0.5, ge=0.0, le=1.0)
    eps_decay: float = Field(0.001, ge=0.0)
    # > 0: KL(freewill || baseline) needs every baseline probability positive
    eps_floor: float = Field(0.01, gt=0.0, le=1.0)
    step_size: Literal["constant", "sample_average"] = "constant"

    @model_validator(mode="after")
    def _check_eps(self):
        if self.eps_floor > self.eps_init:
            raise ValueError("eps_floor must not exceed eps_init")
        return self


class AgentsSection(_Section):
    freewill: FreeWillParams = FreeWillParams()
    baseline: BaselineParams = BaselineParams()


class PhaseSpec(_Section):
    start_step: int = Field(ge=0)
    probs: list[float] = Field(min_length=1)

    @field_validator("probs")
    @classmethod
    def _probs_in_range(cls, v: list[float]) -> list[float]:
        if any(not (0.0 <= p <= 1.0) for p in v):
            raise ValueError("arm probabilities must lie in [0, 1]")
        return v


class ExperimentSection(_Section):
    total_steps: int = Field(2000, ge=1)
    seeds: list[int] = Field(default_factory=lambda: list(range(10)), min_length=1)
    metrics_window: int = Field(50, ge=1)

    @field_validator("seeds")
    @classmethod
    def _distinct_seeds(cls, v: list[int]) -> list[int]:
        if len(set(v)) != len(v):
            raise ValueError("seeds must be distinct")
        if any(not (0 <= s < 2**64) for s in v):
            raise ValueError("seeds must be 64-bit unsigned integers")
        return v

    @model_validator(mode="after")
    def _window_fits(self):
        if self.total_steps <= self.metrics_window:
            raise ValueError("total_steps must exceed metrics_window")
        return self


class ReportSection(_Section):
    plots: list[Literal["reward", "entropy", "kl", "novelty", "regret"]] = Field(
        default_factory=lambda: list(PLOT_NAMES)
    )
    novelty_zoom: int | None = Field(250, ge=1)
    write_traces: bool = True


class ExperimentConfig(_Section):
    """Complete, validated description of an experiment."""

    schedule: Union[list[PhaseSpec], Literal["four_arm", "ten_arm"]] = "four_arm"
    agents: AgentsSection = AgentsSection()
    experiment: ExperimentSection = ExperimentSection()
    report: ReportSection = ReportSection()

    @field_validator("schedule")
    @classmethod
    def _schedule_valid(cls, v):
        if isinstance(v, list):
            try:
                PhaseSchedule.from_pairs((ph.start_step, ph.probs) for ph in v)
            except InvalidInput as exc:
                raise ValueError(str(exc)) from None
        return v

    # Convenience accessors mirroring the flat experiment description
    @property
    def freewill(self) -> FreeWillParams:
        return self.agents.freewill

    @property
    def baseline(self) -> BaselineParams:
        return self.agents.baseline

    @property
    def total_steps(self) -> int:
        return self.experiment.total_steps

    @property
    def seeds(self) -> list[int]:
        return list(self.experiment.seeds)

    @property
    def metrics_window(self) -> int:
        return self.experiment.metrics_window

    def phase_schedule(self) -> PhaseSchedule:
        if isinstance(self.schedule, str):
            return builtin_schedule(self.schedule)
        return PhaseSchedule.from_pairs((ph.start_step, ph.probs) for ph in self.schedule)

    def to_json_dict(self) -> dict[str, Any]:
        return self.model_dump(mode="json")

    def with_overrides(self, overrides: Iterable[str]) -> "ExperimentConfig":
        data = self.to_json_dict()
        for item in overrides:
            key, value = parse_override(item)
            set_dotted(data, key, value)
        return config_from_dict(data)

    def with_seeds(self, seeds: list[int]) -> "ExperimentConfig":
        data = self.to_json_dict()
        data["experiment"]["seeds"] = list(seeds)
        return config_from_dict(data)


def _error_key(loc: tuple) -> str:
    # drop pydantic's union-branch tags such as "list[PhaseSpec]"
    parts = [str(p) for p in loc if not (isinstance(p, str) and ("[" in p or p.startswith("literal")))]
    return ".".join(parts) or "<config>"


def config_from_dict(data: dict[str, Any]) -> ExperimentConfig:
    """Validate a raw mapping, converting pydantic errors to ConfigError."""
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        err = exc.errors()[0]
        raise ConfigError(_error_key(tuple(err.get("loc", ()))), err.get("msg", str(exc))) from None


def load_config(path: str | Path) -> ExperimentConfig:
    """Read and validate a JSON run configuration."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("config", f"cannot read {p}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{p} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config", f"{p} must contain a JSON object")
    return config_from_dict(data)


def parse_override(item: str) -> tuple[str, Any]:
    """Split ``KEY=VALUE``; VALUE is JSON when it parses, else a bare string."""
    key, sep, raw = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(item or "<override>", "override must look like KEY=VALUE")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def resolve_key(key: str) -> tuple[str, ...]:
    head, *rest = key.split(".")
    return KEY_ALIASES.get(head, (head,)) + tuple(rest)


def set_dotted(data: dict[str, Any], key: str, value: Any) -> None:
    """Assign ``value`` at dotted ``key`` in a config mapping.

    Only keys that already exist in the fully-populated mapping may be set.
    """
    path = resolve_key(key)
    node = data
    for part in path[:-1]:
        if not isinstance(node, dict) or part not in node:
            raise ConfigError(key, "unknown configuration key")
        node = node[part]
    if not isinstance(node, dict) or path[-1] not in node:
        raise ConfigError(key, "unknown configuration key")
    node[path[-1]] = copy.deepcopy(value)


def get_dotted(data: dict[str, Any], key: str) -> Any:
    node: Any = data
    for part in resolve_key(key):
        if not isinstance(node, dict) or part not in node:
            raise ConfigError(key, "unknown configuration key")
        node = node[part]
    return node


def sweepable_keys() -> list[str]:
    """Numeric agent parameters accepted by ``freewill sweep``."""
    keys = []
    for section, model in (("freewill", FreeWillParams), ("baseline", BaselineParams)):
        for name, field in model.model_fields.items():
            if field.annotation in (int, float):
                keys.append(f"{section}.{name}")
    return keys


__all__ = [
    "FreeWillParams",
    "BaselineParams",
    "ExperimentConfig",
    "PLOT_NAMES",
    "BUILTIN_SCHEDULES",
    "config_from_dict",
    "load_config",
    "parse_override",
    "set_dotted",
    "get_dotted",
    "sweepable_keys",
]
