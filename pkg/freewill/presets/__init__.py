"""Frozen run configurations behind ``freewill reproduce``."""
from __future__ import annotations

import json
from importlib import resources

from freewill.config import ExperimentConfig, config_from_dict
from freewill.errors import ConfigError

PRESETS = ("tenarm", "fourarm")

# figure -> (preset, plots emitted)
FIGURES = {
    "fig3": ("tenarm", ["reward"]),
    "fig4": ("tenarm", ["kl"]),
    "fig5": ("tenarm", ["novelty"]),
    "fourarm": ("fourarm", ["reward", "entropy"]),
}


def load_preset(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    text = resources.files(__name__).joinpath(f"{name}.json").read_text(encoding="utf-8")
    return config_from_dict(json.loads(text))


def figure_config(figure: str) -> ExperimentConfig:
    """Preset config for ``figure`` restricted to that figure's plots."""
    try:
        preset, plots = FIGURES[figure]
    except KeyError:
        raise ConfigError("figure", f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}") from None
    return load_preset(preset).with_overrides([f"report.plots={json.dumps(plots)}"])
