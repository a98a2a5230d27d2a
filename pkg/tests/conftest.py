import pytest

from freewill.config import config_from_dict
from freewill.experiment.runner import run_many
from freewill.presets import load_preset


@pytest.fixture
def small_config():
    """Short 4-arm run with a change at step 150."""
    return config_from_dict({
        "schedule": [
            {"start_step": 0, "probs": [0.8, 0.5, 0.3, 0.2]},
            {"start_step": 150, "probs": [0.2, 0.3, 0.8, 0.2]},
        ],
        "agents": {"freewill": {"trigger_variant": "oracle"}},
        "experiment": {"total_steps": 300, "seeds": [3, 1, 2], "metrics_window": 20},
        "report": {"novelty_zoom": 100},
    })


@pytest.fixture(scope="session")
def fourarm_result():
    return run_many(load_preset("fourarm"))


@pytest.fixture(scope="session")
def tenarm_result():
    return run_many(load_preset("tenarm"))
