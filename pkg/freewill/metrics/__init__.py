"""Metric series computed from step traces."""
from .information import shannon_entropy, kl_divergence
from .series import moving_average, novelty_series, cumulative_regret
