"""Free-Will bandit simulation package.

Modules are organized by pipeline stage:
- core: random streams and probability distributions
- env: non-stationary multi-armed bandits and phase schedules
- agents: adaptive-temperature Free-Will agent and decaying epsilon-greedy baseline
- metrics: entropy, KL divergence, novelty, rolling reward, regret
- experiment: seeded runs and aggregation across seeds
- report: CSV traces, SVG plots, run manifests
- cli: command-line entry point (run / reproduce / sweep / verify)
"""

__version__ = "0.1.0"
