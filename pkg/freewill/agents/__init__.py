"""Tabular agents behind one select/observe contract."""
from .base import Agent, ActionTable, StateId
from .freewill import (
    AgentState,
    FreeWillAgent,
    action_scores,
    freewill_observe,
    freewill_policy,
    freewill_select,
    intrinsic_bonus,
    psi_update,
    surprise,
    temperature_update,
)
from .baseline import (
    EpsilonGreedyAgent,
    baseline_observe,
    baseline_policy_distribution,
    baseline_select,
)
