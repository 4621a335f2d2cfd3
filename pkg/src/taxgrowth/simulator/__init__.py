from .agents import AgentRun, WealthSnapshot, simulate_agents, transfer_flows
from .config import SimConfig
from .estimators import GrowthEstimate, HillEstimate, estimate_growth, hill_tail_exponent, sample_gini
from .two_sector import TwoSectorPaths, simulate_two_sector

__all__ = [
    "AgentRun",
    "GrowthEstimate",
    "HillEstimate",
    "SimConfig",
    "TwoSectorPaths",
    "WealthSnapshot",
    "estimate_growth",
    "hill_tail_exponent",
    "sample_gini",
    "simulate_agents",
    "simulate_two_sector",
    "transfer_flows",
]
