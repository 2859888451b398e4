"""Optimal per-ring cluster-head election for ring-partitioned sensor networks."""

from .planner import ModelKind, NetworkPlan, RingPlan, k_opt, network_plan, ring_sweep
from .radio import RadioParams
from .rings import NetworkConfig, Ring

__all__ = [
    "ModelKind",
    "NetworkConfig",
    "NetworkPlan",
    "RadioParams",
    "Ring",
    "RingPlan",
    "k_opt",
    "network_plan",
    "ring_sweep",
]
