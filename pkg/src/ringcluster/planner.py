"""Analytic per-ring energy accounting and optimal cluster-head counts.

Every ring is costed independently.  With ``k`` heads in ring ``i`` holding
``N_i`` nodes, one round costs

    l * ((2 E_elec + E_DA) N_i + k eps_mp E[y^4] + eps_fs E[z^2] N_i)

where E[z^2] shrinks like 1/k.  The expression is convex in ``k`` and its
minimiser gives the optimal head count for the unequal-probability model
(UEPEM).  The equal-probability baseline (EPEM) uses ``k = p N_i``.

Head counts are fractional throughout; clamping to ``[1, N_i]`` applies only
to the UEPEM optimum.  Head-to-BS links always use the multipath coefficient
and member-to-head links the free-space one, independent of ``d_threshold``.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .radio import RadioParams
from .rings import (
    NetworkConfig,
    Ring,
    cluster_radius,
    mean_quad_dist_to_bs,
    mean_sq_dist_to_head,
)


class ModelKind(enum.Enum):
    EPEM = "epem"
    UEPEM = "uepem"


MODELS = (ModelKind.UEPEM, ModelKind.EPEM)


def _check_k(k):
    if not k > 0:
        raise ValueError(f"head count k must be > 0, got {k}")


def k_opt(config: NetworkConfig, radio: RadioParams, i: int) -> tuple[float, float]:
    """Return ``(unclamped, clamped)`` optimal head counts for ring ``i``."""
    ring = config.ring(i)
    unclamped = math.sqrt(
        3 * radio.eps_fs * config.node_count * (2 * i + 1) ** 3
        / (2 * radio.eps_mp * config.radius**2 * ((i + 1) ** 6 - i**6))
    )
    clamped = min(ring.expected_nodes, max(1.0, unclamped))
    return unclamped, clamped


def uepem_probability_closed_form(config: NetworkConfig, radio: RadioParams, i: int) -> float:
    """Unclamped UEPEM election probability written directly in network terms."""
    M = config.ring_count
    return (M**2 / config.radius) * math.sqrt(
        3 * radio.eps_fs * (2 * i + 1)
        / (2 * radio.eps_mp * ((i + 1) ** 6 - i**6) * config.node_count)
    )


def epem_expected_heads(config: NetworkConfig, i: int) -> float:
    return config.epem_probability * config.ring(i).expected_nodes


def head_count(config: NetworkConfig, radio: RadioParams, i: int, model: ModelKind) -> float:
    if model is ModelKind.EPEM:
        return epem_expected_heads(config, i)
    return k_opt(config, radio, i)[1]


def election_probability(config: NetworkConfig, radio: RadioParams, i: int, model: ModelKind) -> float:
    ring = config.ring(i)
    if model is ModelKind.EPEM:
        return config.epem_probability
    if not ring.expected_nodes > 0:
        raise ValueError(f"ring {i} has no nodes; election probability undefined")
    return min(1.0, k_opt(config, radio, i)[1] / ring.expected_nodes)


def ch_energy(config: NetworkConfig, radio: RadioParams, i: int, k: float) -> float:
    """Expected energy of one cluster head per round."""
    _check_k(k)
    ring = config.ring(i)
    return radio.packet_bits * (
        (radio.e_elec + radio.e_da) * ring.expected_nodes / k
        + radio.eps_mp * mean_quad_dist_to_bs(ring)
    )


def member_energy(config: NetworkConfig, radio: RadioParams, i: int, k: float) -> float:
    """Expected energy of one member node per round."""
    _check_k(k)
    return radio.packet_bits * (radio.e_elec + radio.eps_fs * mean_sq_dist_to_head(config.ring(i), k))


def cluster_energy(config: NetworkConfig, radio: RadioParams, i: int, k: float) -> float:
    # members per cluster taken as N_i/k (the head itself is not subtracted)
    return ch_energy(config, radio, i, k) + config.ring(i).expected_nodes / k * member_energy(config, radio, i, k)


def ring_total_energy(config: NetworkConfig, radio: RadioParams, i: int, k: float) -> float:
    return k * cluster_energy(config, radio, i, k)


def ring_electronics_energy(config: NetworkConfig, radio: RadioParams, i: int) -> float:
    """Load-independent part of the ring total, ``l (2 E_elec + E_DA) N_i``."""
    return radio.packet_bits * (2 * radio.e_elec + radio.e_da) * config.ring(i).expected_nodes


@dataclass(frozen=True)
class RingPlan:
    ring: Ring
    model: ModelKind
    head_count: float
    head_count_unclamped: float
    election_probability: float
    cluster_radius: float
    cluster_size: float
    e_head_per_round: float
    e_member_per_round: float
    e_cluster_per_round: float
    e_ring_total_per_round: float
    e_ring_excl_electronics: float


def plan_ring(config: NetworkConfig, radio: RadioParams, i: int, model: ModelKind) -> RingPlan:
    ring = config.ring(i)
    if model is ModelKind.EPEM:
        k = k_raw = epem_expected_heads(config, i)
    else:
        k_raw, k = k_opt(config, radio, i)
    e_cluster = cluster_energy(config, radio, i, k)
    total = k * e_cluster
    return RingPlan(
        ring=ring,
        model=model,
        head_count=k,
        head_count_unclamped=k_raw,
        election_probability=election_probability(config, radio, i, model),
        cluster_radius=cluster_radius(ring, k),
        cluster_size=ring.expected_nodes / k,
        e_head_per_round=ch_energy(config, radio, i, k),
        e_member_per_round=member_energy(config, radio, i, k),
        e_cluster_per_round=e_cluster,
        e_ring_total_per_round=total,
        e_ring_excl_electronics=total - ring_electronics_energy(config, radio, i),
    )


@dataclass(frozen=True)
class NetworkPlan:
    config: NetworkConfig
    radio: RadioParams
    rings: dict  # ModelKind -> list[RingPlan]

    def total(self, model: ModelKind) -> float:
        return sum(p.e_ring_total_per_round for p in self.rings[model])

    @property
    def total_ratio(self) -> float:
        return self.total(ModelKind.UEPEM) / self.total(ModelKind.EPEM)

    def ratio_series(self, attr: str) -> list[float]:
        """Per-ring UEPEM/EPEM ratio of a RingPlan attribute."""
        return [
            getattr(u, attr) / getattr(e, attr)
            for u, e in zip(self.rings[ModelKind.UEPEM], self.rings[ModelKind.EPEM])
        ]


def network_plan(config: NetworkConfig, radio: RadioParams, workers: int | None = None) -> NetworkPlan:
    """Plan every ring under both models.  ``workers`` > 1 evaluates rings on a thread pool."""
    jobs = [(i, m) for m in MODELS for i in range(config.ring_count)]
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            plans = list(pool.map(lambda job: plan_ring(config, radio, *job), jobs))
    else:
        plans = [plan_ring(config, radio, i, m) for i, m in jobs]
    rings = {m: [p for p in plans if p.model is m] for m in MODELS}
    return NetworkPlan(config=config, radio=radio, rings=rings)


@dataclass(frozen=True)
class SweepPoint:
    ring_count: int
    uepem_total: float
    epem_total: float

    @property
    def ratio(self) -> float:
        return self.uepem_total / self.epem_total


def ring_sweep(config: NetworkConfig, radio: RadioParams, m_max: int, m_min: int = 1) -> list[SweepPoint]:
    if m_max < 1 or m_min < 1 or m_min > m_max:
        raise ValueError(f"invalid sweep bounds [{m_min}, {m_max}]")
    points = []
    for m in range(m_min, m_max + 1):
        plan = network_plan(replace(config, ring_count=m), radio)
        points.append(SweepPoint(m, plan.total(ModelKind.UEPEM), plan.total(ModelKind.EPEM)))
    return points


def hetero_deployment(config: NetworkConfig, radio: RadioParams) -> list[tuple[int, int]]:
    """High-capability (category I) node count per ring, as ``(label, count)``.

    Rounded up so that deployed capacity never falls below the optimum.
    """
    return [(i + 1, math.ceil(k_opt(config, radio, i)[1])) for i in range(config.ring_count)]
