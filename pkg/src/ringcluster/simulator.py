"""Monte Carlo deployment, head election, Voronoi clustering and one-round energy.

All randomness flows from explicit integer seeds through
``numpy.random.SeedSequence`` so every result is a pure function of its
inputs.  Deployments and assignments are held as numpy arrays indexed by
node id; :meth:`Deployment.nodes` gives a per-node record view.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import planner
from .planner import ModelKind
from .radio import RadioParams
from .rings import NetworkConfig, cluster_radius, rings_of_distances

NEAREST_GLOBAL = "nearest_global"
NEAREST_IN_RING = "nearest_in_ring"
POLICIES = (NEAREST_GLOBAL, NEAREST_IN_RING)

PAPER_FAITHFUL = "paper_faithful"
THRESHOLDED = "thresholded"
BRANCH_MODES = (PAPER_FAITHFUL, THRESHOLDED)

# stream tags mixed into per-purpose seed sequences
_DEPLOY, _ELECT = 0, 1


class EmptyElectionError(ValueError):
    """No node in the whole network was elected head."""


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, stream]))


def trial_seed(base_seed: int, trial: int) -> int:
    """64-bit seed for trial ``trial``, derived by hashing ``(base_seed, trial)``.

    Depends only on the pair, so appending trials leaves earlier seeds unchanged.
    """
    state = np.random.SeedSequence([base_seed, trial]).generate_state(1, np.uint64)
    return int(state[0])


@dataclass(frozen=True)
class Node:
    id: int
    position: tuple[float, float]
    ring: int
    dist_to_bs: float
    role: str
    head_id: int | None
    dist_to_head: float | None


@dataclass(frozen=True, eq=False)
class Deployment:
    config: NetworkConfig
    seed: int
    x: np.ndarray
    y: np.ndarray
    dist_to_bs: np.ndarray
    ring: np.ndarray

    @property
    def size(self) -> int:
        return len(self.x)

    def nodes(self, assignment: "Assignment | None" = None) -> list[Node]:
        out = []
        for n in range(self.size):
            role, head, dth = "member", None, None
            if assignment is not None:
                if assignment.is_head[n]:
                    role = "head"
                elif assignment.head_id[n] >= 0:
                    head, dth = int(assignment.head_id[n]), float(assignment.dist_to_head[n])
            out.append(Node(n, (float(self.x[n]), float(self.y[n])), int(self.ring[n]),
                            float(self.dist_to_bs[n]), role, head, dth))
        return out


def deploy(config: NetworkConfig, seed: int) -> Deployment:
    """Drop ``N`` nodes uniformly on the disk (radius inversion plus uniform angle)."""
    rng = _rng(seed, _DEPLOY)
    u = rng.random(config.node_count)
    theta = rng.random(config.node_count) * (2 * math.pi)
    d = config.radius * np.sqrt(u)
    return Deployment(
        config=config,
        seed=seed,
        x=d * np.cos(theta),
        y=d * np.sin(theta),
        dist_to_bs=d,
        ring=rings_of_distances(config, d),
    )


def ring_probabilities(config: NetworkConfig, radio: RadioParams, model: ModelKind) -> np.ndarray:
    return np.array([planner.election_probability(config, radio, i, model) for i in range(config.ring_count)])


def elect_heads(deployment: Deployment, probabilities, seed: int) -> np.ndarray:
    """Independent Bernoulli election, each node using its ring's probability."""
    probabilities = np.asarray(probabilities, dtype=float)
    if len(probabilities) != deployment.config.ring_count:
        raise ValueError("need one probability per ring")
    if np.any(probabilities <= 0) or np.any(probabilities > 1):
        raise ValueError("election probabilities must lie in (0, 1]")
    draws = _rng(seed, _ELECT).random(deployment.size)
    return draws < probabilities[deployment.ring]


@dataclass(frozen=True, eq=False)
class Assignment:
    """Cluster membership.  ``head_id`` is -1 for heads and for orphaned members."""

    policy: str
    is_head: np.ndarray
    head_id: np.ndarray
    dist_to_head: np.ndarray  # nan where head_id is -1

    @property
    def orphans(self) -> np.ndarray:
        return ~self.is_head & (self.head_id < 0)

    def members_of(self) -> np.ndarray:
        """Member count for every node id (zero for non-heads)."""
        return np.bincount(self.head_id[self.head_id >= 0], minlength=len(self.is_head))


def assign_members(deployment: Deployment, is_head, policy: str = NEAREST_GLOBAL,
                   chunk: int = 4096) -> Assignment:
    """Join every member to its closest head; ties go to the lower head id.

    ``nearest_in_ring`` only considers heads in the member's own ring; a member
    whose ring elected nobody is left orphaned (``head_id == -1``).
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    is_head = np.asarray(is_head, dtype=bool)
    heads = np.flatnonzero(is_head)  # ascending ids, so argmin picks the lowest on ties
    if heads.size == 0:
        raise EmptyElectionError("election produced zero cluster heads network-wide")

    n = deployment.size
    head_id = np.full(n, -1, dtype=np.int64)
    dist = np.full(n, np.nan)
    members = np.flatnonzero(~is_head)
    hx, hy, hr = deployment.x[heads], deployment.y[heads], deployment.ring[heads]
    for start in range(0, members.size, chunk):
        m = members[start:start + chunk]
        d2 = (deployment.x[m, None] - hx[None, :]) ** 2 + (deployment.y[m, None] - hy[None, :]) ** 2
        if policy == NEAREST_IN_RING:
            d2 = np.where(deployment.ring[m, None] == hr[None, :], d2, np.inf)
        best = np.argmin(d2, axis=1)
        best_d2 = d2[np.arange(m.size), best]
        ok = np.isfinite(best_d2)
        head_id[m[ok]] = heads[best[ok]]
        dist[m[ok]] = np.sqrt(best_d2[ok])
    return Assignment(policy=policy, is_head=is_head, head_id=head_id, dist_to_head=dist)


@dataclass(frozen=True, eq=False)
class RoundOutcome:
    """Energy ledger of one round.  Per-ring arrays are indexed by ring;
    a head's energy is booked in the ring of the head's own position."""

    branch_mode: str
    node_energy: np.ndarray
    ring_head_energy: np.ndarray
    ring_member_energy: np.ndarray
    ring_electronics_energy: np.ndarray
    ring_heads: np.ndarray
    ring_nodes: np.ndarray
    cluster_sizes: np.ndarray  # members per head, in head-id order
    ring_fallback: np.ndarray

    @property
    def ring_total(self) -> np.ndarray:
        return self.ring_head_energy + self.ring_member_energy

    @property
    def total(self) -> float:
        return float(self.node_energy.sum())

    @property
    def fallback_events(self) -> int:
        return int(self.ring_fallback.sum())


def simulate_round(deployment: Deployment, assignment: Assignment, radio: RadioParams,
                   branch_mode: str = PAPER_FAITHFUL) -> RoundOutcome:
    """Charge every node for one sense/transmit/aggregate/uplink cycle.

    Members pay ``tx(l, dist_to_head)``; heads pay one reception per member,
    aggregation of ``members + 1`` signals (their own reading included, with no
    reception for it) and ``tx(l, dist_to_bs)``.  In ``paper_faithful`` mode the
    member link is forced free-space and the uplink forced multipath; in
    ``thresholded`` mode both switch on ``d_threshold``.  Orphaned members send
    straight to the base station with the thresholded branch.
    """
    if branch_mode not in BRANCH_MODES:
        raise ValueError(f"unknown branch mode {branch_mode!r}; expected one of {BRANCH_MODES}")
    l = radio.packet_bits
    M = deployment.config.ring_count
    is_head = assignment.is_head
    members = ~is_head & (assignment.head_id >= 0)
    orphans = assignment.orphans
    n_members = assignment.members_of()

    def amp(d, multipath):
        return np.where(multipath, radio.eps_mp * d**4, radio.eps_fs * d**2)

    energy = np.zeros(deployment.size)
    electronics = np.zeros(deployment.size)

    dth = assignment.dist_to_head[members]
    mp = dth >= radio.d_threshold if branch_mode == THRESHOLDED else np.zeros(dth.shape, bool)
    energy[members] = l * radio.e_elec + l * amp(dth, mp)
    electronics[members] = l * radio.e_elec

    dbs = deployment.dist_to_bs[orphans]
    energy[orphans] = l * radio.e_elec + l * amp(dbs, dbs >= radio.d_threshold)
    electronics[orphans] = l * radio.e_elec

    dbs = deployment.dist_to_bs[is_head]
    mp = dbs >= radio.d_threshold if branch_mode == THRESHOLDED else np.ones(dbs.shape, bool)
    k = n_members[is_head]
    head_elec = l * radio.e_elec * k + l * radio.e_da * (k + 1) + l * radio.e_elec
    energy[is_head] = head_elec + l * amp(dbs, mp)
    electronics[is_head] = head_elec

    ring = deployment.ring
    return RoundOutcome(
        branch_mode=branch_mode,
        node_energy=energy,
        ring_head_energy=np.bincount(ring, weights=np.where(is_head, energy, 0.0), minlength=M),
        ring_member_energy=np.bincount(ring, weights=np.where(is_head, 0.0, energy), minlength=M),
        ring_electronics_energy=np.bincount(ring, weights=electronics, minlength=M),
        ring_heads=np.bincount(ring[is_head], minlength=M),
        ring_nodes=np.bincount(ring, minlength=M),
        cluster_sizes=k,
        ring_fallback=np.bincount(ring[orphans], minlength=M),
    )


@dataclass(frozen=True)
class MomentEstimates:
    """Empirical ``E[z^2]`` and ``E[y^4]`` per ring with unbiased standard errors."""

    head_counts: np.ndarray
    z2_mean: np.ndarray
    z2_se: np.ndarray
    y4_mean: np.ndarray
    y4_se: np.ndarray
    samples: int


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def estimate_moments(config: NetworkConfig, samples: int, seed: int, head_counts=None) -> MomentEstimates:
    """Sample ``y^4`` uniformly over each ring's annulus and ``z^2`` uniformly over
    a disk of radius ``cluster_radius(ring, k)``.

    ``head_counts`` defaults to one head per ring.
    """
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    M = config.ring_count
    ks = np.ones(M) if head_counts is None else np.asarray(head_counts, dtype=float)
    rng = _rng(seed, 2)
    z2m, z2s, y4m, y4s = (np.empty(M) for _ in range(4))
    for ring in config.rings():
        a, b = ring.inner_radius, ring.outer_radius
        y = np.sqrt(a * a + rng.random(samples) * (b * b - a * a))
        y4m[ring.index], y4s[ring.index] = _mean_se(y**4)
        rc = cluster_radius(ring, ks[ring.index])
        z = rc * np.sqrt(rng.random(samples))
        z2m[ring.index], z2s[ring.index] = _mean_se(z**2)
    return MomentEstimates(ks, z2m, z2s, y4m, y4s, samples)


QUANTITIES = ("total", "head_energy", "member_energy", "electronics", "heads", "nodes", "fallback")


@dataclass(frozen=True)
class TrialStats:
    """Across-trial per-ring mean, standard deviation and standard error.

    Each dict maps a name from ``QUANTITIES`` to a per-ring array.
    """

    trials: int
    mean: dict
    std: dict
    se: dict
    network_total_mean: float
    network_total_se: float


def run_one_trial(config: NetworkConfig, radio: RadioParams, probabilities, seed: int,
                  policy: str = NEAREST_GLOBAL, branch_mode: str = PAPER_FAITHFUL) -> RoundOutcome:
    dep = deploy(config, seed)
    heads = elect_heads(dep, probabilities, seed)
    return simulate_round(dep, assign_members(dep, heads, policy), radio, branch_mode)


def _trial_row(args) -> np.ndarray:
    out = run_one_trial(*args)
    return np.stack([
        out.ring_total,
        out.ring_head_energy,
        out.ring_member_energy,
        out.ring_electronics_energy,
        out.ring_heads.astype(float),
        out.ring_nodes.astype(float),
        out.ring_fallback.astype(float),
    ])


def run_trials(config: NetworkConfig, radio: RadioParams, model: ModelKind, trials: int,
               base_seed: int, policy: str = NEAREST_GLOBAL, branch_mode: str = PAPER_FAITHFUL,
               workers: int | None = None) -> TrialStats:
    """Replicate independent rounds; trial ``t`` is seeded by ``trial_seed(base_seed, t)``.

    With ``workers`` > 1 trials run in a process pool; results are gathered in
    trial order so aggregates do not depend on scheduling.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    probs = ring_probabilities(config, radio, model)
    jobs = [(config, radio, probs, trial_seed(base_seed, t), policy, branch_mode) for t in range(trials)]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_trial_row, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        rows = [_trial_row(job) for job in jobs]
    data = np.stack(rows)  # (trials, quantity, ring)

    mean = data.mean(axis=0)
    std = data.std(axis=0, ddof=1) if trials > 1 else np.zeros_like(mean)
    se = std / math.sqrt(trials)
    totals = data[:, 0, :].sum(axis=1)
    total_se = float(totals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return TrialStats(
        trials=trials,
        mean=dict(zip(QUANTITIES, mean)),
        std=dict(zip(QUANTITIES, std)),
        se=dict(zip(QUANTITIES, se)),
        network_total_mean=float(totals.mean()),
        network_total_se=total_se,
    )
