"""Annulus geometry of a disk-shaped network around a central base station.

The disk of radius ``R_net`` is cut into ``M`` rings of equal width
``r = R_net / M``.  Ring ``i`` (zero-based) spans ``[i*r, (i+1)*r)`` and holds
an expected ``N*(2i+1)/M^2`` nodes under uniform deployment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NetworkConfig:
    node_count: int = 500
    area: float = 25e4
    ring_count: int = 10
    epem_probability: float = 0.05

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError(f"node_count must be >= 1, got {self.node_count}")
        if self.ring_count < 1:
            raise ValueError(f"ring_count must be >= 1, got {self.ring_count}")
        if not self.area > 0:
            raise ValueError(f"area must be > 0, got {self.area}")
        if not 0 < self.epem_probability <= 1:
            raise ValueError(f"epem_probability must be in (0, 1], got {self.epem_probability}")

    @property
    def radius(self) -> float:
        return math.sqrt(self.area / math.pi)

    @property
    def ring_width(self) -> float:
        return self.radius / self.ring_count

    def expected_nodes(self, i: int) -> float:
        return self.node_count * (2 * i + 1) / self.ring_count**2

    def ring(self, i: int) -> "Ring":
        if not 0 <= i < self.ring_count:
            raise ValueError(f"ring index {i} outside [0, {self.ring_count})")
        return Ring(index=i, width=self.ring_width, expected_nodes=self.expected_nodes(i))

    def rings(self) -> list["Ring"]:
        return [self.ring(i) for i in range(self.ring_count)]


@dataclass(frozen=True)
class Ring:
    index: int
    width: float
    expected_nodes: float

    @property
    def label(self) -> int:
        """One-based label used in reports."""
        return self.index + 1

    @property
    def inner_radius(self) -> float:
        return self.index * self.width

    @property
    def outer_radius(self) -> float:
        return (self.index + 1) * self.width

    @property
    def area(self) -> float:
        return math.pi * self.width**2 * (2 * self.index + 1)


def ring_of_distance(config: NetworkConfig, d: float) -> int:
    """Index of the ring containing distance ``d``; ``R_net`` maps to the outermost ring."""
    if not 0 <= d <= config.radius:
        raise ValueError(f"distance {d} outside [0, {config.radius}]")
    return min(int(d / config.ring_width), config.ring_count - 1)


def rings_of_distances(config: NetworkConfig, d: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.size and (d.min() < 0 or d.max() > config.radius):
        raise ValueError("distances outside [0, R_net]")
    idx = np.floor(d / config.ring_width).astype(np.int64)
    return np.minimum(idx, config.ring_count - 1)


def _check_k(k):
    if not k > 0:
        raise ValueError(f"head count k must be > 0, got {k}")


def cluster_radius(ring: Ring, k: float) -> float:
    """Radius of one of ``k`` equal-area circular clusters tiling the ring's area."""
    _check_k(k)
    return ring.width * math.sqrt((2 * ring.index + 1) / k)


def mean_sq_dist_to_head(ring: Ring, k: float) -> float:
    """E[z^2] for a member uniformly placed in a circular cluster with the head at its centre."""
    _check_k(k)
    return ring.width**2 * (2 * ring.index + 1) / (2 * k)


def mean_quad_dist_to_bs(ring: Ring) -> float:
    """E[y^4] for a point uniform over the ring's annulus, y measured from the centre."""
    i = ring.index
    return ring.width**4 * ((i + 1) ** 6 - i**6) / (3 * (2 * i + 1))
