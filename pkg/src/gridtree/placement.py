"""Sensor placements: validity, the tree/placement complement bijection,
family enumeration, and a brute-force identifiability oracle.

A placement is *valid* when removing its edges leaves a spanning tree; that
is exactly the condition under which every operating tree produces a unique
signed flow observation (for generic loads), and it forces the minimum
sensor count |M| = circuit_rank(G).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidPlacementError
from .graph import (
    Graph,
    SpanningTree,
    circuit_rank,
    enumerate_spanning_trees,
    is_spanning_tree,
)


@dataclass(frozen=True)
class Placement:
    """Measured edges; position in the tuple is the sensor index."""

    edge_ids: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.edge_ids)) != len(self.edge_ids):
            raise InvalidPlacementError("duplicate sensor edges")

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edge_ids)

    def __len__(self) -> int:
        return len(self.edge_ids)

    def label(self) -> str:
        return " ".join(str(e) for e in self.edge_ids)


@dataclass(frozen=True)
class PlacementFamily:
    placements: tuple[Placement, ...]
    forbidden: frozenset[int]

    def __len__(self) -> int:
        return len(self.placements)

    def __iter__(self):
        return iter(self.placements)


def is_valid_placement(graph: Graph, placement: Placement) -> bool:
    """True iff the unmeasured edges form a spanning tree (O(|E|) union-find)."""
    for eid in placement.edge_ids:
        graph.check_edge(eid)
    rest = [e for e in range(graph.n_edges) if e not in placement.edge_set]
    return is_spanning_tree(graph, rest)


def placement_to_tree(graph: Graph, placement: Placement) -> SpanningTree:
    if not is_valid_placement(graph, placement):
        raise InvalidPlacementError("complement of the placement is not a spanning tree")
    return SpanningTree(frozenset(range(graph.n_edges)) - placement.edge_set)


def tree_to_placement(graph: Graph, tree: SpanningTree) -> Placement:
    return Placement(tuple(e for e in range(graph.n_edges) if e not in tree.edge_ids))


def tree_placement_bijection(graph: Graph, tree_or_placement):
    """Complement map between spanning trees and valid placements; an involution."""
    if isinstance(tree_or_placement, SpanningTree):
        return tree_to_placement(graph, tree_or_placement)
    if isinstance(tree_or_placement, Placement):
        return placement_to_tree(graph, tree_or_placement)
    raise TypeError("expected a SpanningTree or a Placement")


def enumerate_valid_placements(
    graph: Graph, forbidden_edges: Iterable[int] = ()
) -> PlacementFamily:
    """All minimal valid placements avoiding ``forbidden_edges``.

    These are exactly the complements of the spanning trees that contain the
    forbidden edges, so the family size equals that restricted tree count.
    """
    forbidden = frozenset(forbidden_edges)
    placements = tuple(
        tree_to_placement(graph, t) for t in enumerate_spanning_trees(graph, forbidden)
    )
    return PlacementFamily(placements=placements, forbidden=forbidden)


def naive_identifiability_oracle(
    graph: Graph, placement: Placement, loads: Sequence[float]
) -> bool:
    """Brute-force check that all spanning trees yield distinct observations.

    Enumerates every spanning tree, computes its exact sensor readings under
    ``loads``, and compares all pairs.  Quadratic in the tree count; meant as
    ground truth for the O(|E|) validity test.  Distinctness is only
    guaranteed to match validity for *generic* loads (drawn from a continuous
    distribution): structured loads such as exact zeros can collide
    observations even for valid placements.
    """
    from .flows import tree_edge_flows

    x = np.asarray(loads, dtype=float)
    if np.any(x <= 0):
        warnings.warn("nonpositive loads are degenerate for identifiability checks")
    trees = list(enumerate_spanning_trees(graph))
    if len(trees) <= 1:
        return True
    if not placement.edge_ids:
        return False
    cols = list(placement.edge_ids)
    obs = np.empty((len(trees), len(cols)))
    for i, tree in enumerate(trees):
        obs[i] = tree_edge_flows(graph, tree, x)[cols]
    return len(np.unique(obs, axis=0)) == len(trees)


def minimum_sensor_count(graph: Graph) -> int:
    """Sensors needed for identifiability: the circuit rank."""
    return circuit_rank(graph)
