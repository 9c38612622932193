"""Benchmark island graph: a four-feeder switched feeder reduced to ten vertices.

A virtual root feeds four feeder vertices (F1..F4); five load islands
(v1..v5) hang off the feeders through nine switches.  Every admissible
switch configuration is a spanning tree containing the four root edges, and
the graph's circuit rank of 4 is the minimum sensor count for unambiguous
topology identification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flows import LoadModel
from .graph import Graph


@dataclass(frozen=True)
class IslandFixture:
    graph: Graph
    tau: frozenset[int]  # root-to-feeder edges, present in every valid configuration
    load_model: LoadModel


#: Edge list of the benchmark network.  Ids are positional; each pair is
#: (tail, head) in the reference direction used for signed flows.
ISLAND_EDGES = (
    ("vr", "F1"),  # 0: root feed
    ("vr", "F2"),  # 1: root feed
    ("vr", "F3"),  # 2: root feed
    ("vr", "F4"),  # 3: root feed
    ("F3", "v4"),  # 4
    ("F2", "v1"),  # 5
    ("F1", "v1"),  # 6
    ("F4", "v4"),  # 7
    ("v5", "v4"),  # 8
    ("v2", "v5"),  # 9
    ("v1", "v2"),  # 10
    ("v1", "v3"),  # 11
    ("v4", "v3"),  # 12
)

ISLAND_VERTICES = ("vr", "F1", "F2", "F3", "F4", "v1", "v2", "v3", "v4", "v5")
ISLAND_LOAD_VERTICES = ("v1", "v2", "v3", "v4", "v5")


def build_island_fixture() -> IslandFixture:
    """Construct the benchmark graph, its mandatory root edges, and unit loads.

    Load slots default to mean 1.0 with zero variance; experiments scale the
    noise through LoadModel.with_stddev / with_cv.  Feeder vertices carry no
    consumption (any load co-located with a feeder would sit upstream of
    every switch and is invisible to switch-edge sensors).
    """
    graph = Graph(
        ISLAND_VERTICES,
        ISLAND_EDGES,
        root="vr",
        load_vertices=ISLAND_LOAD_VERTICES,
    )
    tau = graph.root_edges()
    model = LoadModel(
        nodes=ISLAND_LOAD_VERTICES,
        means=np.ones(len(ISLAND_LOAD_VERTICES)),
        variances=np.zeros(len(ISLAND_LOAD_VERTICES)),
    )
    return IslandFixture(graph=graph, tau=tau, load_model=model)
