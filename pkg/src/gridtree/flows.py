"""Load model, observation matrices, and network-flow linear algebra.

Sign convention: a measured value is positive when power flows along the
edge's reference direction (tail -> head).  The consumption vector is
``y = [sum(x) at the root, -x at load vertices, 0 elsewhere]`` so that the
incidence system ``B f = y`` balances production against consumption.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .errors import InvalidPlacementError, ModelError
from .graph import Graph, SpanningTree, build_incidence
from .placement import Placement


@dataclass(frozen=True, eq=False)
class LoadModel:
    """Per-node forecast mean and independent error variance (diagonal covariance)."""

    nodes: tuple[Hashable, ...]
    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", np.asarray(self.means, dtype=float))
        object.__setattr__(self, "variances", np.asarray(self.variances, dtype=float))
        if self.means.shape != (len(self.nodes),) or self.variances.shape != (len(self.nodes),):
            raise ModelError("means/variances must have one entry per node")
        if np.any(self.variances < 0):
            raise ModelError("negative variance")

    @property
    def stddevs(self) -> np.ndarray:
        return np.sqrt(self.variances)

    def with_stddev(self, sigma: float) -> "LoadModel":
        """Same means, one absolute standard deviation for every node."""
        if sigma < 0:
            raise ModelError("negative standard deviation")
        return LoadModel(self.nodes, self.means, np.full(len(self.nodes), sigma**2))

    def with_cv(self, cv_percent: float) -> "LoadModel":
        """Same means, per-node standard deviation = (cv_percent/100) * mean."""
        if cv_percent < 0:
            raise ModelError("negative coefficient of variation")
        sd = np.abs(self.means) * (cv_percent / 100.0)
        return LoadModel(self.nodes, self.means, sd**2)

    def check_graph(self, graph: Graph) -> None:
        if tuple(self.nodes) != tuple(graph.load_vertices):
            raise ModelError("load model nodes must match the graph's load vertices in order")


def sample_loads(model: LoadModel, seed: int) -> np.ndarray:
    """One independent Gaussian draw per node; identical seeds give identical vectors."""
    rng = np.random.default_rng(seed)
    return model.means + model.stddevs * rng.standard_normal(len(model.nodes))


def consumption_vector(graph: Graph, loads: Sequence[float]) -> np.ndarray:
    """Net injection per vertex: total at the root, -load at load vertices; sums to zero."""
    x = np.asarray(loads, dtype=float)
    if x.shape != (len(graph.load_vertices),):
        raise ModelError("one load per load vertex required")
    y = np.zeros(graph.n_vertices)
    for v, xv in zip(graph.load_vertices, x):
        y[graph.vertex_index(v)] = -xv
    y[graph.root_index] = x.sum()
    return y


# -- observation matrices ----------------------------------------------------


def _downstream_structure(graph: Graph, tree: SpanningTree):
    """DFS order, subtree extents and parent edges of the tree rooted at graph.root."""
    adj: dict = {v: [] for v in graph.vertices}
    for eid in tree.edge_ids:
        u, v = graph.edges[eid]
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    parent_edge: dict = {graph.root: None}
    order: list = []
    stack = [(graph.root, False)]
    first = {}
    last = {}
    while stack:
        node, done = stack.pop()
        if done:
            last[node] = len(order)
            continue
        first[node] = len(order)
        order.append(node)
        stack.append((node, True))
        for y, eid in adj[node]:
            if y not in parent_edge:
                parent_edge[y] = eid
                stack.append((y, False))
    if len(order) != graph.n_vertices:
        raise ModelError("tree does not span the graph")
    return parent_edge, first, last, order


def observation_matrix(graph: Graph, tree: SpanningTree, placement: Placement) -> np.ndarray:
    """|M| x |load_vertices| matrix mapping loads to measured flows under a tree.

    Entry (k, j) is +1 when load j sits strictly downstream of sensor k and
    the reference direction points away from the root, -1 when it points
    toward the root, 0 otherwise.  Sensors on unused (co-tree) edges give
    all-zero rows.
    """
    for eid in placement.edge_ids:
        graph.check_edge(eid)
    parent_edge, first, last, order = _downstream_structure(graph, tree)
    pos = {v: i for i, v in enumerate(order)}
    gamma = np.zeros((len(placement.edge_ids), len(graph.load_vertices)))
    load_pos = [(j, pos[v]) for j, v in enumerate(graph.load_vertices)]
    for k, eid in enumerate(placement.edge_ids):
        if eid not in tree.edge_ids:
            continue
        tail, head = graph.edges[eid]
        if parent_edge.get(head) == eid:
            child, sign = head, 1.0
        else:
            child, sign = tail, -1.0
        lo, hi = first[child], last[child]
        for j, p in load_pos:
            if lo <= p < hi:
                gamma[k, j] = sign
    return gamma


def observation_matrix_from_incidence(
    graph: Graph, tree: SpanningTree, placement: Placement
) -> np.ndarray:
    """Same matrix computed by inverting the reduced tree incidence system.

    Solves B_w^r f = y^r for the tree-edge flows and reads off the rows of
    the inverse at the measured edges; kept as an independent route for
    cross-checking the traversal construction.
    """
    B = build_incidence(graph).astype(float)
    r = graph.root_index
    Br = np.delete(B, r, axis=0)
    tree_cols = sorted(tree.edge_ids)
    Bw = Br[:, tree_cols]
    inv = np.linalg.inv(Bw)
    col_of = {e: i for i, e in enumerate(tree_cols)}
    non_root = [v for v in graph.vertices if v != graph.root]
    load_col = [non_root.index(v) for v in graph.load_vertices]
    gamma = np.zeros((len(placement.edge_ids), len(graph.load_vertices)))
    for k, eid in enumerate(placement.edge_ids):
        if eid in col_of:
            gamma[k] = -inv[col_of[eid], load_col]
    return gamma


def hypothesis_flow(
    graph: Graph, tree: SpanningTree, placement: Placement, loads: Sequence[float]
) -> np.ndarray:
    """Exact sensor readings for a hypothesized tree: downstream load sums, signed."""
    x = np.asarray(loads, dtype=float)
    return observation_matrix(graph, tree, placement) @ x


def tree_edge_flows(graph: Graph, tree: SpanningTree, loads: Sequence[float]) -> np.ndarray:
    """Signed flow on every edge of the graph under a tree (zero on co-tree edges)."""
    x = np.asarray(loads, dtype=float)
    load_of = dict(zip(graph.load_vertices, x))
    parent_edge, first, last, order = _downstream_structure(graph, tree)
    subtree = {v: load_of.get(v, 0.0) for v in graph.vertices}
    for v in reversed(order):
        eid = parent_edge[v]
        if eid is None:
            continue
        tail, head = graph.edges[eid]
        up = tail if head == v else head
        subtree[up] += subtree[v]
    flows = np.zeros(graph.n_edges)
    for v in order:
        eid = parent_edge[v]
        if eid is None:
            continue
        tail, head = graph.edges[eid]
        flows[eid] = subtree[v] if head == v else -subtree[v]
    return flows


# -- relaxed flow solution ----------------------------------------------------


def relaxed_flow_solution(
    graph: Graph,
    placement: Placement,
    loads: Sequence[float],
    observation: Sequence[float],
) -> np.ndarray:
    """Unique flow on the whole graph consistent with loads and sensor readings.

    Pins the measured edges to the observed values and solves the remaining
    square (|V|-1) conservation system for the unmeasured edges.  The system
    is invertible exactly when the placement is valid; its support encodes
    the operating tree when the observation is consistent.
    """
    s = np.asarray(observation, dtype=float)
    if s.shape != (len(placement.edge_ids),):
        raise InvalidPlacementError("one observation per sensor required")
    measured = list(placement.edge_ids)
    free = [e for e in range(graph.n_edges) if e not in placement.edge_set]
    if len(free) != graph.n_vertices - 1:
        raise InvalidPlacementError("placement does not leave |V|-1 unmeasured edges")
    B = build_incidence(graph).astype(float)
    Br = np.delete(B, graph.root_index, axis=0)
    y = consumption_vector(graph, loads)
    yr = np.delete(y, graph.root_index)
    rhs = yr - Br[:, measured] @ s
    try:
        f_free = np.linalg.solve(Br[:, free], rhs)
    except np.linalg.LinAlgError as exc:
        raise InvalidPlacementError("unmeasured edges do not form a spanning tree") from exc
    f = np.zeros(graph.n_edges)
    f[free] = f_free
    f[measured] = s
    return f


def flow_residual(graph: Graph, flows: Sequence[float], loads: Sequence[float]) -> float:
    """Max abs violation of conservation ``B f = y`` over all vertices."""
    B = build_incidence(graph).astype(float)
    y = consumption_vector(graph, loads)
    return float(np.max(np.abs(B @ np.asarray(flows, dtype=float) - y)))


# -- hypothesis flow distribution ---------------------------------------------


@dataclass(frozen=True, eq=False)
class HypothesisFlowDistribution:
    """Gaussian law of the sensor vector under one hypothesized tree."""

    mean: np.ndarray
    covariance: np.ndarray


def hypothesis_flow_distribution(
    graph: Graph, tree: SpanningTree, placement: Placement, model: LoadModel
) -> HypothesisFlowDistribution:
    """Mean = forecast readings; covariance = Gamma diag(var) Gamma^T."""
    model.check_graph(graph)
    gamma = observation_matrix(graph, tree, placement)
    mean = gamma @ model.means
    cov = (gamma * model.variances) @ gamma.T
    return HypothesisFlowDistribution(mean=mean, covariance=cov)


def cv_scaling(aggregate_kw: float) -> float:
    """Forecast-error coefficient of variation (percent) vs. aggregate power.

    Decreases with aggregation and saturates at sqrt(41.9) ~ 6.47 percent.
    """
    if aggregate_kw <= 0:
        raise ModelError("aggregate power must be positive")
    return math.sqrt(3562.0 / aggregate_kw + 41.9)
