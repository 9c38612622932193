"""Tree detectors: deterministic decoding, exact likelihood search, the
zero-flow likelihood test, and two polynomial-time approximate searches.

All detectors share one Gaussian machinery that tolerates rank-deficient
hypothesis covariances: the density is evaluated on a maximal full-rank
coordinate subset and the remaining coordinates must match their implied
values exactly (within a relative tolerance), otherwise the hypothesis is
assigned -inf.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InconsistentObservationError,
    InvalidPlacementError,
    NoFeasibleHypothesisError,
    UnsupportedPlacementError,
)
from .flows import (
    LoadModel,
    hypothesis_flow_distribution,
    relaxed_flow_solution,
    tree_edge_flows,
)
from .graph import (
    Graph,
    SpanningTree,
    build_incidence,
    circuit_rank,
    enumerate_spanning_trees,
    is_spanning_tree,
    max_weight_spanning_tree,
)
from .cycles import fundamental_cycle_basis
from .placement import Placement, is_valid_placement

_NEG_INF = float("-inf")
_LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class DetectionResult:
    """Detector output: the chosen tree plus run diagnostics."""

    tree: SpanningTree
    log_likelihood: float
    method: str
    iterations: int = 1
    pruned: int = 0
    converged: bool = True

    def csv_row(self) -> list:
        return [
            self.method,
            self.tree.label(),
            f"{self.log_likelihood:.12g}",
            self.iterations,
            self.converged,
        ]


class ReducedGaussian:
    """Gaussian with possibly singular covariance, evaluated on independent coords.

    A greedy scan (ascending coordinate index) keeps a maximal subset whose
    covariance submatrix stays above the eigenvalue guard; every remaining
    coordinate is an affine function of the kept ones and is consistency-checked
    at evaluation time.
    """

    def __init__(self, mean: np.ndarray, cov: np.ndarray):
        mean = np.asarray(mean, dtype=float)
        cov = np.asarray(cov, dtype=float)
        m = len(mean)
        guard = 1e-12 * float(np.trace(cov))
        keep: list[int] = []
        for j in range(m):
            trial = keep + [j]
            sub = cov[np.ix_(trial, trial)]
            if len(trial) == 1:
                ok = sub[0, 0] > guard
            else:
                ok = float(np.linalg.eigvalsh(sub)[0]) > guard
            if ok:
                keep = trial
        dep = [j for j in range(m) if j not in keep]
        self.mean = mean
        self.keep = np.array(keep, dtype=int)
        self.dep = np.array(dep, dtype=int)
        self.rank = len(keep)
        if keep:
            sub = cov[np.ix_(keep, keep)]
            chol = np.linalg.cholesky(sub)
            self.logdet = 2.0 * float(np.sum(np.log(np.diag(chol))))
            self.inv = np.linalg.inv(sub)
            self.mean_keep = mean[self.keep]
            if dep:
                self.dep_coef = cov[np.ix_(dep, keep)] @ self.inv
                self.dep_offset = mean[self.dep] - self.dep_coef @ self.mean_keep
            else:
                self.dep_coef = np.zeros((0, len(keep)))
                self.dep_offset = np.zeros(0)
        else:
            self.logdet = 0.0
            self.inv = np.zeros((0, 0))
            self.mean_keep = np.zeros(0)
            self.dep_coef = np.zeros((m, 0))
            self.dep_offset = mean.copy()

    def _tol(self, values: np.ndarray) -> float:
        scale = max(1.0, float(np.max(np.abs(self.mean), initial=0.0)))
        if values.size:
            scale = max(scale, float(np.max(np.abs(values))))
        return 1e-9 * scale

    def logpdf(self, values: Sequence[float]) -> float:
        v = np.asarray(values, dtype=float)
        tol = self._tol(v)
        if self.dep.size:
            implied = self.dep_offset + self.dep_coef @ v[self.keep]
            if np.max(np.abs(v[self.dep] - implied)) > tol:
                return _NEG_INF
        if not self.rank:
            return 0.0
        d = v[self.keep] - self.mean_keep
        quad = float(d @ self.inv @ d)
        return -0.5 * (self.rank * _LOG_2PI + self.logdet + quad)

    def logpdf_batch(self, values: np.ndarray) -> np.ndarray:
        V = np.asarray(values, dtype=float)
        tol = self._tol(V)
        out = np.zeros(len(V))
        ok = np.ones(len(V), dtype=bool)
        if self.dep.size:
            implied = self.dep_offset + V[:, self.keep] @ self.dep_coef.T
            ok = np.max(np.abs(V[:, self.dep] - implied), axis=1) <= tol
        if self.rank:
            d = V[:, self.keep] - self.mean_keep
            quad = np.einsum("ij,jk,ik->i", d, self.inv, d)
            out = -0.5 * (self.rank * _LOG_2PI + self.logdet + quad)
        out = np.where(ok, out, _NEG_INF)
        return out


class HypothesisCache:
    """Per-(graph, placement, model) memo of hypothesis distributions and bases."""

    def __init__(self, graph: Graph, placement: Placement, model: LoadModel):
        self.graph = graph
        self.placement = placement
        self.model = model
        self._gaussians: dict[frozenset, ReducedGaussian] = {}
        self._bases: dict[frozenset, object] = {}

    def gaussian(self, tree: SpanningTree) -> ReducedGaussian:
        key = tree.edge_ids
        rg = self._gaussians.get(key)
        if rg is None:
            dist = hypothesis_flow_distribution(self.graph, tree, self.placement, self.model)
            rg = ReducedGaussian(dist.mean, dist.covariance)
            self._gaussians[key] = rg
        return rg

    def loglik(self, tree: SpanningTree, observation: Sequence[float]) -> float:
        return self.gaussian(tree).logpdf(observation)

    def basis(self, tree: SpanningTree):
        key = tree.edge_ids
        b = self._bases.get(key)
        if b is None:
            b = fundamental_cycle_basis(self.graph, tree)
            self._bases[key] = b
        return b


def log_likelihood(
    graph: Graph,
    tree: SpanningTree,
    placement: Placement,
    model: LoadModel,
    observation: Sequence[float],
) -> float:
    """Gaussian log-density of the observation under one hypothesized tree."""
    dist = hypothesis_flow_distribution(graph, tree, placement, model)
    return ReducedGaussian(dist.mean, dist.covariance).logpdf(observation)


# -- deterministic decoding ----------------------------------------------------


def detect_deterministic(
    graph: Graph,
    placement: Placement,
    loads: Sequence[float],
    observation: Sequence[float],
    required_edges: Iterable[int] = (),
) -> DetectionResult:
    """Decode the operating tree from exact loads by one linear solve.

    The relaxed flow puts nonzero flow exactly on the loaded edges of the
    operating tree, so its support plus any mandatory edges (edges present in
    every admissible configuration, e.g. the root feeds of an island graph,
    which carry no flow when their feeder serves no island) is the answer.
    Anything else means the observation cannot come from these loads.
    """
    if not is_valid_placement(graph, placement):
        raise InvalidPlacementError("deterministic decoding needs a valid placement")
    x = np.asarray(loads, dtype=float)
    f = relaxed_flow_solution(graph, placement, x, observation)
    tol = 1e-9 * max(1.0, float(np.max(np.abs(x), initial=0.0)))
    support = {e for e in range(graph.n_edges) if abs(f[e]) > tol}
    for eid in required_edges:
        graph.check_edge(eid)
        if abs(f[eid]) > tol and eid not in support:  # pragma: no cover - defensive
            raise InconsistentObservationError("required edge carries inconsistent flow")
        support.add(eid)
    if not is_spanning_tree(graph, support):
        raise InconsistentObservationError(
            f"flow support of size {len(support)} is not a spanning tree; "
            "observation inconsistent with the given loads"
        )
    return DetectionResult(
        tree=SpanningTree(frozenset(support)),
        log_likelihood=0.0,
        method="deterministic",
    )


def detect_enumeration_oracle(
    graph: Graph,
    placement: Placement,
    loads: Sequence[float],
    observation: Sequence[float],
    restriction: Iterable[int] = (),
) -> tuple[SpanningTree, ...]:
    """Every tree whose exact readings match the observation; brute force."""
    x = np.asarray(loads, dtype=float)
    s = np.asarray(observation, dtype=float)
    tol = 1e-9 * max(1.0, float(np.max(np.abs(x), initial=0.0)), float(np.max(np.abs(s), initial=0.0)))
    cols = list(placement.edge_ids)
    hits = []
    for tree in enumerate_spanning_trees(graph, restriction):
        cand = tree_edge_flows(graph, tree, x)[cols] if cols else np.zeros(0)
        if not cols or np.max(np.abs(cand - s)) <= tol:
            hits.append(tree)
    return tuple(hits)


# -- exact likelihood search ----------------------------------------------------


def detect_map(
    graph: Graph,
    placement: Placement,
    model: LoadModel,
    observation: Sequence[float],
    restriction: Iterable[int] = (),
    hypotheses: Sequence[SpanningTree] | None = None,
    cache: HypothesisCache | None = None,
) -> DetectionResult:
    """Most likely tree by exhaustive search over the hypothesis set.

    Ties break toward the lexicographically smallest sorted edge tuple, which
    is the enumeration order.  Raises if every hypothesis is impossible.
    """
    if cache is None:
        cache = HypothesisCache(graph, placement, model)
    if hypotheses is None:
        hypotheses = enumerate_spanning_trees(graph, restriction)
    best_tree = None
    best_ll = _NEG_INF
    n = 0
    pruned = 0
    for tree in hypotheses:
        ll = cache.loglik(tree, observation)
        n += 1
        if ll == _NEG_INF:
            pruned += 1
        elif best_tree is None or ll > best_ll:
            best_tree, best_ll = tree, ll
    if best_tree is None:
        raise NoFeasibleHypothesisError("all hypotheses have zero likelihood")
    return DetectionResult(
        tree=best_tree,
        log_likelihood=best_ll,
        method="map",
        iterations=n,
        pruned=pruned,
    )


# -- zero-flow likelihood test ---------------------------------------------------


def zero_flow_transform(graph: Graph, placement: Placement) -> np.ndarray:
    """|E| x |M| sensitivity of the relaxed flow to the sensor readings.

    Column k is the signed indicator of the fundamental cycle that sensor k's
    edge closes against the unmeasured spanning tree; measured rows form an
    identity block.
    """
    measured = list(placement.edge_ids)
    free = [e for e in range(graph.n_edges) if e not in placement.edge_set]
    if len(free) != graph.n_vertices - 1:
        raise InvalidPlacementError("placement does not leave |V|-1 unmeasured edges")
    B = build_incidence(graph).astype(float)
    Br = np.delete(B, graph.root_index, axis=0)
    try:
        jn = -np.linalg.solve(Br[:, free], Br[:, measured])
    except np.linalg.LinAlgError as exc:
        raise InvalidPlacementError("unmeasured edges do not form a spanning tree") from exc
    J = np.zeros((graph.n_edges, len(measured)))
    J[free, :] = jn
    for k, eid in enumerate(measured):
        J[eid, k] = 1.0
    return J


@dataclass(frozen=True, eq=False)
class ZeroFlowStatistic:
    """Reduced statistic for one hypothesis: the co-tree entries of the
    forecast-based flow, which are zero-mean when the hypothesis is true."""

    indices: tuple[int, ...]
    selector: np.ndarray  # 0/1 matrix picking the co-tree entries out of the flow vector
    mean: np.ndarray
    covariance: np.ndarray
    transform: np.ndarray  # maps sensor deviations to the selected entries

    def transform_determinant(self) -> float:
        return float(np.linalg.det(self.transform))


def zero_flow_statistic(
    graph: Graph,
    placement: Placement,
    model: LoadModel,
    tree: SpanningTree,
    J: np.ndarray | None = None,
) -> ZeroFlowStatistic:
    if J is None:
        J = zero_flow_transform(graph, placement)
    indices = tuple(e for e in range(graph.n_edges) if e not in tree.edge_ids)
    selector = np.zeros((len(indices), graph.n_edges))
    for k, eid in enumerate(indices):
        selector[k, eid] = 1.0
    H = J[list(indices), :]
    dist = hypothesis_flow_distribution(graph, tree, placement, model)
    cov = H @ dist.covariance @ H.T
    return ZeroFlowStatistic(
        indices=indices,
        selector=selector,
        mean=np.zeros(len(indices)),
        covariance=cov,
        transform=H,
    )


def detect_zero_flow_map(
    graph: Graph,
    placement: Placement,
    model: LoadModel,
    observation: Sequence[float],
    restriction: Iterable[int] = (),
) -> DetectionResult:
    """Likelihood search on the unmeasured-edge residuals of one flow solve.

    Computes the relaxed flow once from the forecast loads, then scores each
    hypothesis by how plausibly its co-tree entries are zero.  Selects the
    same tree as detect_map for minimal valid placements.
    """
    mu = circuit_rank(graph)
    if len(placement.edge_ids) != mu:
        raise UnsupportedPlacementError(
            f"zero-flow test needs exactly {mu} sensors, got {len(placement.edge_ids)}"
        )
    if not is_valid_placement(graph, placement):
        raise InvalidPlacementError("zero-flow test needs a valid placement")
    model.check_graph(graph)
    f_o = relaxed_flow_solution(graph, placement, model.means, observation)
    J = zero_flow_transform(graph, placement)
    best_tree = None
    best_ll = _NEG_INF
    n = 0
    pruned = 0
    for tree in enumerate_spanning_trees(graph, restriction):
        stat = zero_flow_statistic(graph, placement, model, tree, J=J)
        rg = ReducedGaussian(stat.mean, stat.covariance)
        ll = rg.logpdf(f_o[list(stat.indices)])
        n += 1
        if ll == _NEG_INF:
            pruned += 1
        elif best_tree is None or ll > best_ll:
            best_tree, best_ll = tree, ll
    if best_tree is None:
        raise NoFeasibleHypothesisError("all hypotheses have zero likelihood")
    return DetectionResult(
        tree=best_tree,
        log_likelihood=best_ll,
        method="zeroflow",
        iterations=n,
        pruned=pruned,
    )


# -- flow-weighted spanning tree -------------------------------------------------


def detect_fmst(
    graph: Graph,
    placement: Placement,
    model: LoadModel,
    observation: Sequence[float],
    required_edges: Iterable[int] = (),
) -> DetectionResult:
    """Two-step approximation: relaxed flow from forecasts, then the spanning
    tree carrying the largest total |flow| (greedy, ties by edge id)."""
    model.check_graph(graph)
    f_o = relaxed_flow_solution(graph, placement, model.means, observation)
    tree = max_weight_spanning_tree(graph, np.abs(f_o), required_edges)
    ll = log_likelihood(graph, tree, placement, model, observation)
    return DetectionResult(tree=tree, log_likelihood=ll, method="fmst")


# -- cycle descent ----------------------------------------------------------------


def feasible_tree(
    graph: Graph,
    observation: Sequence[float],
    placement: Placement,
    zero_tol: float | None = None,
    required_edges: Iterable[int] = (),
) -> SpanningTree:
    """A spanning tree matching the observed zero pattern of the sensors.

    Every sensor edge with a nonzero reading must be in the tree, every
    sensor edge reading zero must be out.  Achieved by a max-weight spanning
    tree with weights |E| for nonzero-measured edges, 1 for unmeasured edges
    and 0 for zero-measured edges; if even that tree violates the pattern, no
    tree satisfies it and the observation is inconsistent.
    """
    s = np.asarray(observation, dtype=float)
    if zero_tol is None:
        zero_tol = 1e-9 * max(1.0, float(np.max(np.abs(s), initial=0.0)))
    required = frozenset(required_edges)
    weights = np.ones(graph.n_edges)
    nonzero, zero = [], []
    for k, eid in enumerate(placement.edge_ids):
        graph.check_edge(eid)
        if abs(s[k]) > zero_tol:
            weights[eid] = float(graph.n_edges)
            nonzero.append(eid)
        else:
            if eid in required:
                raise InconsistentObservationError(
                    "a mandatory edge measured zero flow; no admissible tree matches"
                )
            weights[eid] = 0.0
            zero.append(eid)
    tree = max_weight_spanning_tree(graph, weights, required)
    if any(e not in tree.edge_ids for e in nonzero) or any(e in tree.edge_ids for e in zero):
        raise InconsistentObservationError(
            "no spanning tree matches the observed zero/nonzero sensor pattern"
        )
    return tree


def detect_cycle_descent(
    graph: Graph,
    placement: Placement,
    model: LoadModel,
    observation: Sequence[float],
    max_sweeps: int | None = None,
    cache: HypothesisCache | None = None,
    required_edges: Iterable[int] = (),
) -> DetectionResult:
    """Greedy likelihood ascent over single-edge exchanges along fundamental cycles.

    Starts from a tree matching the observed zero pattern, then repeatedly
    sweeps the fundamental cycles of the current tree, taking the best
    improving exchange on each; stops when a full sweep improves nothing.
    Exchanges never remove a ``required_edges`` member, so a search seeded
    inside the admissible configuration set stays inside it.  The
    accepted-move likelihood sequence is nondecreasing by construction.
    """
    if cache is None:
        cache = HypothesisCache(graph, placement, model)
    required = frozenset(required_edges)
    mu = max(circuit_rank(graph), 1)
    if max_sweeps is None:
        max_sweeps = 100 * mu
    tree = feasible_tree(graph, observation, placement, required_edges=required)
    cur_ll = cache.loglik(tree, observation)
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        sweeps += 1
        improved = False
        for slot in range(mu):
            basis = cache.basis(tree)
            if slot >= len(basis.generators):
                break
            gen = basis.generators[slot]
            cyc = basis.cycles[slot]
            best_ll = cur_ll
            best_tree = None
            for out in sorted(cyc.edges - {gen} - required):
                cand = SpanningTree((tree.edge_ids - {out}) | {gen})
                ll = cache.loglik(cand, observation)
                if ll > best_ll:
                    best_ll, best_tree = ll, cand
            if best_tree is not None:
                tree, cur_ll = best_tree, best_ll
                improved = True
        if not improved:
            converged = True
            break
    return DetectionResult(
        tree=tree,
        log_likelihood=cur_ll,
        method="cycledescent",
        iterations=sweeps,
        converged=converged,
    )


# -- local neighborhood search ------------------------------------------------------


def local_map_search(
    graph: Graph,
    placement: Placement,
    model: LoadModel,
    observation: Sequence[float],
    seed_tree: SpanningTree,
    cache: HypothesisCache | None = None,
    required_edges: Iterable[int] = (),
) -> DetectionResult:
    """Best tree among the seed and its basis-preserving single exchanges.

    The neighborhood consists of trees sharing the seed's fundamental cycle
    basis: swap the generator of a cycle with another edge of that cycle that
    lies on no other basis cycle.  Neighborhood size is at most the sum of
    (cycle length - 1) over the basis.
    """
    if cache is None:
        cache = HypothesisCache(graph, placement, model)
    required = frozenset(required_edges)
    basis = cache.basis(seed_tree)
    candidates: list[SpanningTree] = []
    for k, cyc in enumerate(basis.cycles):
        gen = basis.generators[k]
        others: set[int] = set()
        for j, other in enumerate(basis.cycles):
            if j != k:
                others |= other.edges
        for out in sorted(cyc.edges - {gen} - required):
            if out in others:
                continue
            candidates.append(SpanningTree((seed_tree.edge_ids - {out}) | {gen}))
    best_tree = seed_tree
    best_ll = cache.loglik(seed_tree, observation)
    for cand in candidates:
        ll = cache.loglik(cand, observation)
        if ll > best_ll:
            best_tree, best_ll = cand, ll
    return DetectionResult(
        tree=best_tree,
        log_likelihood=best_ll,
        method="local",
        iterations=1 + len(candidates),
    )
