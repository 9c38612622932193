"""Detection when loads are only forecasts: likelihood search and fast proxies.

Sensors stay exact but the nodal loads behind them are Gaussian forecasts,
so each candidate tree induces a Gaussian law on the readings and detection
becomes a likelihood contest.  The exact search scores every admissible
tree; the flow-weighted tree and the cycle-descent search approximate it in
polynomial time.  Run with:  python demos/04_noisy_detection.py
"""

import numpy as np

from gridtree import (
    Placement,
    build_island_fixture,
    detect_cycle_descent,
    detect_fmst,
    detect_map,
    detect_zero_flow_map,
    enumerate_spanning_trees,
    hypothesis_flow,
    local_map_search,
    log_likelihood,
)

fx = build_island_fixture()
g = fx.graph
trees = list(enumerate_spanning_trees(g, fx.tau))
pl = Placement((6, 7, 10, 12))

sigma = 0.25
model = fx.load_model.with_stddev(sigma)
rng = np.random.default_rng(2041)

true = trees[31]
x_true = model.means + sigma * rng.standard_normal(5)
s = hypothesis_flow(g, true, pl, x_true)

print(f"True configuration: {true.label()}")
print(f"True loads (hidden): {np.round(x_true, 3)}")
print(f"Forecast loads:      {model.means}")
print(f"Sensor readings:     {np.round(s, 3)}\n")

exact = detect_map(g, pl, model, s, restriction=fx.tau)
zf = detect_zero_flow_map(g, pl, model, s, restriction=fx.tau)
fm = detect_fmst(g, pl, model, s, required_edges=fx.tau)
cd = detect_cycle_descent(g, pl, model, s, required_edges=fx.tau)
fm_local = local_map_search(g, pl, model, s, fm.tree, required_edges=fx.tau)

for r in (exact, zf, fm, fm_local, cd):
    mark = "correct" if r.tree.edge_ids == true.edge_ids else "WRONG"
    print(f"  {r.method:<13} -> {r.tree.label()}   loglik {r.log_likelihood:8.3f}  [{mark}]")

print("\nThe zero-flow variant needs just one linear solve before scoring, yet")
print("assigns every candidate exactly the same likelihood as the full search.")

ranked = sorted(trees, key=lambda t: -log_likelihood(g, t, pl, model, s))
print("\nTop five candidates by log-likelihood:")
for t in ranked[:5]:
    flag = "  <- truth" if t.edge_ids == true.edge_ids else ""
    print(f"  {t.label():<28} {log_likelihood(g, t, pl, model, s):8.3f}{flag}")
