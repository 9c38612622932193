"""Monte Carlo study: error rates vs. noise, and ranking sensor placements.

Reproducible end to end: every trial's loads derive from the base seed and
the cell indices, so reruns (and different worker counts) give identical
CSVs.  Writes sweep.csv and ranking.csv next to this script.  Run with:
python demos/05_monte_carlo_study.py
"""

from pathlib import Path

import numpy as np

from gridtree import (
    ExperimentConfig,
    LoadModel,
    build_island_fixture,
    cv_scaling,
    enumerate_valid_placements,
    evaluate_placements,
    run_deterministic_sweep,
    run_stochastic_sweep,
)

out_dir = Path(__file__).resolve().parent
fx = build_island_fixture()
g = fx.graph
family = enumerate_valid_placements(g, fx.tau)

# -- exact loads: signed readings always separate configurations ---------------
det = run_deterministic_sweep(g, family, fx.load_model.means, restriction=fx.tau)
worst_unsigned = max(r.eps_unsigned for r in det.rows)
print("Exact-load distinguishability over all 44 placements:")
print(f"  signed readings:   every tree pair separated (collision rate 0)")
print(f"  magnitude only:    up to {100*worst_unsigned:.2f}% of ordered pairs collide")

# -- missed detection vs. forecast noise ---------------------------------------
config = ExperimentConfig(
    graph=g,
    load_model=fx.load_model,
    placements=(family.placements[0],),
    sigmas=(0.1, 0.2, 0.3, 0.4, 0.5),
    trials=200,
    detectors=("map", "fmst", "cycledescent"),
    seed=7,
    restriction=fx.tau,
)
report = run_stochastic_sweep(config)
report.write_csv(out_dir / "sweep.csv")
print(f"\nMissed-detection rates for placement {{{family.placements[0].label()}}}:")
print("  sigma    map     fmst    cycledescent")
for sigma in config.sigmas:
    row = [report.rate(detector=d, sigma=sigma) for d in config.detectors]
    print(f"  {sigma:.2f}   {row[0]:.3f}   {row[1]:.3f}   {row[2]:.3f}")
print(f"(per-tree detail in {out_dir / 'sweep.csv'})")

# -- ranking every placement under forecast-scaling noise -----------------------
means = np.array([300.0, 290.0, 610.0, 150.0, 440.0])  # kW per island
sds = np.array([cv_scaling(m) / 100.0 * m for m in means])
model = LoadModel(fx.load_model.nodes, means, sds**2)
print("\nRanking all 44 placements with per-island forecast noise")
print("  (coefficient of variation from the aggregation scaling law:",
      ", ".join(f"{cv_scaling(m):.2f}%" for m in means) + ")")
ranking, _ = evaluate_placements(
    g, family, model, sigma=0.0, trials=100, seed=7,
    restriction=fx.tau, sigma_mode="model",
)
ranking.write_csv(out_dir / "ranking.csv")
best, worst = ranking.scores[-1], ranking.scores[0]
negligible = sum(s.g2 < 1e-2 for s in ranking.scores)
print(f"  best placement  {{{best.placement}}}: worst-case miss rate {best.g2:.3f}")
print(f"  worst placement {{{worst.placement}}}: worst-case miss rate {worst.g2:.3f}")
print(f"  {negligible} of 44 placements keep every configuration below 1% error")
print(f"(full table in {out_dir / 'ranking.csv'})")
