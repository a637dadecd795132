"""
Bias against the plug-in scale
==============================

With only 60% good observations, Tukey's estimator is bounded only when the
plug-in scale is large enough.  The theory gives the smallest safe factor
(the "red line"); a small Monte Carlo shows the step in the bias curve next
to it.
"""

from robustcontam import simulation, theory
from robustcontam.rho import tukey

lam = 0.6
red = theory.boundedness_scale_root(tukey(), lam)
print(f"boundedness needs varsigma above {red:.4f}")

grid = [0.3, 0.4, 0.5, 0.55, 0.6, 0.8, 1.0, 1.2, 1.5, 2.0]
rows, meta = simulation.scale_sweep(lam, n=1000, reps=200, grid=grid, base_seed=7)

print(f"{'varsigma':>8s} {'mean':>7s} {'median':>7s} {'huber':>7s} {'tukey':>7s}")
for f in grid:
    vals = {r["estimator"]: r["bias"] for r in rows if r["varsigma"] == f}
    print(f"{f:8.2f} {vals['mean']:7.3f} {vals['median']:7.3f} "
          f"{vals['huber']:7.3f} {vals['tukey']:7.3f}")

# %%
# Below the step the estimate sits on the outlier pile, about max good + 3.

print(f"average max good error + 3 = {meta['mean_max_good'] + 3:.3f}")
print(f"empirical step at varsigma = {simulation.sweep_step_abscissa(rows):.3f}")
