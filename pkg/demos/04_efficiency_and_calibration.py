"""
Tuning constants and efficiency
===============================

The usual constants 1.345 (Huber) and 4.685 (Tukey) give 95% efficiency
relative to the mean at the normal.  Here they are recovered by root
finding, and the Tukey efficiency is traced as the plug-in scale changes.
"""

from robustcontam import theory
from robustcontam.rho import tukey

for family in ("huber", "tukey"):
    for target in (0.90, 0.95, 0.99):
        c = theory.calibrate_tuning(family, target)
        print(f"{family:>5s}  efficiency {target:.2f}  ->  c = {c:.4f}")

# %%
# A larger plug-in scale widens Tukey's window: efficiency rises towards one
# while the breakdown point falls towards zero.

print(f"{'varsigma':>8s} {'efficiency':>10s} {'breakdown':>9s}")
for f in (0.5, 0.75, 1.0, 1.5, 2.0, 4.0):
    print(f"{f:8.2f} {theory.efficiency(tukey(), f):10.4f} "
          f"{theory.asymptotic_breakdown(tukey(), f):9.4f}")
