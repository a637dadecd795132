"""
Where the IQR and MAD end up under contamination
================================================

Outliers do not move the quartiles of the good data, but they shift which
good quantiles the sample quartiles land on.  The normalized IQR and MAD
therefore converge to the true scale times a factor above one.
"""

import numpy as np

from robustcontam import dgp, estimators, theory
from robustcontam.exceptions import RegimeError

print(f"{'lam':>5s} {'varrho':>7s} {'IQR':>8s} {'emp':>8s} {'MAD':>8s} {'emp':>8s}")
for lam in (0.8, 0.9, 1.0):
    for varrho in sorted(set(np.linspace(0.0, 1.0 - lam, 3))):
        g = theory.ContaminationGeometry(lam, varrho)
        n = 200_000
        cfg = dgp.DgpConfig(n=n, h=int(round(lam * n)), xi=3.0, varrho=varrho)
        sample, _ = dgp.generate(cfg, seed=3)
        print(f"{lam:5.2f} {varrho:7.3f} {theory.consistency_factor_iqr(g):8.4f} "
              f"{estimators.scale_iqr(sample):8.4f} {theory.consistency_factor_mad(g):8.4f} "
              f"{estimators.scale_mad(sample):8.4f}")

# %%
# With three quarters or fewer good points the IQR is no longer controlled.

try:
    theory.consistency_factor_iqr(theory.ContaminationGeometry(0.7))
except RegimeError as exc:
    print("lam = 0.7:", exc)
