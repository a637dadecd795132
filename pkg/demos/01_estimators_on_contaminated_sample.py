"""
Five location estimators on one contaminated sample
===================================================

Draw a DGP4 sample: 80% standard normal errors and 20% outliers stacked at
``max(good) + 3``.  The outliers pull the mean a long way, the median and
Huber part of the way, while Tukey's bisquare and least trimmed squares
ignore them once the scale is right.
"""

import numpy as np

from robustcontam import dgp, estimators
from robustcontam.rho import absolute, huber, squared, tukey

cfg = dgp.preset("dgp4", 400)
sample, good_idx = dgp.generate(cfg, seed=1)
print(f"n={sample.n}, good={good_idx.size}, outliers at {sample.values.max():.3f}")

# %%
# Known scale: plug in sigma0 = 1 and the true number of good points.

for spec in (squared(), absolute(), huber(), tukey()):
    rep = estimators.m_location(sample, spec, 1.0)
    print(f"{spec.family:>9s}  mu_hat = {rep.mu_hat:+.4f}")
lts = estimators.lts_location_scale(sample, cfg.h)
print(f"{'lts':>9s}  mu_hat = {lts.mu_hat:+.4f}  sigma_hat = {lts.sigma_hat:.4f}")

# %%
# Estimated scale: the MAD is inflated by the outliers, so Tukey now sees a
# wider window.  The trimming surrogate recovers h from the sample alone.

print("MAD scale:", round(estimators.scale_mad(sample), 4))
print("IQR scale:", round(estimators.scale_iqr(sample), 4))
rep = estimators.m_location_with_estimated_scale(sample, tukey(), "mad")
print(f"tukey + MAD mu_hat = {rep.mu_hat:+.4f}")
h_hat = estimators.estimate_trimming(sample)
print(f"estimated h = {h_hat} (true {cfg.h})")
