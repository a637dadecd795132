"""
A small bias table
==================

The command-line ``bias-table`` in library form: every preset at one sample
size, known scale and known trimming.  Raise ``reps`` for publication-grade
standard errors.
"""

from robustcontam import simulation

rows = simulation.bias_table(["dgp1", "dgp2", "dgp3", "dgp4", "dgp5", "dgp6"], [100],
                             reps=300, base_seed=11)
estimators = simulation.ESTIMATORS
print(f"{'preset':>6s} " + " ".join(f"{e:>7s}" for e in estimators))
for preset in ("dgp1", "dgp2", "dgp3", "dgp4", "dgp5", "dgp6"):
    vals = {r["estimator"]: r["abs_bias"] for r in rows if r["preset"] == preset}
    print(f"{preset:>6s} " + " ".join(f"{vals[e]:7.3f}" for e in estimators))
