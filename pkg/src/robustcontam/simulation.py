"""
Monte Carlo harness: bias tables, the scale-factor sweep, theory reports
and the oracle self-check.

Every repetition is a pure function of ``(config, base_seed, rep)``: its
random stream is seeded with ``base_seed XOR rep``.  Repetitions may run in
worker processes, but results are gathered into an array ordered by
repetition index and reduced in a single thread, so the output does not
depend on the number of workers.
"""

import itertools
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import dgp, numerics, theory
from .estimators import estimate_trimming, lts_location_scale, m_location, scale_iqr, scale_mad
from .numerics import NORMAL
from .rho import absolute, huber, rho, tukey

__all__ = [
    "ESTIMATORS",
    "SWEEP_ESTIMATORS",
    "KNOWN_TRIM_SHARE",
    "run_reps",
    "bias_cell",
    "bias_table",
    "scale_sweep",
    "sweep_step_abscissa",
    "theory_report",
    "verify",
    "summarize",
]

ESTIMATORS = ("mean", "median", "huber", "tukey", "lts")
SWEEP_ESTIMATORS = ("mean", "median", "huber", "tukey")
KNOWN_TRIM_SHARE = 0.8


def summarize(errors):
    """Signed bias, absolute bias and Monte Carlo standard error per column.

    ``errors`` has one row per repetition in index order; ``np.mean`` sums
    pairwise, so the result is reproducible bit for bit.
    """
    errors = np.asarray(errors, dtype=float)
    reps = errors.shape[0]
    bias = errors.mean(axis=0)
    se = errors.std(axis=0, ddof=1) / math.sqrt(reps) if reps > 1 else np.full_like(bias, np.nan)
    return bias, np.abs(bias), se


def _chunks(reps, workers):
    size = max(1, math.ceil(reps / (4 * workers)))
    return [(a, min(a + size, reps)) for a in range(0, reps, size)]


def run_reps(fn, args, reps, workers=1):
    """Evaluate ``fn(*args, start, stop)`` over repetition chunks.

    ``fn`` returns an array with one row per repetition; rows come back in
    repetition order whatever the number of worker processes.
    """
    if workers <= 1:
        return np.asarray(fn(*args, 0, reps))
    chunks = _chunks(reps, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args, a, b) for a, b in chunks]
        parts = [f.result() for f in futures]
    return np.concatenate(parts, axis=0)


# ---------------------------------------------------------------------------
# bias tables

def _scale(sample, mode, sigma0):
    if mode == "known":
        return sigma0
    if mode == "mad":
        return scale_mad(sample)
    if mode == "iqr":
        return scale_iqr(sample)
    raise ValueError(f"unknown scale mode {mode!r}")


def _trim(sample, mode):
    if mode == "known":
        return int(round(KNOWN_TRIM_SHARE * sample.n))
    if mode == "auto":
        return estimate_trimming(sample)
    raise ValueError(f"unknown trim mode {mode!r}")


def _bias_chunk(cfg, scale_mode, trim_mode, base_seed, start, stop):
    out = np.empty((stop - start, len(ESTIMATORS)))
    hub, tuk, med = huber(), tukey(), absolute()
    for k, rep in enumerate(range(start, stop)):
        s, _ = dgp.generate(cfg, dgp.rep_seed(base_seed, rep))
        sigma = _scale(s, scale_mode, cfg.sigma0)
        out[k, 0] = np.mean(s.values)
        out[k, 1] = m_location(s, med, sigma).mu_hat
        out[k, 2] = m_location(s, hub, sigma).mu_hat
        out[k, 3] = m_location(s, tuk, sigma).mu_hat
        out[k, 4] = lts_location_scale(s, _trim(s, trim_mode)).mu_hat
    return out - cfg.mu0


def bias_cell(cfg, reps, scale="known", trim="known", base_seed=0, workers=1):
    """Per-repetition estimation errors for one configuration.

    Returns an array of shape ``(reps, 5)`` with columns ordered as
    `ESTIMATORS`.
    """
    return run_reps(_bias_chunk, (cfg, scale, trim, base_seed), reps, workers)


def bias_table(presets, ns, reps, scale="known", trim="known", base_seed=0, workers=1):
    """Bias of every estimator for each preset and sample size.

    Known scale plugs in ``sigma0``; known trimming uses ``h = 0.8 n`` for
    least trimmed squares.  Estimated scale uses the MAD (or IQR) and
    estimated trimming the moment-screen surrogate.

    Returns
    -------
    list of dict
        Keys ``estimator, preset, n, reps, scale, trim, bias, abs_bias,
        mc_se``.
    """
    if reps < 2:
        raise ValueError("reps must be at least 2")
    rows = []
    for name, n in itertools.product(presets, ns):
        cfg = dgp.preset(name, int(n))
        errors = bias_cell(cfg, reps, scale, trim, base_seed, workers)
        bias, abs_bias, se = summarize(errors)
        for j, est in enumerate(ESTIMATORS):
            rows.append(dict(estimator=est, preset=name, n=int(n), reps=reps, scale=scale,
                             trim=trim, bias=bias[j], abs_bias=abs_bias[j], mc_se=se[j]))
    return rows


# ---------------------------------------------------------------------------
# scale-factor sweep

def _sweep_chunk(cfg, grid, base_seed, start, stop):
    # columns: mean, median, max good error, then huber and tukey per grid value
    m = len(grid)
    out = np.empty((stop - start, 3 + 2 * m))
    hub, tuk = huber(), tukey()
    for k, rep in enumerate(range(start, stop)):
        s, good_idx = dgp.generate(cfg, dgp.rep_seed(base_seed, rep))
        out[k, 0] = np.mean(s.values)
        out[k, 1] = m_location(s, absolute(), cfg.sigma0).mu_hat
        out[k, 2] = (s.values[good_idx].max() - cfg.mu0) / cfg.sigma0
        for j, f in enumerate(grid):
            out[k, 3 + j] = m_location(s, hub, f * cfg.sigma0).mu_hat
            out[k, 3 + m + j] = m_location(s, tuk, f * cfg.sigma0).mu_hat
    out[:, [0, 1]] -= cfg.mu0
    out[:, 3:] -= cfg.mu0
    return out


def scale_sweep(lam, n, reps, grid, base_seed=0, workers=1, base="dgp4"):
    """Bias of mean, median, Huber and Tukey for plug-in scales ``f * sigma0``.

    Data come from preset ``base`` with ``h = round(lam n)``; each
    repetition's sample is shared across the grid.

    Returns
    -------
    rows : list of dict
        Keys ``varsigma, estimator, bias, abs_bias, mc_se``.
    meta : dict
        ``red_line`` (the scale factor at which the Tukey boundedness
        threshold equals ``lam``, or None when ``lam = 1``) and
        ``mean_max_good`` (average largest good error).
    """
    grid = [float(f) for f in grid]
    if not grid or min(grid) <= 0:
        raise ValueError("scale factors must be positive")
    cfg = dgp.generate_scale_sweep_cfg(dgp.preset(base, int(n)), lam)
    raw = run_reps(_sweep_chunk, (cfg, grid, base_seed), reps, workers)
    m = len(grid)
    bias, abs_bias, se = summarize(raw)
    rows = []
    for j, f in enumerate(grid):
        for est, col in (("mean", 0), ("median", 1), ("huber", 3 + j), ("tukey", 3 + m + j)):
            rows.append(dict(varsigma=f, estimator=est, bias=bias[col],
                             abs_bias=abs_bias[col], mc_se=se[col]))
    red = theory.boundedness_scale_root(tukey(), lam, cfg.good_law) if lam < 1 else None
    meta = dict(red_line=red, mean_max_good=float(bias[2]),
                lam=lam, n=int(n), h=cfg.h)
    return rows, meta


def sweep_step_abscissa(rows, upper=1.0):
    """Locate the lower step of the Tukey bias curve.

    The step is where the Tukey bias first falls below half its value at
    the smallest scale factor, by linear interpolation between grid points
    not exceeding ``upper``.  Returns None if the curve never drops.
    """
    pts = sorted((r["varsigma"], r["abs_bias"]) for r in rows
                 if r["estimator"] == "tukey" and r["varsigma"] <= upper)
    if len(pts) < 2:
        return None
    level = 0.5 * pts[0][1]
    for (f0, b0), (f1, b1) in zip(pts[:-1], pts[1:]):
        if b0 >= level > b1:
            return f0 + (b0 - level) / (b0 - b1) * (f1 - f0)
    return None


# ---------------------------------------------------------------------------
# theory report

def _fmt_c(spec):
    return "" if spec.c is None else spec.c


def theory_report(spec, geometry, grid, efficiency_target=0.95):
    """Rows of theoretical quantities, each labelled with its formula.

    Regime errors are reported in the ``note`` column instead of aborting.
    """
    law = geometry.good_law
    rows = []

    def add(quantity, formula, fn, varsigma="", family=spec.family, c=_fmt_c(spec)):
        try:
            value, note = fn(), ""
        except Exception as exc:  # reported per row
            value, note = float("nan"), f"{type(exc).__name__}: {exc}"
        rows.append(dict(quantity=quantity, family=family, c=c, lam=geometry.lam,
                         varrho=geometry.varrho, law=law.name, varsigma=varsigma,
                         value=value, formula=formula, note=note))

    add("consistency_factor_iqr",
        "(q_F((3/4-varrho)/lam) - q_F((1/4-varrho)/lam)) / (q_Phi(3/4) - q_Phi(1/4))",
        lambda: theory.consistency_factor_iqr(geometry), family="", c="")
    add("consistency_factor_mad",
        "d / q_Phi(3/4); F(c+d) - F(c-d) = 1/(2 lam), F(c) = (1/2-varrho)/lam",
        lambda: theory.consistency_factor_mad(geometry), family="", c="")
    for f in grid:
        add("rho_tilde", "E rho(eps/varsigma)",
            lambda f=f: theory.rho_tilde(spec, f, law), varsigma=f)
        add("boundedness_threshold_lambda", "1 / (2 - rho_tilde/rho_star)",
            lambda f=f: theory.boundedness_threshold_lambda(spec, f, law), varsigma=f)
        add("asymptotic_variance",
            "varsigma^2 E psi(eps/varsigma)^2 / (E psi'(eps/varsigma))^2",
            lambda f=f: theory.asymptotic_variance(spec, f, law), varsigma=f)
        add("efficiency", "1 / asymptotic_variance",
            lambda f=f: theory.efficiency(spec, f, law), varsigma=f)
    if 0.5 < geometry.lam < 1:
        add("boundedness_scale_root", "varsigma with 1/(2 - rho_tilde/rho_star) = lam",
            lambda: theory.boundedness_scale_root(spec, geometry.lam, law))
    for fam in ("huber", "tukey"):
        add("calibrated_c", f"c with 1/V(c) = {efficiency_target} under N(0,1)",
            lambda fam=fam: theory.calibrate_tuning(fam, efficiency_target),
            family=fam, c="")
    return rows


# ---------------------------------------------------------------------------
# oracle self-check

def _subset_lts(y, h):
    best = math.inf
    best_mu = None
    for idx in itertools.combinations(range(len(y)), h):
        sub = y[list(idx)]
        mu = sub.mean()
        rss = float(np.sum((sub - mu) ** 2))
        if rss < best - 1e-12:
            best, best_mu = rss, mu
    return best, best_mu


def verify(seed=20250213, mc_draws=10_000_000):
    """Run the oracle checks; returns a list of result dicts.

    Each dict has ``check, tolerance, gap, passed``.
    """
    results = []

    def record(check, tolerance, gap, passed=None):
        passed = bool(gap <= tolerance) if passed is None else bool(passed)
        results.append(dict(check=check, tolerance=tolerance, gap=float(gap), passed=passed))

    p = np.linspace(0.01, 0.99, 99)
    for law in (NORMAL, numerics.T3):
        gap = np.max(np.abs(numerics.cdf(law, numerics.quantile(law, p)) - p))
        record(f"quantile_cdf_roundtrip_{law.name}", 1e-9, gap)

    from scipy import stats
    x = np.linspace(-8, 8, 1601)
    record("t3_cdf_vs_scipy", 1e-12, np.max(np.abs(numerics.t3_cdf(x) - stats.t.cdf(x, 3))))
    record("normal_quantile_vs_scipy", 1e-9,
           np.max(np.abs(numerics.normal_quantile(p) - stats.norm.ppf(p))))

    d = numerics.find_root(lambda t: numerics.normal_cdf(t) - numerics.normal_cdf(-t) - 0.5,
                           0.0, 3.0)
    record("find_root_vs_quantile", 1e-9, abs(d - numerics.normal_quantile(0.75)))

    rng = dgp.rng_for(seed)
    mismatches = 0
    worst = 0.0
    for case in range(100):
        n = int(rng.integers(8, 15))
        h = int(rng.integers(n // 2 + 1, n))
        y = rng.standard_normal(n)
        y[: int(rng.integers(0, n - h + 1))] += rng.uniform(3, 10)
        fit = lts_location_scale(y, h)
        rss, mu = _subset_lts(y, h)
        gap = abs(fit.mu_hat - mu)
        worst = max(worst, gap, abs(fit.objective - rss))
        mismatches += gap > 1e-9
    record("lts_window_scan_vs_subset_search", 1e-9, worst, passed=mismatches == 0)

    spec = tukey()
    quad = theory.rho_tilde(spec, 1.0)
    draws = dgp.rng_for(seed + 1).standard_normal(mc_draws)
    vals = rho(spec, draws)
    mc = vals.mean()
    se = vals.std(ddof=1) / math.sqrt(mc_draws)
    record("rho_tilde_quadrature_vs_monte_carlo", 3 * se, abs(quad - mc))

    worst = 0.0
    for case in range(5):
        cfg = dgp.preset("dgp4", 60)
        s, _ = dgp.generate(cfg, seed + case)
        for f in (0.3, 1.0, 2.0):
            fit = m_location(s, spec, f)
            ys = s.values
            grid = np.linspace(ys.min(), ys.max(), 20001)
            brute = min(np.sum(rho(spec, (ys - g) / f)) for g in grid)
            worst = max(worst, fit.objective - brute)
    record("tukey_minimizer_vs_dense_scan", 1e-9, max(worst, 0.0))

    g = theory.ContaminationGeometry(1.0, 0.0)
    gap = max(abs(theory.consistency_factor_iqr(g) - 1), abs(theory.consistency_factor_mad(g) - 1))
    record("consistency_factors_at_no_contamination", 1e-8, gap)

    for fam, target, tol in (("huber", 1.345, 0.005), ("tukey", 4.685, 0.01)):
        record(f"calibration_{fam}_95", tol, abs(theory.calibrate_tuning(fam, 0.95) - target))
    return results
