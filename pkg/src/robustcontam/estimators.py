"""
Location and scale estimators for a one-dimensional sample.

Location M-estimators minimize ``R_n(mu) = sum rho((y_i - mu) / sigma)``
for a plug-in scale ``sigma``.  The convex families (absolute, huber,
squared) have closed forms or a convergent reweighting scheme; the Tukey
objective is not convex, so it is scanned on a grid and the best basins
are refined.  Least trimmed squares is solved exactly by scanning the
contiguous windows of the sorted sample.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import DegenerateScaleError, DomainError
from .numerics import normal_quantile
from .rho import RhoSpec, rho, tail_constants

__all__ = [
    "Sample",
    "EstimateReport",
    "as_sample",
    "quantile_of_sample",
    "scale_iqr",
    "scale_mad",
    "iqr_constant",
    "mad_constant",
    "m_location",
    "m_location_with_estimated_scale",
    "objective",
    "lts_location_scale",
    "lts_windows",
    "estimate_trimming",
    "TUKEY_GRID_SIZE",
    "TUKEY_KEEP",
    "SKEW_LIMIT",
    "KURT_LIMIT",
]

TUKEY_GRID_SIZE = 2048
TUKEY_KEEP = 5
TUKEY_WIDTH = 1e-10
HUBER_TOL = 1e-12
HUBER_MAXITER = 200

# moment screen of the trimming surrogate
SKEW_LIMIT = 0.35
KURT_LIMIT = 0.8


class Sample:
    """An immutable sample of finite reals with a cached sorted copy.

    Parameters
    ----------
    values : array_like
        One-dimensional, non-empty, finite.
    """

    __slots__ = ("_values", "_sorted")

    def __init__(self, values):
        arr = np.array(values, dtype=float).ravel()
        if arr.size == 0:
            raise DomainError("a sample needs at least one observation")
        if not np.all(np.isfinite(arr)):
            raise DomainError("sample values must be finite")
        arr.flags.writeable = False
        srt = np.sort(arr)
        srt.flags.writeable = False
        self._values = arr
        self._sorted = srt

    @property
    def values(self):
        return self._values

    @property
    def sorted_view(self):
        return self._sorted

    @property
    def n(self):
        return self._values.size

    def __len__(self):
        return self._values.size

    def __repr__(self):
        return f"Sample(n={self.n})"

    def affine(self, a, b):
        """The sample ``a + b * y``."""
        return Sample(a + b * self._values)


def as_sample(s):
    return s if isinstance(s, Sample) else Sample(s)


@dataclass(frozen=True)
class EstimateReport:
    """Result of a location (and possibly scale) fit.

    Attributes
    ----------
    mu_hat : float
    sigma_hat : float or None
        Plug-in or fitted scale, when one is involved.
    objective : float
        Criterion value at ``mu_hat``.
    n_candidates : int
        Points examined by the search (grid size for Tukey, windows for LTS).
    converged : bool
    h : int or None
        Trimming count, for LTS fits.
    """

    mu_hat: float
    sigma_hat: float = None
    objective: float = float("nan")
    n_candidates: int = 0
    converged: bool = True
    h: int = None


# ---------------------------------------------------------------------------
# quantiles and scale

def _order_stat_quantile(srt, p):
    n = srt.size
    if n == 0:
        raise DomainError("empty sample")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    if p == 0.5 and n % 2 == 0:
        return 0.5 * (srt[n // 2 - 1] + srt[n // 2])
    # guard against n * p landing a hair above an integer
    k = max(1, math.ceil(n * p - 1e-9))
    return float(srt[k - 1])


def quantile_of_sample(s, p):
    """The ``ceil(n p)``-th smallest value; the even-n median is the midpoint."""
    return _order_stat_quantile(as_sample(s).sorted_view, p)


def iqr_constant():
    """Normalizing constant ``1 / (q_{3/4} - q_{1/4})`` of the normal."""
    return 1.0 / (normal_quantile(0.75) - normal_quantile(0.25))


def mad_constant():
    """Normalizing constant ``1 / q_{3/4}`` of the normal (about 1.4826)."""
    return 1.0 / normal_quantile(0.75)


def scale_iqr(s):
    """Interquartile range normalized to be consistent at the normal.

    Raises
    ------
    DomainError
        For fewer than 4 observations.
    DegenerateScaleError
        When the two quartiles coincide.
    """
    srt = as_sample(s).sorted_view
    if srt.size < 4:
        raise DomainError("scale_iqr needs n >= 4")
    spread = _order_stat_quantile(srt, 0.75) - _order_stat_quantile(srt, 0.25)
    if not spread > 0:
        raise DegenerateScaleError("interquartile range is zero")
    return iqr_constant() * spread


def _mad_from_sorted(srt):
    med = _order_stat_quantile(srt, 0.5)
    dev = np.sort(np.abs(srt - med))
    return _order_stat_quantile(dev, 0.5)


def scale_mad(s):
    """Median absolute deviation from the median, normalized by ``1/q_{3/4}``."""
    srt = as_sample(s).sorted_view
    if srt.size < 2:
        raise DomainError("scale_mad needs n >= 2")
    mad = _mad_from_sorted(srt)
    if not mad > 0:
        raise DegenerateScaleError("median absolute deviation is zero")
    return mad_constant() * mad


_SCALES = {"iqr": scale_iqr, "mad": scale_mad}


# ---------------------------------------------------------------------------
# location M-estimation

def objective(s, spec, sigma, mu):
    """``R_n(mu)`` recomputed directly from the rho module."""
    y = as_sample(s).values
    return float(math.fsum(rho(spec, (y - mu) / sigma)))


def m_location(s, spec, sigma):
    """Global minimizer of ``sum rho((y_i - mu) / sigma)``.

    Parameters
    ----------
    s : Sample or array_like
    spec : RhoSpec
    sigma : float
        Plug-in scale, positive.

    Returns
    -------
    EstimateReport
    """
    if not isinstance(spec, RhoSpec):
        raise TypeError("spec must be a RhoSpec")
    if not sigma > 0 or not math.isfinite(sigma):
        raise DomainError(f"sigma must be positive and finite, got {sigma}")
    s = as_sample(s)
    srt = s.sorted_view
    n_cand = 0
    converged = True

    if spec.family == "squared":
        mu = float(np.mean(s.values))
    elif spec.family == "absolute":
        mu = _order_stat_quantile(srt, 0.5)
    elif spec.family == "huber":
        start = _order_stat_quantile(srt, 0.5)
        mu, n_cand, converged = _kernels.huber_irls(
            s.values, float(sigma), spec.c, start, HUBER_TOL, HUBER_MAXITER)
        mu = float(mu)
    else:
        mu, obj, converged = _kernels.tukey_minimize(
            srt, float(sigma), spec.c, TUKEY_GRID_SIZE, TUKEY_KEEP, TUKEY_WIDTH)
        mu = float(mu)
        n_cand = TUKEY_GRID_SIZE
    return EstimateReport(mu_hat=mu, sigma_hat=float(sigma),
                          objective=objective(s, spec, sigma, mu),
                          n_candidates=int(n_cand), converged=bool(converged))


def m_location_with_estimated_scale(s, spec, scale_method="mad"):
    """`m_location` with the IQR or MAD scale plugged in."""
    try:
        scale_fn = _SCALES[scale_method]
    except KeyError:
        raise DomainError(f"unknown scale method {scale_method!r}") from None
    s = as_sample(s)
    return m_location(s, spec, scale_fn(s))


# ---------------------------------------------------------------------------
# least trimmed squares

def lts_windows(srt, h):
    """Within-window sums of squares of every contiguous ``h``-window.

    Sums are taken about the sample median so the one-pass formula
    ``sum y^2 - (sum y)^2 / h`` keeps its precision.
    """
    z = srt - srt[srt.size // 2]
    c1 = np.concatenate(([0.0], np.cumsum(z)))
    c2 = np.concatenate(([0.0], np.cumsum(z * z)))
    s1 = c1[h:] - c1[:-h]
    s2 = c2[h:] - c2[:-h]
    return np.maximum(s2 - s1 * s1 / h, 0.0), s1


def lts_location_scale(s, h):
    """Exact least trimmed squares location and scale.

    The optimal ``h``-subset of a one-dimensional sample is contiguous in
    sorted order, so all ``n - h + 1`` windows are scanned.  Ties go to the
    window with the smaller left index.

    Returns
    -------
    EstimateReport
        ``objective`` is the window's residual sum of squares and
        ``sigma_hat`` its root mean squared deviation.
    """
    s = as_sample(s)
    n = s.n
    h = int(h)
    if not 2 <= h <= n:
        raise DomainError(f"need 2 <= h <= n, got h={h}, n={n}")
    srt = s.sorted_view
    rss, s1 = lts_windows(srt, h)
    j = int(np.argmin(rss))
    window = srt[j:j + h]
    mu = float(np.mean(window))
    resid = window - mu
    obj = float(np.dot(resid, resid))
    return EstimateReport(mu_hat=mu, sigma_hat=math.sqrt(obj / h), objective=obj,
                          n_candidates=n - h + 1, converged=True, h=h)


def _window_moments(window):
    z = window - window.mean()
    m2 = np.mean(z * z)
    if m2 <= 0:
        return math.inf, math.inf
    skew = np.mean(z ** 3) / m2 ** 1.5
    kurt = np.mean(z ** 4) / (m2 * m2) - 3.0
    return float(skew), float(kurt)


def estimate_trimming(s, skew_limit=SKEW_LIMIT, kurt_limit=KURT_LIMIT):
    """Estimate the number of good observations by a moment screen.

    Starting from ``h = n`` and decreasing, the optimal LTS window of each
    size is tested for normality through its standardized skewness and
    excess kurtosis; the first (largest) ``h`` that passes is returned.
    If none does, ``ceil(n / 2)`` is returned.
    """
    s = as_sample(s)
    n = s.n
    if n < 8:
        raise DomainError("estimate_trimming needs n >= 8")
    srt = s.sorted_view
    h_min = (n + 1) // 2
    for h in range(n, h_min - 1, -1):
        rss, _ = lts_windows(srt, h)
        j = int(np.argmin(rss))
        skew, kurt = _window_moments(srt[j:j + h])
        if abs(skew) < skew_limit and abs(kurt) < kurt_limit:
            return h
    return h_min
