"""
Distribution functions, Gaussian expectations and scalar root finding.

Two error laws are supported: the standard normal and Student's t with
three degrees of freedom.  Both have closed-form CDFs; the quantile
functions are computed here (a rational approximation polished by a
Newton step for the normal, bracketed Newton on the closed-form CDF for
t(3)), so simulated draws are reproducible through inverse-CDF sampling.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .exceptions import BracketError, DomainError, NumericalError

__all__ = [
    "ErrorLaw",
    "NORMAL",
    "T3",
    "student_t",
    "cdf",
    "pdf",
    "quantile",
    "normal_cdf",
    "normal_quantile",
    "t3_cdf",
    "t3_quantile",
    "integrate",
    "expect",
    "expect_under_normal",
    "find_root",
]

_SQRT3 = math.sqrt(3.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)
_TRUNCATION = 10.0


@dataclass(frozen=True)
class ErrorLaw:
    """Distribution of the 'good' errors.

    Parameters
    ----------
    kind : {'normal', 't'}
    df : int, optional
        Degrees of freedom, required (and only 3 supported) for ``'t'``.
    """

    kind: str = "normal"
    df: int = None

    def __post_init__(self):
        if self.kind == "normal":
            if self.df is not None:
                raise DomainError("the normal law takes no degrees of freedom")
        elif self.kind == "t":
            if self.df != 3:
                raise DomainError(f"only t(3) is supported, got df={self.df!r}")
        else:
            raise DomainError(f"unknown error law {self.kind!r}")

    @property
    def name(self):
        return "normal" if self.kind == "normal" else f"t{self.df}"

    @classmethod
    def from_name(cls, name):
        """Parse ``'normal'``, ``'t3'`` or ``'t(3)'``."""
        key = name.strip().lower().replace("(", "").replace(")", "")
        if key in ("normal", "n01", "gaussian"):
            return NORMAL
        if key.startswith("t") and key[1:].isdigit():
            return student_t(int(key[1:]))
        raise DomainError(f"unknown error law {name!r}")

    def __str__(self):
        return self.name


def student_t(df):
    return ErrorLaw("t", df)


NORMAL = ErrorLaw("normal")
T3 = ErrorLaw("t", 3)


# ---------------------------------------------------------------------------
# standard normal

def normal_cdf(x):
    return ndtr(x)


def normal_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / _SQRT2PI


# Acklam's rational approximation, relative error below 1.15e-9.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _check_prob(p):
    p = np.asarray(p, dtype=float)
    if not np.all((p > 0.0) & (p < 1.0)):
        raise DomainError("probabilities must lie strictly inside (0, 1)")
    return p


def _acklam(p):
    x = np.empty_like(p)
    lo = p < _P_LOW
    hi = p > 1.0 - _P_LOW
    mid = ~(lo | hi)

    q = p[mid] - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    x[mid] = num / den

    for mask, tail, sign in ((lo, p[lo], 1.0), (hi, 1.0 - p[hi], -1.0)):
        if not np.any(mask):
            continue
        q = np.sqrt(-2.0 * np.log(tail))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        x[mask] = sign * num / den
    return x


def normal_quantile(p):
    """Standard normal quantile, accurate to about 1e-15 after refinement."""
    p = _check_prob(p)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    x = _acklam(p)
    # one Newton step on the CDF; the upper tail is handled by symmetry so
    # the residual is formed where ndtr keeps full relative precision
    upper = x > 0
    xs = np.where(upper, -x, x)
    ps = np.where(upper, 1.0 - p, p)
    xs = xs - (ndtr(xs) - ps) / normal_pdf(xs)
    x = np.where(upper, -xs, xs)
    return float(x[0]) if scalar else x


# ---------------------------------------------------------------------------
# Student t with 3 degrees of freedom

def t3_cdf(x):
    x = np.asarray(x, dtype=float)
    s = x / _SQRT3
    out = 0.5 + (s / (1.0 + s * s) + np.arctan(s)) / math.pi
    return float(out) if out.ndim == 0 else out


def t3_pdf(x):
    x = np.asarray(x, dtype=float)
    return 2.0 / (math.pi * _SQRT3) / (1.0 + x * x / 3.0) ** 2


def t3_quantile(p):
    """t(3) quantile by safeguarded Newton iteration on the closed-form CDF.

    With ``x = sqrt(3) tan(theta)`` the CDF reads
    ``1/2 + (theta + sin(theta) cos(theta)) / pi``, which is monotone on
    ``(-pi/2, pi/2)``, so the root is bracketed and Newton steps that leave
    the bracket fall back to bisection.
    """
    p = _check_prob(p)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    target = math.pi * (p - 0.5)
    lo = np.full_like(p, -0.5 * math.pi)
    hi = np.full_like(p, 0.5 * math.pi)
    theta = 0.5 * target
    for _ in range(100):
        g = theta + 0.5 * np.sin(2.0 * theta) - target
        lo = np.where(g < 0, theta, lo)
        hi = np.where(g > 0, theta, hi)
        dg = 2.0 * np.cos(theta) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            step = theta - g / dg
        bad = ~np.isfinite(step) | (step <= lo) | (step >= hi)
        new = np.where(bad, 0.5 * (lo + hi), step)
        if np.all(np.abs(new - theta) <= 1e-15 * np.maximum(1.0, np.abs(theta))):
            theta = new
            break
        theta = new
    x = _SQRT3 * np.tan(theta)
    return float(x[0]) if scalar else x


# ---------------------------------------------------------------------------
# law dispatch

def cdf(law, x):
    """CDF of ``law`` at ``x`` (scalar or array)."""
    if law.kind == "normal":
        out = normal_cdf(x)
    else:
        out = t3_cdf(x)
    return float(out) if np.ndim(out) == 0 else out


def pdf(law, x):
    if law.kind == "normal":
        out = normal_pdf(x)
    else:
        out = t3_pdf(x)
    return float(out) if np.ndim(out) == 0 else out


def quantile(law, p):
    """Inverse CDF of ``law``; raises `DomainError` unless ``0 < p < 1``."""
    if law.kind == "normal":
        return normal_quantile(p)
    return t3_quantile(p)


# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod quadrature

_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5]] = _WG[:3]
_GWEIGHTS[7] = _WG[3]
_GWEIGHTS[[9, 11, 13]] = _WG[2::-1]


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _NODES
    fx = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    k = half * np.dot(_KWEIGHTS, fx)
    g = half * np.dot(_GWEIGHTS, fx)
    return k, abs(k - g)


def integrate(f, a, b, tol=1e-10, points=(), max_intervals=5000):
    """Integrate a vectorized ``f`` over ``[a, b]`` to absolute error ``tol``.

    Globally adaptive 15-point Gauss-Kronrod: the interval with the largest
    error estimate is bisected until the summed estimate drops below
    ``tol``.  ``points`` lists interior kinks or discontinuities of ``f``
    that should start as interval boundaries.

    Raises
    ------
    NumericalError
        If ``max_intervals`` is reached; ``best_estimate`` holds the sum.
    """
    edges = sorted({a, b, *(p for p in points if a < p < b)})
    heap = []
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, e = _gk15(f, lo, hi)
        total += val
        err += e
        heapq.heappush(heap, (-e, lo, hi, val))
    while err > tol:
        if len(heap) >= max_intervals:
            raise NumericalError(
                f"quadrature did not reach tol={tol:g} (error estimate {err:.3g})",
                best_estimate=total)
        neg_e, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total += v1 + v2 - val
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
    # re-sum to shed the drift of the incremental updates
    return float(math.fsum(item[3] for item in heap))


def expect_under_normal(f, tol=1e-10, points=()):
    """``E f(X)`` for ``X ~ N(0, 1)``, truncated at ``|x| = 10``."""
    return integrate(lambda x: np.asarray(f(x), dtype=float) * normal_pdf(x),
                     -_TRUNCATION, _TRUNCATION, tol=tol, points=points)


def _expect_under_t3(f, tol, points):
    # x = sqrt(3) tan(theta) maps the real line onto (-pi/2, pi/2) and turns
    # the t(3) density times dx into (2/pi) cos(theta)^2 dtheta
    def integrand(theta):
        return np.asarray(f(_SQRT3 * np.tan(theta)), dtype=float) \
            * (2.0 / math.pi) * np.cos(theta) ** 2
    tpoints = [math.atan(p / _SQRT3) for p in points]
    return integrate(integrand, -0.5 * math.pi, 0.5 * math.pi, tol=tol, points=tpoints)


def expect(law, f, tol=1e-10, points=()):
    """``E f(X)`` for ``X`` distributed according to ``law``."""
    if law.kind == "normal":
        return expect_under_normal(f, tol=tol, points=points)
    return _expect_under_t3(f, tol, points)


# ---------------------------------------------------------------------------
# root finding

def find_root(g, lo, hi, tol=1e-12, maxiter=200):
    """Brent's method on a bracketing interval.

    Returns ``x`` once the bracket has shrunk below ``tol`` (or ``g(x)`` is
    exactly zero).  Interpolation steps are only accepted while they beat
    bisection, so convergence is guaranteed for continuous ``g``.

    Raises
    ------
    BracketError
        If ``g(lo)`` and ``g(hi)`` have the same strict sign.
    """
    a, b = float(lo), float(hi)
    fa, fb = g(a), g(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: g={fa:.3g}, {fb:.3g}")
    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * np.finfo(float).eps * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = g(b)
    raise NumericalError(f"find_root did not converge in {maxiter} iterations", best_estimate=b)
