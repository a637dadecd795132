"""
Asymptotic quantities of M-estimators under a fixed-proportion contamination.

A sample has a fraction ``lam`` of good observations with errors from a
continuous law ``F``; a fraction ``varrho`` of the sample are outliers to
the left of all good observations and the rest lie to the right.  The
functions below evaluate

* the limit ``rho_tilde(varsigma) = E rho(eps / varsigma)`` of the average
  good-observation loss under a plug-in scale ``varsigma * sigma0``;
* the minimal good proportion ``1 / (2 - rho_tilde / rho_star)`` under
  which a redescending estimator stays bounded, and its finite-sample
  counterpart, the addition breakdown point;
* the probability limits of the normalized IQR and MAD, expressed as
  consistency factors relative to the true scale;
* the asymptotic variance ``V`` of the estimator computed on the good
  observations and the tuning constant that reaches a target efficiency.

All expectations are computed by adaptive quadrature.
"""

import math
from dataclasses import dataclass

import numpy as np

from .estimators import as_sample
from .exceptions import DomainError, NumericalError, RegimeError, UnsupportedOperation
from .numerics import NORMAL, ErrorLaw, cdf, expect, find_root, normal_quantile, quantile
from .rho import RhoSpec, kinks, psi, psi_prime, rho, tail_constants

__all__ = [
    "ContaminationGeometry",
    "rho_tilde",
    "boundedness_threshold_lambda",
    "nonredescending_threshold_lambda",
    "boundedness_scale_root",
    "asymptotic_breakdown",
    "finite_sample_breakdown",
    "consistency_factor_iqr",
    "consistency_factor_mad",
    "asymptotic_variance",
    "efficiency",
    "calibrate_tuning",
    "check_distribution_conditions",
]

QUAD_TOL = 1e-10
ROOT_TOL = 1e-10


@dataclass(frozen=True)
class ContaminationGeometry:
    """Limiting shares of good observations and of left outliers.

    Parameters
    ----------
    lam : float
        Proportion of good observations, ``1/2 < lam <= 1``.
    varrho : float
        Proportion of the whole sample that are outliers on the left,
        ``0 <= varrho <= 1 - lam``.
    good_law : ErrorLaw
    """

    lam: float
    varrho: float = 0.0
    good_law: ErrorLaw = NORMAL

    def __post_init__(self):
        if not 0.5 < self.lam <= 1.0:
            raise DomainError(f"lam must lie in (1/2, 1], got {self.lam}")
        slack = 1e-12
        if not -slack <= self.varrho <= 1.0 - self.lam + slack:
            raise DomainError(
                f"varrho must lie in [0, 1 - lam] = [0, {1.0 - self.lam:g}], got {self.varrho}")
        object.__setattr__(self, "varrho", min(max(self.varrho, 0.0), 1.0 - self.lam))


def _scaled_points(spec, varsigma):
    return tuple(varsigma * k for k in kinks(spec))


def _reject_squared(spec):
    if spec.family == "squared":
        raise UnsupportedOperation("rho(x) = x^2 is outside the bounded-slope family")


def rho_tilde(spec, varsigma, law=NORMAL, tol=QUAD_TOL):
    """``E rho(eps / varsigma)`` for ``eps`` distributed as ``law``."""
    _reject_squared(spec)
    if not varsigma > 0:
        raise DomainError("varsigma must be positive")
    return expect(law, lambda x: rho(spec, x / varsigma), tol=tol,
                  points=_scaled_points(spec, varsigma))


def _require_redescending(spec):
    _reject_squared(spec)
    rho_star, _, psi_star = tail_constants(spec)
    if psi_star != 0.0:
        raise UnsupportedOperation(
            f"{spec} is not redescending; its boundedness threshold is 1/2")
    return rho_star


def nonredescending_threshold_lambda(spec):
    """Threshold for ``psi_star > 0``: any ``lam > 1/2`` gives boundedness."""
    _reject_squared(spec)
    _, _, psi_star = tail_constants(spec)
    if psi_star == 0.0:
        raise UnsupportedOperation(f"{spec} is redescending; use boundedness_threshold_lambda")
    return 0.5


def boundedness_threshold_lambda(spec, varsigma, law=NORMAL):
    """Smallest good proportion keeping a redescending estimator bounded.

    Equals ``1 / (2 - rho_tilde(varsigma) / rho_star)``; it falls from 1
    towards 1/2 as the plug-in scale factor ``varsigma`` grows.
    """
    rho_star = _require_redescending(spec)
    return 1.0 / (2.0 - rho_tilde(spec, varsigma, law) / rho_star)


def asymptotic_breakdown(spec, varsigma, law=NORMAL):
    """Limit of the addition breakdown point, ``1 - threshold``."""
    return 1.0 - boundedness_threshold_lambda(spec, varsigma, law)


def boundedness_scale_root(spec, lam, law=NORMAL):
    """The scale factor at which the boundedness threshold equals ``lam``.

    Plug-in scales with a smaller factor may let the estimator break down
    when a fraction ``1 - lam`` of the sample is contaminated.
    """
    rho_star = _require_redescending(spec)
    if not 0.5 < lam < 1.0:
        raise DomainError(f"lam must lie in (1/2, 1), got {lam}")
    target = 2.0 - 1.0 / lam

    def gap(log_s):
        return rho_tilde(spec, math.exp(log_s), law) / rho_star - target

    lo, hi = math.log(1e-3), math.log(1e3)
    while gap(lo) < 0:
        lo -= 2.0
        if lo < -40:
            raise NumericalError("no scale factor reaches the requested threshold")
    while gap(hi) > 0:
        hi += 2.0
        if hi > 40:
            raise NumericalError("no scale factor reaches the requested threshold")
    return math.exp(find_root(gap, lo, hi, tol=ROOT_TOL))


def finite_sample_breakdown(s, good_idx, spec, mu_hat, sigma):
    """Addition breakdown point ``ceil(A) / (h + ceil(A))``.

    ``A = h - sum_good rho((y_i - mu_hat) / sigma) / rho_star`` where
    ``sigma`` is the plug-in scale (``varsigma * sigma0``).  The value lies
    in ``[0, 1/2]``; it is 0 only when every good residual is beyond the
    knot, which makes ``A`` vanish.
    """
    rho_star = _require_redescending(spec)
    if rho_star == 0:
        raise DomainError("rho_star must be positive")
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    y = as_sample(s).values
    idx = np.asarray(good_idx, dtype=int)
    h = idx.size
    if h == 0:
        raise DomainError("good_idx must be nonempty")
    total = math.fsum(rho(spec, (y[idx] - mu_hat) / sigma))
    a = h - total / rho_star
    # absorb rounding so an exact integer A is not pushed to the next one
    ca = max(0, math.ceil(a - 1e-9 * h))
    return ca / (h + ca)


# ---------------------------------------------------------------------------
# scale consistency factors

def consistency_factor_iqr(g):
    """Probability limit of the normalized IQR in units of the true scale.

    Requires ``lam > 3/4``; with fewer good observations the IQR need not
    stay bounded.
    """
    if not g.lam > 0.75:
        raise RegimeError(f"IQR factor requires lam > 3/4, got {g.lam}")
    p_lo = (0.25 - g.varrho) / g.lam
    p_hi = (0.75 - g.varrho) / g.lam
    if not (0 < p_lo < 1 and 0 < p_hi < 1):
        raise RegimeError(f"quantile levels ({p_lo:g}, {p_hi:g}) leave (0, 1)")
    num = quantile(g.good_law, p_hi) - quantile(g.good_law, p_lo)
    return num / (normal_quantile(0.75) - normal_quantile(0.25))


def consistency_factor_mad(g):
    """Probability limit of the normalized MAD in units of the true scale.

    The sample median tends to ``c`` with ``F(c) = (1/2 - varrho) / lam``
    and the MAD to the ``d`` solving ``F(c + d) - F(c - d) = 1 / (2 lam)``.
    """
    law = g.good_law
    level = (0.5 - g.varrho) / g.lam
    if not 0 < level < 1:
        raise RegimeError(f"median level {level:g} leaves (0, 1)")
    c = quantile(law, level)
    target = 0.5 / g.lam

    def gap(d):
        return cdf(law, c + d) - cdf(law, c - d) - target

    hi = 1.0
    while gap(hi) < 0:
        hi *= 2.0
        if hi > 1e6:
            raise NumericalError("no bracket for the MAD limit")
    d = find_root(gap, 0.0, hi, tol=ROOT_TOL)
    return d / normal_quantile(0.75)


# ---------------------------------------------------------------------------
# efficiency

def asymptotic_variance(spec, varsigma=1.0, law=NORMAL, tol=QUAD_TOL):
    """Asymptotic variance of the location estimate on the good observations.

    ``V = varsigma^2 E psi(eps/varsigma)^2 / {E psi'(eps/varsigma)}^2``, the
    variance of ``h^{1/2} (mu_hat - mu0) / sigma0`` when the plug-in scale
    is ``varsigma * sigma0``.  With ``varsigma = 1`` and normal errors this
    is the textbook ``int psi^2 dPhi / (int psi' dPhi)^2``.
    """
    if spec.family == "absolute":
        raise UnsupportedOperation("asymptotic_variance needs a twice differentiable rho")
    if not varsigma > 0:
        raise DomainError("varsigma must be positive")
    pts = _scaled_points(spec, varsigma)
    num = expect(law, lambda x: psi(spec, x / varsigma) ** 2, tol=tol, points=pts)
    den = expect(law, lambda x: psi_prime(spec, x / varsigma), tol=tol, points=pts)
    if not abs(den) > 1e-12:
        raise NumericalError("vanishing denominator in asymptotic variance")
    return varsigma ** 2 * num / den ** 2


def efficiency(spec, varsigma=1.0, law=NORMAL):
    """Efficiency relative to the mean of the good observations, ``1 / V``."""
    return 1.0 / asymptotic_variance(spec, varsigma, law)


_C_BRACKETS = {"huber": (0.01, 5.0), "tukey": (0.2, 12.0)}


def calibrate_tuning(family, target_efficiency):
    """Tuning constant giving the requested efficiency at the normal.

    Raises
    ------
    DomainError
        If the target lies outside the efficiencies the family can reach.
    """
    if family not in _C_BRACKETS:
        raise DomainError(f"calibration is defined for huber and tukey, not {family!r}")
    if not 0 < target_efficiency < 1:
        raise DomainError("target efficiency must lie in (0, 1)")

    def gap(c):
        return efficiency(RhoSpec(family, c)) - target_efficiency

    lo, hi = _C_BRACKETS[family]
    if gap(lo) > 0:
        raise DomainError(
            f"{family} cannot be calibrated to efficiency {target_efficiency} "
            f"(below its minimum)")
    while gap(hi) < 0:
        hi *= 2.0
        if hi > 1e3:
            raise DomainError(f"efficiency {target_efficiency} is not reachable")
    return find_root(gap, lo, hi, tol=ROOT_TOL)


def check_distribution_conditions(spec, varsigma=1.0):
    """Moments behind the asymptotic normality conditions, under N(0, 1).

    Returns
    -------
    tuple of float
        ``E psi'(eps/varsigma)`` (should be positive),
        ``E eps psi'(eps/varsigma)`` (should vanish) and
        ``Var{eps psi'(eps/varsigma)}`` (should be finite).
    """
    pts = _scaled_points(spec, varsigma)

    def w(x):
        return psi_prime(spec, x / varsigma)

    m1 = expect(NORMAL, w, points=pts)
    m2 = expect(NORMAL, lambda x: x * w(x), points=pts)
    m3 = expect(NORMAL, lambda x: (x * w(x)) ** 2, points=pts) - m2 ** 2
    return m1, m2, m3
