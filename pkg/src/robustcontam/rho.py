"""
Rho functions for location M-estimation.

Each family satisfies ``rho(0) = 0``, symmetry and monotonicity on the
positive half-line.  The robust families are also linear beyond a knot,
``rho(x) = rho_star + psi_star * (|x| - x_star)`` for ``|x| >= x_star``:

========  ==================================  ========  =======  ========
family    rho(x)                              rho_star  x_star   psi_star
========  ==================================  ========  =======  ========
absolute  |x|                                 0         0        1
huber     x^2/2 inside c, c(|x| - c/2) out    c^2/2     c        c
tukey     (c^2/6){1 - (1 - x^2/c^2)^3} in c   c^2/6     c        0
squared   x^2                                 --        --       --
========  ==================================  ========  =======  ========

``squared`` is the non-robust baseline (the sample mean); it has no
bounded-slope tail, so the theory routines reject it.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, UnsupportedOperation

__all__ = [
    "RhoSpec",
    "FAMILIES",
    "HUBER_C",
    "TUKEY_C",
    "absolute",
    "huber",
    "tukey",
    "squared",
    "rho",
    "psi",
    "psi_prime",
    "tail_constants",
    "kinks",
    "is_redescending",
]

FAMILIES = ("absolute", "huber", "tukey", "squared")
HUBER_C = 1.345
TUKEY_C = 4.685


@dataclass(frozen=True)
class RhoSpec:
    """A member of a rho family together with its tuning constant."""

    family: str
    c: float = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown rho family {self.family!r}")
        if self.family in ("huber", "tukey"):
            if self.c is None or not self.c > 0:
                raise DomainError(f"{self.family} needs a positive tuning constant")
            object.__setattr__(self, "c", float(self.c))
        elif self.c is not None:
            raise DomainError(f"{self.family} takes no tuning constant")

    def __str__(self):
        return self.family if self.c is None else f"{self.family}(c={self.c:g})"

    @classmethod
    def from_name(cls, family, c=None):
        """Build a spec, filling in the usual 95%-efficiency constant."""
        if c is None:
            c = {"huber": HUBER_C, "tukey": TUKEY_C}.get(family)
        return cls(family, c)


def absolute():
    return RhoSpec("absolute")


def huber(c=HUBER_C):
    return RhoSpec("huber", c)


def tukey(c=TUKEY_C):
    return RhoSpec("tukey", c)


def squared():
    return RhoSpec("squared")


def _out(values, x):
    return float(values) if np.ndim(x) == 0 else values


def rho(spec, x):
    """Evaluate ``rho`` elementwise."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    if spec.family == "absolute":
        out = ax
    elif spec.family == "squared":
        out = x * x
    elif spec.family == "huber":
        c = spec.c
        out = np.where(ax <= c, 0.5 * x * x, c * (ax - 0.5 * c))
    else:
        c = spec.c
        t = np.minimum(x * x / (c * c), 1.0)
        out = (c * c / 6.0) * (1.0 - (1.0 - t) ** 3)
    return _out(out, x)


def psi(spec, x):
    """First derivative of ``rho``; ``psi(absolute, 0)`` is 0."""
    x = np.asarray(x, dtype=float)
    if spec.family == "absolute":
        out = np.sign(x)
    elif spec.family == "squared":
        out = 2.0 * x
    elif spec.family == "huber":
        out = np.clip(x, -spec.c, spec.c)
    else:
        c = spec.c
        w = np.where(np.abs(x) < c, 1.0 - x * x / (c * c), 0.0)
        out = x * w * w
    return _out(out, x)


def psi_prime(spec, x):
    """Second derivative of ``rho``.

    At the Huber knot ``|x| = c`` the quadratic branch is used, so the
    value there is 1.

    Raises
    ------
    UnsupportedOperation
        For the absolute family, whose second derivative is a point mass.
    """
    x = np.asarray(x, dtype=float)
    if spec.family == "absolute":
        raise UnsupportedOperation("psi_prime is undefined for rho(x) = |x|")
    if spec.family == "squared":
        out = np.full_like(x, 2.0)
    elif spec.family == "huber":
        out = np.where(np.abs(x) <= spec.c, 1.0, 0.0)
    else:
        t = x * x / (spec.c * spec.c)
        out = np.where(t < 1.0, (1.0 - t) * (1.0 - 5.0 * t), 0.0)
    return _out(out, x)


def tail_constants(spec):
    """Return ``(rho_star, x_star, psi_star)`` of the linear tail.

    Raises
    ------
    UnsupportedOperation
        For ``squared``, which has no linear tail.
    """
    if spec.family == "squared":
        raise UnsupportedOperation("rho(x) = x^2 has no bounded-slope tail")
    if spec.family == "absolute":
        return 0.0, 0.0, 1.0
    c = spec.c
    if spec.family == "huber":
        return 0.5 * c * c, c, c
    return c * c / 6.0, c, 0.0


def is_redescending(spec):
    return spec.family == "tukey"


def kinks(spec):
    """Points where ``psi`` or ``psi_prime`` is not smooth."""
    if spec.family in ("huber", "tukey"):
        return (-spec.c, spec.c)
    if spec.family == "absolute":
        return (0.0,)
    return ()
