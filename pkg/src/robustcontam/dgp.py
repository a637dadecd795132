"""
Seeded data-generating processes with a fixed share of outliers.

A configuration draws ``h`` good errors from a reference law and places the
remaining ``n - h`` outliers at ``max(good) + xi`` (or, for a share
``varrho`` of the sample, at ``min(good) - xi``).  Observations are
``mu0 + sigma0 * eps`` and are returned in a seeded random order together
with the positions of the good ones.

Presets ``dgp1`` .. ``dgp6`` follow the standard simulation design:

=======  ===========  ======  ====
preset   h            law     xi
=======  ===========  ======  ====
dgp1     n            normal  --
dgp2     n            t(3)    --
dgp3     0.8 n        normal  1
dgp4     0.8 n        normal  3
dgp5     0.8 n        t(3)    3
dgp6     n - 1        normal  3
=======  ===========  ======  ====
"""

from dataclasses import dataclass, fields, replace

import numpy as np

from .estimators import Sample
from .exceptions import DomainError
from .numerics import NORMAL, T3, ErrorLaw, quantile

__all__ = [
    "DgpConfig",
    "PRESETS",
    "preset",
    "generate",
    "generate_errors",
    "generate_scale_sweep_cfg",
    "rep_seed",
    "rng_for",
    "dumps",
    "loads",
]

PRESETS = ("dgp1", "dgp2", "dgp3", "dgp4", "dgp5", "dgp6")
_PRESET_TABLE = {
    # name: (law, good share or None for n - 1, xi)
    "dgp1": (NORMAL, 1.0, 0.0),
    "dgp2": (T3, 1.0, 0.0),
    "dgp3": (NORMAL, 0.8, 1.0),
    "dgp4": (NORMAL, 0.8, 3.0),
    "dgp5": (T3, 0.8, 3.0),
    "dgp6": (NORMAL, None, 3.0),
}


@dataclass(frozen=True)
class DgpConfig:
    """Full description of a contaminated sample.

    Parameters
    ----------
    n : int
        Sample size.
    h : int
        Number of good observations, ``1 <= h <= n``.
    good_law : ErrorLaw
    xi : float
        Offset of the outliers beyond the extreme good error.
    mu0, sigma0 : float
        Location and scale of the observations.
    varrho : float
        Share of the whole sample placed as outliers on the left.
    preset : str or None
        Name of the preset the configuration was built from.
    """

    n: int
    h: int
    good_law: ErrorLaw = NORMAL
    xi: float = 0.0
    mu0: float = 0.0
    sigma0: float = 1.0
    varrho: float = 0.0
    preset: str = None

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not (isinstance(self.h, (int, np.integer)) and 1 <= self.h <= self.n):
            raise DomainError(f"h must be an integer in [1, n], got {self.h!r}")
        if not self.xi >= 0:
            raise DomainError("xi must be nonnegative")
        if not self.sigma0 > 0:
            raise DomainError("sigma0 must be positive")
        if not 0 <= self.n_left <= self.n - self.h:
            raise DomainError("varrho * n exceeds the number of outliers")

    @property
    def lam(self):
        return self.h / self.n

    @property
    def n_left(self):
        return int(round(self.varrho * self.n))


def preset(name, n):
    """Configuration of preset ``name`` at sample size ``n``."""
    try:
        law, share, xi = _PRESET_TABLE[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; expected one of {PRESETS}") from None
    h = n - 1 if share is None else int(round(share * n))
    return DgpConfig(n=n, h=h, good_law=law, xi=xi, preset=name)


def generate_scale_sweep_cfg(base, lam):
    """Copy of ``base`` with ``h = round(lam * n)``, ``1/2 < lam <= 1``."""
    if not 0.5 < lam <= 1.0:
        raise DomainError(f"lam must lie in (1/2, 1], got {lam}")
    return replace(base, h=int(round(lam * base.n)))


# ---------------------------------------------------------------------------
# random streams

_SEED_MASK = (1 << 64) - 1


def rep_seed(base_seed, rep):
    """Seed of repetition ``rep``: ``base_seed XOR rep`` on 64 bits."""
    return (int(base_seed) ^ int(rep)) & _SEED_MASK


def rng_for(seed):
    return np.random.Generator(np.random.PCG64(int(seed) & _SEED_MASK))


def _open_uniform(rng, size):
    # random() lives on the grid k / 2^53 including 0; shift by half a step
    return rng.random(size) + 2.0 ** -54


def generate_errors(cfg, rng):
    """Errors in generation order: good errors first, then the outliers."""
    good = quantile(cfg.good_law, _open_uniform(rng, cfg.h))
    n_out = cfg.n - cfg.h
    n_left = cfg.n_left
    eps = np.empty(cfg.n)
    eps[:cfg.h] = good
    if n_out:
        eps[cfg.h:cfg.h + n_left] = good.min() - cfg.xi
        eps[cfg.h + n_left:] = good.max() + cfg.xi
    return eps


def generate(cfg, seed):
    """Draw a sample from ``cfg``.

    Returns
    -------
    sample : Sample
    good_idx : ndarray of int
        Sorted positions of the good observations in ``sample.values``.
    """
    rng = rng_for(seed)
    eps = generate_errors(cfg, rng)
    perm = rng.permutation(cfg.n)
    y = cfg.mu0 + cfg.sigma0 * eps[perm]
    good_idx = np.flatnonzero(perm < cfg.h)
    return Sample(y), good_idx


# ---------------------------------------------------------------------------
# key=value text form

def dumps(cfg):
    """Flat ``key=value`` text; a plain preset serializes as two lines."""
    if cfg.preset is not None and cfg == preset(cfg.preset, cfg.n):
        return f"preset={cfg.preset}\nn={cfg.n}\n"
    out = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        out.append(f"{f.name}={value}")
    return "\n".join(out) + "\n"


def _parse_lines(text):
    items = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        items[key.replace("-", "_")] = value
    return items


def loads(text):
    """Inverse of `dumps`; explicit fields override preset values."""
    items = _parse_lines(text)
    if "n" not in items:
        raise DomainError("configuration needs n")
    n = int(items.pop("n"))
    name = items.pop("preset", None)
    if name is not None:
        cfg = preset(name, n)
    else:
        if "h" not in items:
            raise DomainError("configuration needs either preset or h")
        cfg = DgpConfig(n=n, h=int(items["h"]))
    conv = {"h": int, "good_law": ErrorLaw.from_name, "xi": float, "mu0": float,
            "sigma0": float, "varrho": float}
    updates = {}
    for key, value in items.items():
        if key not in conv:
            raise DomainError(f"unknown configuration key {key!r}")
        updates[key] = conv[key](value)
    if updates:
        cfg = replace(cfg, **updates)
    return cfg
