"""
Robust location estimation when a fixed share of the sample is contaminated.

The package collects loss functions (`rho`), estimators (`estimators`),
their limiting behaviour (`theory`), seeded contaminated designs (`dgp`)
and the Monte Carlo drivers behind the command-line harness
(`simulation`, `cli`).
"""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    BracketError,
    DegenerateScaleError,
    DomainError,
    NumericalError,
    RegimeError,
    RobustContamError,
    UnsupportedOperation,
)
from .numerics import NORMAL, T3, ErrorLaw  # noqa: E402
from .rho import RhoSpec  # noqa: E402
from .estimators import (  # noqa: E402
    EstimateReport,
    Sample,
    estimate_trimming,
    lts_location_scale,
    m_location,
    m_location_with_estimated_scale,
    scale_iqr,
    scale_mad,
)
from .theory import ContaminationGeometry  # noqa: E402
from .dgp import DgpConfig, generate, preset  # noqa: E402

__all__ = [
    "__version__",
    "BracketError", "DegenerateScaleError", "DomainError", "NumericalError",
    "RegimeError", "RobustContamError", "UnsupportedOperation",
    "ErrorLaw", "NORMAL", "T3", "RhoSpec",
    "Sample", "EstimateReport", "m_location", "m_location_with_estimated_scale",
    "scale_iqr", "scale_mad", "lts_location_scale", "estimate_trimming",
    "ContaminationGeometry", "DgpConfig", "generate", "preset",
]
