"""Structurally damped evolution equations with fractional time derivatives."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .ml import MLParams, mittag_leffler, ml_eval, ml3_eval  # noqa: F401
from .spectral import ModelParams, roots  # noqa: F401
from .solver import Grid, SpectralField, solve_cp1, solve_cp2  # noqa: F401
