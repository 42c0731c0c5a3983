"""Numerical checks of Gaussian Brunn-Minkowski and (B)-property counter-examples
built from planar wedges."""

from .errors import (
    ConvergenceError,
    DomainError,
    EvaluationError,
    SearchError,
    UnsupportedCombinationError,
)
from .expansion import (
    ExpansionCoefficients,
    coefficients_closed,
    coefficients_quadrature,
    critical_angle,
    discriminant,
    predicted_gap,
    sqrt_measure_expansion,
)
from .gauss_core import (
    QuadratureConfig,
    QuadratureResult,
    gaussian_tail,
    gaussian_tail_deriv,
    integrate_semi_infinite,
)
from .geometry import HalfLine, Strip, Wedge, contains, dilate, minkowski_combination
from .measures import (
    MonteCarloEstimate,
    apex_wedge_measure_closed,
    strip_measure_closed,
    wedge_measure,
    wedge_measure_montecarlo,
)
from .refutation import BConjReport, GapReport, b_beta, b_second_derivative, gbm_gap, gbm_scan

__version__ = "0.1.0"
