"""Second-order expansion of the wedge measure in the shift.

With ``a_k = int_0^inf T^(k)(x tan alpha) phi(x) dx``,

    gamma_2(Wedge(alpha, eps)) = 2 a0 - 2 eps a1 + eps^2 a2 + o(eps^2),

and the sign of the discriminant ``2 a0 a2 - a1^2`` decides the sign of the
leading term of the Brunn-Minkowski gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from scipy import optimize

from .errors import DomainError, SearchError
from .gauss_core import (
    INV_SQRT_2PI,
    TAIL_DERIV_SUP,
    QuadratureConfig,
    density_array,
    integrate_semi_infinite,
    scale_knots,
    tail_deriv_array,
)

Route = Literal["quadrature", "closed_form"]

SEARCH_LO = 1e-6
SEARCH_HI = math.pi / 2 - 1e-6


@dataclass(frozen=True)
class ExpansionCoefficients:
    alpha: float
    a0: float
    a1: float
    a2: float
    route: Route


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 <= alpha < math.pi / 2):
        raise DomainError(f"alpha must lie in [0, pi/2), got {alpha!r}")
    return alpha


def coefficients_quadrature(alpha: float, cfg: QuadratureConfig | None = None) -> ExpansionCoefficients:
    alpha = _check_alpha(alpha)
    slope = math.tan(alpha)
    # T^(k)(x tan alpha) varies on the scale 1/tan alpha near the origin
    knots = scale_knots(0.0, 1.0 / slope) if slope > 0 else ()
    coeffs = []
    for k in (0, 1, 2):
        def integrand(x, k=k):
            return tail_deriv_array(x * slope, k) * density_array(x)

        envelope = TAIL_DERIV_SUP[k] * INV_SQRT_2PI
        coeffs.append(integrate_semi_infinite(integrand, envelope, cfg, knots).value)
    return ExpansionCoefficients(alpha, *coeffs, route="quadrature")


def coefficients_closed(alpha: float) -> ExpansionCoefficients:
    alpha = _check_alpha(alpha)
    return ExpansionCoefficients(
        alpha,
        a0=0.5 * (0.5 - alpha / math.pi),
        # 1/sqrt(1 + tan^2) written as cos to stay finite near pi/2
        a1=-math.cos(alpha) * INV_SQRT_2PI / 2.0,
        a2=math.sin(alpha) * math.cos(alpha) / (2.0 * math.pi),
        route="closed_form",
    )


def bracket(alpha: float) -> float:
    """tan(alpha) * (2 - 4 alpha / pi) - 1; same sign as the discriminant."""
    return math.tan(alpha) * (2.0 - 4.0 * alpha / math.pi) - 1.0


def discriminant(
    alpha: float,
    route: Literal["raw", "simplified"] = "simplified",
    coeffs: ExpansionCoefficients | None = None,
) -> float:
    """2 a0 a2 - a1^2.

    ``raw`` multiplies out coefficients (closed form unless ``coeffs`` is
    given); ``simplified`` uses cos^2(alpha) * bracket(alpha) / (8 pi).
    """
    alpha = _check_alpha(alpha)
    if route == "raw":
        c = coeffs if coeffs is not None else coefficients_closed(alpha)
        return 2.0 * c.a0 * c.a2 - c.a1 * c.a1
    if route == "simplified":
        return math.cos(alpha) ** 2 * bracket(alpha) / (8.0 * math.pi)
    raise DomainError(f"unknown route {route!r}")


def critical_angle(tol: float = 1e-12) -> float:
    """Root of :func:`bracket` in (0, pi/2) by bisection, to within ``tol``."""
    tol = float(tol)
    if not tol > 0.0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    lo, hi = bracket(SEARCH_LO), bracket(SEARCH_HI)
    if lo * hi > 0:
        raise SearchError(f"no sign change on [{SEARCH_LO}, {SEARCH_HI}]")
    return optimize.bisect(bracket, SEARCH_LO, SEARCH_HI, xtol=tol, rtol=4 * 2.0**-52, maxiter=400)


def gap_coefficient(alpha: float) -> float:
    """Coefficient K with predicted gap = -lam (1-lam) K eps^2."""
    c = coefficients_closed(alpha)
    return discriminant(alpha) / (2.0 * (2.0 * c.a0) ** 1.5)


def predicted_gap(alpha: float, eps: float, lam: float) -> float:
    """eps^2-order term of sqrt-measure gap for A = Wedge(alpha, 0), B = Wedge(alpha, eps)."""
    alpha, eps, lam = float(alpha), float(eps), float(lam)
    if not 0.0 < alpha < math.pi / 2:
        raise DomainError(f"alpha must lie in (0, pi/2), got {alpha!r}")
    if not (eps > 0.0 and math.isfinite(eps)):
        raise DomainError(f"eps must be > 0, got {eps!r}")
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam!r}")
    return -lam * (1.0 - lam) * gap_coefficient(alpha) * eps * eps


def measure_expansion(alpha: float, eps: float) -> float:
    """2 a0 - 2 eps a1 + eps^2 a2, the quadratic Taylor polynomial of gamma_2(B_eps)."""
    c = coefficients_closed(alpha)
    return 2.0 * c.a0 - 2.0 * eps * c.a1 + eps * eps * c.a2


def sqrt_measure_expansion(alpha: float) -> tuple[float, float, float]:
    """(c0, c1, c2) with sqrt(gamma_2(B_eps)) = c0 + c1 eps + c2 eps^2 + o(eps^2)."""
    c = coefficients_closed(alpha)
    m = 2.0 * c.a0
    c0 = math.sqrt(m)
    c1 = -c.a1 / c0
    c2 = c.a2 / (2.0 * c0) - c.a1 * c.a1 / (2.0 * m * c0)
    return c0, c1, c2
