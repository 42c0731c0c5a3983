"""Direct numerical refutation of the Gaussian Brunn-Minkowski inequality and
of log-concavity of ``t -> gamma(e^t K)`` for non-symmetric K.

Gaps are computed from measures, never from the series; the series only
supplies the prediction they are compared with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

from .errors import ConvergenceError, DomainError, EvaluationError
from .expansion import coefficients_closed, coefficients_quadrature, gap_coefficient
from .gauss_core import QuadratureConfig
from .geometry import HalfLine, Strip, Wedge, dilate, minkowski_combination
from .measures import halfspace_measure_closed, strip_measure_closed, wedge_measure

# Multiplies the first-order propagated quadrature bound on the gap.
GAP_SAFETY = 2.0

_EPS = 2.0**-52

Shape = Wedge | Strip | HalfLine


@dataclass(frozen=True)
class GapReport:
    alpha: float
    eps: float
    lam: float
    gap: float
    gap_error_bound: float
    predicted: float
    agreement: float | None
    violated: bool
    error: str | None = None


@dataclass(frozen=True)
class BConjReport:
    shape: Literal["wedge", "strip", "halfspace_1d"]
    params: dict = field(hash=False)
    t0: float
    step: float
    second_derivative: float
    fd_error_bound: float
    log_concave_locally: bool


def _check_gap_args(alpha, eps, lam):
    alpha, eps, lam = float(alpha), float(eps), float(lam)
    if not (eps >= 0.0 and math.isfinite(eps)):
        raise DomainError(f"eps must be finite and >= 0, got {eps!r}")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam!r}")
    Wedge(alpha)  # validates the angle
    return alpha, eps, lam


def gbm_gap(alpha: float, eps: float, lam: float, cfg: QuadratureConfig | None = None) -> GapReport:
    """sqrt(gamma(C)) - lam sqrt(gamma(A)) - (1-lam) sqrt(gamma(B)) for the wedge pair.

    ``A = Wedge(alpha, 0)``, ``B = Wedge(alpha, eps)`` and ``C = lam A + (1-lam) B``.
    The sign is certified only when the propagated error bound excludes zero.
    """
    alpha, eps, lam = _check_gap_args(alpha, eps, lam)
    a = Wedge(alpha, 0.0)
    b = Wedge(alpha, eps)
    c = minkowski_combination(a, b, lam)

    cache: dict[Wedge, object] = {}
    for w in (a, b, c):
        if w not in cache:
            cache[w] = wedge_measure(w, cfg)
    ma, mb, mc = cache[a], cache[b], cache[c]

    gap = math.sqrt(mc.value) - lam * math.sqrt(ma.value) - (1.0 - lam) * math.sqrt(mb.value)

    def sens(r):
        return r.error_bound / (2.0 * math.sqrt(r.value))

    bound = GAP_SAFETY * (sens(mc) + lam * sens(ma) + (1.0 - lam) * sens(mb))
    predicted = -lam * (1.0 - lam) * gap_coefficient(alpha) * eps * eps + 0.0  # no -0.0
    agreement = gap / predicted if predicted != 0.0 else None
    return GapReport(
        alpha=alpha,
        eps=eps,
        lam=lam,
        gap=gap,
        gap_error_bound=bound,
        predicted=predicted,
        agreement=agreement,
        violated=gap + bound < 0.0,
    )


def gbm_scan(
    alpha_grid: Sequence[float],
    eps_grid: Sequence[float],
    lambda_grid: Sequence[float],
    cfg: QuadratureConfig | None = None,
) -> list[GapReport]:
    """One report per grid cell, alpha-major then eps then lambda.

    A convergence failure in one cell is recorded on that cell's report.
    """
    grids = {"alpha": alpha_grid, "eps": eps_grid, "lambda": lambda_grid}
    for name, grid in grids.items():
        if len(grid) == 0:
            raise DomainError(f"{name} grid is empty")
    for alpha in alpha_grid:
        for eps in eps_grid:
            for lam in lambda_grid:
                _check_gap_args(alpha, eps, lam)

    reports = []
    for alpha in alpha_grid:
        for eps in eps_grid:
            for lam in lambda_grid:
                try:
                    reports.append(gbm_gap(alpha, eps, lam, cfg))
                except ConvergenceError as exc:
                    reports.append(
                        GapReport(
                            float(alpha), float(eps), float(lam),
                            gap=math.nan, gap_error_bound=math.inf, predicted=math.nan,
                            agreement=None, violated=False, error=str(exc),
                        )
                    )
    return reports


def _shape_kind(shape) -> str:
    if isinstance(shape, Wedge):
        return "wedge"
    if isinstance(shape, Strip):
        return "strip"
    if isinstance(shape, HalfLine):
        return "halfspace_1d"
    raise DomainError(f"unsupported shape {shape!r}")


def _measure(shape, cfg) -> tuple[float, float]:
    """Measure and its absolute uncertainty."""
    if isinstance(shape, Wedge):
        r = wedge_measure(shape, cfg)
        return r.value, r.error_bound
    if isinstance(shape, Strip):
        m = strip_measure_closed(shape.halfwidth)
    else:
        m = halfspace_measure_closed(shape.shift)
    return m, 4 * _EPS * m


def _log_second_difference(shape, t0, h, cfg):
    vals, errs = [], []
    for t in (t0 - h, t0, t0 + h):
        m, e = _measure(dilate(shape, t), cfg)
        if not m > 0.0:
            raise EvaluationError(f"measure of {shape!r} dilated by e^{t} is {m!r}")
        vals.append(m)
        errs.append(e)
    logs = [math.log(m) for m in vals]
    d2 = (logs[0] - 2.0 * logs[1] + logs[2]) / (h * h)
    return d2, max(errs), min(vals)


def b_second_derivative(shape: Shape, t0: float = 0.0, h: float = 0.05, cfg: QuadratureConfig | None = None) -> BConjReport:
    """Central second difference of ``F(t) = log gamma(e^t shape)`` at ``t0``.

    The error bound adds a truncation estimate ``2 |D(h) - D(h/2)|`` to the
    noise amplification ``4 delta / (h^2 m_min)`` of the measure errors.
    """
    kind = _shape_kind(shape)
    t0, h = float(t0), float(h)
    if not math.isfinite(t0):
        raise DomainError(f"t0 must be finite, got {t0!r}")
    if not (h > 0.0 and math.isfinite(h)):
        raise DomainError(f"h must be > 0, got {h!r}")
    try:
        d2, delta, m_min = _log_second_difference(shape, t0, h, cfg)
        d2_half, delta_half, m_min_half = _log_second_difference(shape, t0, h / 2, cfg)
    except ConvergenceError as exc:
        raise EvaluationError(f"quadrature failed: {exc}") from exc
    noise = 4.0 * delta / (h * h * m_min)
    # Richardson: error of D(h) is 4/3 |D(h) - D(h/2)| to leading order; 1.5x margin
    bound = 2.0 * abs(d2 - d2_half) + noise
    if kind == "wedge":
        params = {"alpha": shape.alpha, "eps": shape.shift}
    elif kind == "strip":
        params = {"c": shape.halfwidth}
    else:
        params = {"eps": shape.shift}
    return BConjReport(
        shape=kind,
        params=params,
        t0=t0,
        step=h,
        second_derivative=d2,
        fd_error_bound=bound,
        log_concave_locally=d2 - bound <= 0.0,
    )


def b_beta(alpha: float, cfg: QuadratureConfig | None = None) -> float:
    """beta = -a1/a0, the rate in log gamma(e^t B_eps) = const + beta eps e^t + o(eps).

    Closed-form coefficients unless ``cfg`` is given, in which case both are
    integrated.
    """
    c = coefficients_closed(alpha) if cfg is None else coefficients_quadrature(alpha, cfg)
    beta = -c.a1 / c.a0
    if not beta > 0.0:
        raise EvaluationError(f"beta={beta!r} is not positive at alpha={alpha!r}")
    return beta


def find_b_violation(
    alpha: float,
    eps_start: float = 0.1,
    t0: float = 0.0,
    h: float = 0.05,
    cfg: QuadratureConfig | None = None,
) -> BConjReport | None:
    """Halve eps until the wedge certifies ``F'' > 0`` at ``t0``.

    Returns ``None`` once the expected signal ``beta eps`` falls under the
    noise floor ``4 abs_tol / (h^2 m)``.
    """
    cfg = cfg or QuadratureConfig()
    beta = b_beta(alpha)
    m = 2.0 * coefficients_closed(alpha).a0
    floor = 4.0 * cfg.abs_tol / (h * h * m)
    eps = float(eps_start)
    while beta * eps > floor:
        rep = b_second_derivative(Wedge(alpha, eps), t0, h, cfg)
        if rep.second_derivative - rep.fd_error_bound > 0.0:
            return rep
        eps /= 2.0
    return None
