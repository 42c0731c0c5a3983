"""One-dimensional Gaussian primitives and a certified semi-infinite quadrature.

Everything here is a pure function. Integrands handed to
:func:`integrate_semi_infinite` must accept a numpy array and evaluate
elementwise.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)
INV_SQRT_2PI = 1.0 / SQRT_2PI
_SQRT2 = math.sqrt(2.0)

# Above this point erfc(x/sqrt2) is evaluated through the scaled function.
_SCALED_FROM = 5.0

# Smallest truncation point regardless of the envelope.
MIN_TRUNCATION = 8.0

# Cap on bisections per integral; depth alone does not bound the work when
# every panel is refined evenly.
MAX_SUBDIVISIONS = 4000

# Gauss-Kronrod 7/15 pair on [-1, 1] (QUADPACK qk15 tables).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod abscissae (plus the centre).
_GAUSS[[1, 3, 5]] = _WG[:3]
_GAUSS[7] = _WG[3]
_GAUSS[[9, 11, 13]] = _WG[2::-1]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerance contract for :func:`integrate_semi_infinite`.

    ``truncation_tail`` defaults to a tenth of ``abs_tol``.
    """

    abs_tol: float = 1e-10
    max_depth: int = 50
    truncation_tail: float | None = None

    def __post_init__(self):
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if self.max_depth < 10:
            raise DomainError(f"max_depth must be >= 10, got {self.max_depth!r}")
        if self.truncation_tail is None:
            object.__setattr__(self, "truncation_tail", self.abs_tol / 10)
        if not (0 < self.truncation_tail <= self.abs_tol / 10):
            raise DomainError("truncation_tail must lie in (0, abs_tol/10]")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_bound: float
    evaluations: int


def _check_finite(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"expected a finite argument, got {x!r}")
    return x


def tail_array(x):
    """Vectorised T(x) = P(Z > x) with relative accuracy deep in the right tail."""
    x = np.asarray(x, dtype=float)
    z = x / _SQRT2
    far = x > _SCALED_FROM
    with np.errstate(under="ignore"):
        scaled = 0.5 * special.erfcx(np.where(far, z, 0.0)) * np.exp(-0.5 * np.where(far, x, 0.0) ** 2)
    return np.where(far, scaled, 0.5 * special.erfc(z))


def density_array(x):
    x = np.asarray(x, dtype=float)
    return INV_SQRT_2PI * np.exp(-0.5 * x * x)


def gaussian_tail(x: float) -> float:
    """Upper tail T(x) of the standard normal distribution."""
    return float(tail_array(_check_finite(x)))


def gaussian_density(x: float) -> float:
    return float(density_array(_check_finite(x)))


def gaussian_cdf(x: float) -> float:
    """Phi(x) = T(-x)."""
    return float(tail_array(-_check_finite(x)))


def tail_deriv_array(x, k: int):
    """Vectorised k-th derivative of T for k in {0, 1, 2}."""
    if k == 0:
        return tail_array(x)
    if k == 1:
        return -density_array(x)
    if k == 2:
        x = np.asarray(x, dtype=float)
        return x * density_array(x)
    raise DomainError(f"derivative order must be 0, 1 or 2, got {k!r}")


def gaussian_tail_deriv(x: float, k: int) -> float:
    if k not in (0, 1, 2):
        raise DomainError(f"derivative order must be 0, 1 or 2, got {k!r}")
    return float(tail_deriv_array(_check_finite(x), k))


# sup |T^(k)| over the real line, used to build quadrature envelopes.
TAIL_DERIV_SUP = {0: 1.0, 1: INV_SQRT_2PI, 2: math.exp(-0.5) * INV_SQRT_2PI}


def truncation_point(envelope: float, cfg: QuadratureConfig) -> float:
    """Smallest X >= 8 with envelope * sqrt(2 pi) * T(X) <= cfg.truncation_tail."""
    if envelope < 0 or not math.isfinite(envelope):
        raise DomainError(f"envelope constant must be finite and >= 0, got {envelope!r}")
    if envelope == 0:
        return MIN_TRUNCATION
    p = cfg.truncation_tail / (envelope * SQRT_2PI)
    if p >= 0.5:
        return MIN_TRUNCATION
    x = -float(special.ndtri(p))
    # ndtri is accurate to a few ulps; nudge until the inequality holds.
    while envelope * SQRT_2PI * gaussian_tail(x) > cfg.truncation_tail:
        x = math.nextafter(x, math.inf) if x > 1 else x + 1e-12
    return max(MIN_TRUNCATION, x)


def scale_knots(centre: float, width: float, upper: float = MIN_TRUNCATION * 2) -> list[float]:
    """Knots at ``centre`` and ``centre +- width * 2**j`` inside (0, upper).

    Resolves an integrand that changes on the scale ``width`` near ``centre``.
    """
    if not (width > 0 and math.isfinite(width)):
        return []
    knots = [centre]
    step = width
    while step < upper:
        knots.extend((centre - step, centre + step))
        step *= 2.0
    return sorted(k for k in knots if 0.0 < k < upper)


def _panel(f, a: float, b: float):
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    fx = np.asarray(f(centre + half * _NODES), dtype=float)
    if fx.shape != _NODES.shape:
        fx = np.broadcast_to(fx, _NODES.shape)
    if not np.all(np.isfinite(fx)):
        raise DomainError(f"integrand is not finite on [{a}, {b}]")
    kronrod = half * float(_KRONROD @ fx)
    gauss = half * float(_GAUSS @ fx)
    resabs = half * float(_KRONROD @ np.abs(fx))
    floor = 50.0 * _EPS * resabs
    return kronrod, abs(kronrod - gauss) + floor, floor


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    envelope: float,
    cfg: QuadratureConfig | None = None,
    breakpoints: Sequence[float] = (),
) -> QuadratureResult:
    """Integrate ``f`` over [0, inf) given ``|f(x)| <= envelope * exp(-x**2/2)``.

    The range is cut at :func:`truncation_point`; [0, X] is refined by
    globally adaptive bisection with a Gauss-Kronrod 7/15 pair until the
    summed local error estimates drop below ``abs_tol - truncation_tail``.
    The returned bound includes the truncated tail mass.

    ``breakpoints`` seed the initial panels. Features narrower than the
    node spacing of a panel are invisible to its error estimate, so callers
    must place knots around them.
    """
    cfg = cfg or QuadratureConfig()
    upper = truncation_point(envelope, cfg)
    tail = float(envelope * SQRT_2PI * gaussian_tail(upper))
    budget = cfg.abs_tol - cfg.truncation_tail

    knots = sorted({0.0, upper, *(float(b) for b in breakpoints if 0.0 < b < upper)})
    heap = []  # entries: (-err, a, b, depth, value, err, rounding floor)
    for lo, hi in zip(knots, knots[1:]):
        v, e, fl = _panel(f, lo, hi)
        heap.append((-e, lo, hi, 0, v, e, fl))
    heapq.heapify(heap)
    evaluations = 15 * len(heap)
    total = math.fsum(e[5] for e in heap)
    floor_total = math.fsum(e[6] for e in heap)
    subdivisions = 0
    while total > budget:
        _, a, b, depth, value, err, floor = heap[0]
        reason = None
        if depth >= cfg.max_depth:
            reason = f"max_depth={cfg.max_depth} reached"
        elif subdivisions >= MAX_SUBDIVISIONS:
            reason = f"{MAX_SUBDIVISIONS} subdivisions used"
        elif floor_total > budget:
            reason = "rounding floor exceeds the tolerance"
        if reason is not None:
            best = QuadratureResult(
                value=math.fsum(e[4] for e in heap),
                error_bound=total + tail,
                evaluations=evaluations,
            )
            raise ConvergenceError(
                f"{reason} with error estimate {best.error_bound:.3g} "
                f"> abs_tol={cfg.abs_tol:.3g}",
                best,
            )
        heapq.heappop(heap)
        mid = 0.5 * (a + b)
        for lo, hi in ((a, mid), (mid, b)):
            v, e, fl = _panel(f, lo, hi)
            heapq.heappush(heap, (-e, lo, hi, depth + 1, v, e, fl))
            floor_total += fl
        floor_total -= floor
        evaluations += 30
        subdivisions += 1
        total = math.fsum(e[5] for e in heap)

    return QuadratureResult(
        value=math.fsum(e[4] for e in heap),
        error_bound=total + tail,
        evaluations=evaluations,
    )
