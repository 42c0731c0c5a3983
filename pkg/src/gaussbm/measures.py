"""Gaussian measure of wedges and strips by quadrature, closed form and Monte Carlo."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gauss_core import (
    INV_SQRT_2PI,
    QuadratureConfig,
    QuadratureResult,
    density_array,
    gaussian_tail,
    integrate_semi_infinite,
    scale_knots,
    tail_array,
)
from .geometry import Wedge, contains_array

# Samples drawn per block; fixed so the stream split never depends on anything
# but (samples, seed).
MC_BLOCK = 1 << 20
MC_MIN_SAMPLES = 1000


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def z_score(self, truth: float) -> float:
        """Standardised difference from ``truth``; inf if the estimate is degenerate."""
        diff = self.mean - truth
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.std_error


def wedge_measure(w: Wedge, cfg: QuadratureConfig | None = None) -> QuadratureResult:
    """gamma_2(w) = 2 * int_0^inf T(x tan(alpha) - shift) phi(x) dx.

    The halfspace case ``alpha == 0`` runs through the same integral on purpose.
    """
    slope, shift = w.slope, w.shift

    def integrand(x):
        return tail_array(x * slope - shift) * density_array(x)

    # |T| <= 1, so the envelope is the density constant; doubling the
    # integral doubles value and bound alike.
    knots = scale_knots(shift / slope, 1.0 / slope) if slope > 0 else ()
    res = integrate_semi_infinite(integrand, INV_SQRT_2PI, cfg, knots)
    value = min(1.0, max(0.0, 2.0 * res.value))
    return QuadratureResult(value, 2.0 * res.error_bound, res.evaluations)


def apex_wedge_measure_closed(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 <= alpha < math.pi / 2):
        raise DomainError(f"alpha must lie in [0, pi/2), got {alpha!r}")
    return 0.5 - alpha / math.pi


def halfspace_measure_closed(shift: float) -> float:
    """gamma({y >= -shift}) = 1 - T(shift)."""
    return 1.0 - gaussian_tail(shift)


def strip_measure_closed(c: float) -> float:
    """gamma_2({|y| <= c}) = 1 - 2 T(c)."""
    c = float(c)
    if not c > 0.0:
        raise DomainError(f"strip halfwidth must be > 0, got {c!r}")
    if math.isinf(c):
        return 1.0
    return 1.0 - 2.0 * gaussian_tail(c)


def wedge_measure_montecarlo(w: Wedge, samples: int, seed: int) -> MonteCarloEstimate:
    """Hit fraction of standard bivariate normal points falling in ``w``.

    Points come from a Philox counter-based generator keyed by ``seed`` and
    are drawn in fixed blocks, so the estimate depends only on
    ``(w, samples, seed)``.
    """
    samples = int(samples)
    if samples < MC_MIN_SAMPLES:
        raise DomainError(f"need at least {MC_MIN_SAMPLES} samples, got {samples}")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    rng = np.random.Generator(np.random.Philox(seed))
    hits = 0
    remaining = samples
    while remaining:
        n = min(remaining, MC_BLOCK)
        xy = rng.standard_normal((n, 2))
        hits += int(np.count_nonzero(contains_array(w, xy[:, 0], xy[:, 1])))
        remaining -= n
    p = hits / samples
    return MonteCarloEstimate(
        mean=p,
        std_error=math.sqrt(p * (1.0 - p) / samples),
        samples=samples,
        seed=seed,
    )

