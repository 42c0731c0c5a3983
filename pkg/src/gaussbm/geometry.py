"""Planar wedges (translated cones), their combinations and dilations.

A :class:`Wedge` with angle ``alpha`` and downward shift ``s`` is the convex
set ``{(x, y) : y >= |x| tan(alpha) - s}``. The symmetric :class:`Strip`
``{|y| <= c}`` and the one-dimensional half-line ``{x >= -s}`` act as
controls for the log-concavity tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedCombinationError

# tan(alpha) must stay finite.
ALPHA_MAX = math.pi / 2 - 1e-6


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 <= alpha <= ALPHA_MAX):
        raise DomainError(f"alpha must lie in [0, pi/2 - 1e-6], got {alpha!r}")
    return alpha


@dataclass(frozen=True)
class Wedge:
    alpha: float
    shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        shift = float(self.shift)
        if not (shift >= 0.0 and math.isfinite(shift)):
            raise DomainError(f"shift must be finite and >= 0, got {self.shift!r}")
        object.__setattr__(self, "shift", shift)

    @property
    def slope(self) -> float:
        return math.tan(self.alpha)

    @property
    def is_halfspace(self) -> bool:
        return self.alpha == 0.0


@dataclass(frozen=True)
class Strip:
    halfwidth: float

    def __post_init__(self):
        c = float(self.halfwidth)
        if not (c > 0.0 and math.isfinite(c)):
            raise DomainError(f"halfwidth must be finite and > 0, got {self.halfwidth!r}")
        object.__setattr__(self, "halfwidth", c)


@dataclass(frozen=True)
class HalfLine:
    """The half-line ``{x >= -shift}`` in one dimension."""

    shift: float

    def __post_init__(self):
        s = float(self.shift)
        if not (s >= 0.0 and math.isfinite(s)):
            raise DomainError(f"shift must be finite and >= 0, got {self.shift!r}")
        object.__setattr__(self, "shift", s)


def contains(w: Wedge, p) -> bool:
    x, y = p
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError(f"point must be finite, got {p!r}")
    return y >= abs(x) * w.slope - w.shift


def contains_array(w: Wedge, x, y):
    """Vectorised membership test over coordinate arrays."""
    return np.asarray(y) >= np.abs(x) * w.slope - w.shift


def minkowski_combination(w1: Wedge, w2: Wedge, lam: float) -> Wedge:
    """``lam*w1 + (1-lam)*w2`` for two wedges of the same angle.

    Same-angle wedges are translates of one cone C, and
    ``lam(C - u) + (1-lam)(C - v) = C - (lam u + (1-lam) v)`` since C is convex.
    """
    if w1.alpha != w2.alpha:
        raise UnsupportedCombinationError(
            f"closed form needs equal angles, got {w1.alpha!r} and {w2.alpha!r}"
        )
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam!r}")
    if lam == 1.0:
        return w1
    if lam == 0.0:
        return w2
    return Wedge(w1.alpha, lam * w1.shift + (1.0 - lam) * w2.shift)


def dilate(shape, t: float):
    """``e^t * shape``. Cone angles are dilation invariant; only offsets scale."""
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t!r}")
    try:
        factor = math.exp(t)
    except OverflowError:
        factor = math.inf
    if isinstance(shape, Wedge):
        if shape.shift == 0.0:
            return shape
        new = shape.shift * factor
        if not math.isfinite(new):
            raise OverflowError(f"dilated shift overflows for t={t!r}")
        return Wedge(shape.alpha, new)
    if isinstance(shape, Strip):
        new = shape.halfwidth * factor
        if not math.isfinite(new):
            raise OverflowError(f"dilated halfwidth overflows for t={t!r}")
        if new == 0.0:
            raise OverflowError(f"dilated halfwidth underflows for t={t!r}")
        return Strip(new)
    if isinstance(shape, HalfLine):
        new = shape.shift * factor
        if not math.isfinite(new):
            raise OverflowError(f"dilated shift overflows for t={t!r}")
        return HalfLine(new)
    raise TypeError(f"cannot dilate {type(shape).__name__}")
