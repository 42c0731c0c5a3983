import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from gaussbm.errors import DomainError, UnsupportedCombinationError
from gaussbm.geometry import ALPHA_MAX, HalfLine, Strip, Wedge, contains, dilate, minkowski_combination

A = Wedge(math.pi / 4, 0.0)

alphas = st.floats(0.0, 1.5)
shifts = st.floats(0.0, 5.0)
coords = st.floats(-50.0, 50.0)
lams = st.floats(0.0, 1.0)


@pytest.mark.parametrize(
    "w, p, expected",
    [
        (A, (1.0, 2.0), True),
        (A, (1.0, 0.5), False),
        (Wedge(math.pi / 4, 0.6), (1.0, 0.5), True),
    ],
)
def test_contains_examples(w, p, expected):
    assert contains(w, p) is expected


def test_wedge_validation():
    with pytest.raises(DomainError):
        Wedge(-0.1)
    with pytest.raises(DomainError):
        Wedge(math.pi / 2)
    with pytest.raises(DomainError):
        Wedge(0.5, -1e-3)
    Wedge(ALPHA_MAX)
    with pytest.raises(DomainError):
        Strip(0.0)
    with pytest.raises(DomainError):
        contains(A, (math.nan, 0.0))


def test_alpha_zero_is_halfspace():
    w = Wedge(0.0, 0.3)
    assert w.is_halfspace
    assert contains(w, (1e9, -0.3)) and not contains(w, (0.0, -0.30001))


def test_combination_examples():
    b = Wedge(A.alpha, 0.2)
    assert minkowski_combination(A, b, 0.5) == Wedge(A.alpha, 0.1)
    assert minkowski_combination(A, A, 0.3) == A
    assert minkowski_combination(A, b, 1.0) == A
    assert minkowski_combination(A, b, 0.0) == b


def test_combination_rejects_mismatched_angles():
    with pytest.raises(UnsupportedCombinationError):
        minkowski_combination(A, Wedge(0.5, 0.1), 0.5)
    with pytest.raises(DomainError):
        minkowski_combination(A, A, 1.5)


def test_dilate_examples():
    b = Wedge(1.0, 0.1)
    assert dilate(b, 0.0) == b
    assert dilate(A, 3.7) == A
    assert dilate(b, math.log(2)).shift == pytest.approx(0.2, rel=1e-15)
    assert dilate(Strip(1.0), math.log(2)).halfwidth == pytest.approx(2.0, rel=1e-15)
    assert dilate(HalfLine(0.01), 0.0) == HalfLine(0.01)
    with pytest.raises(OverflowError):
        dilate(b, 800.0)


@given(alphas, st.floats(0.0, 2.0), lams, coords, coords)
def test_combination_decomposition(alpha, eps, lam, x, y):
    a_set = Wedge(alpha, 0.0)
    b_set = Wedge(alpha, eps)
    c_set = minkowski_combination(a_set, b_set, lam)
    # stay clear of the boundary where rounding decides membership
    assume(y - (abs(x) * c_set.slope - c_set.shift) > 1e-9 * (1 + abs(x) * c_set.slope))
    p = (x, y)
    assert contains(c_set, p)
    a = (x, y + (1 - lam) * eps)
    b = (a[0], a[1] - eps)
    assert contains(a_set, a)
    assert contains(b_set, b)
    combo = (lam * a[0] + (1 - lam) * b[0], lam * a[1] + (1 - lam) * b[1])
    assert combo[0] == pytest.approx(x, abs=1e-12)
    assert combo[1] == pytest.approx(y, abs=1e-12 * (1 + abs(y) + eps))


@given(alphas, st.floats(1e-3, 5.0), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
def test_dilation_semigroup(alpha, shift, s, t):
    w = Wedge(alpha, shift)
    twice = dilate(dilate(w, s), t).shift
    once = dilate(w, s + t).shift
    assert twice == pytest.approx(once, rel=4 * 2.0**-52 * (1 + abs(s) + abs(t)))


@given(alphas, shifts, shifts, coords, coords)
def test_inclusion_monotone_in_shift(alpha, s1, s2, x, y):
    lo, hi = sorted((s1, s2))
    if contains(Wedge(alpha, lo), (x, y)):
        assert contains(Wedge(alpha, hi), (x, y))
