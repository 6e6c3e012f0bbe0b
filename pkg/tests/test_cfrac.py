"""Continued-fraction values, two-sided heights, and digit-bounded sets."""
from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spectra_lab.cantor import thickness
from spectra_lab.cfrac import (
    CFSequence,
    cf_value,
    convergents,
    gauss_cantor_set,
    gauss_hull,
    height_function,
)
from spectra_lab.surds import QuadraticSurd, TailSum


def test_cf_value_fixed_point_surds():
    assert cf_value((1,), (1,)) == QuadraticSurd.make(1, 1, 2, 5)
    assert cf_value((2,), (2,)) == QuadraticSurd.make(1, 1, 1, 2)
    assert cf_value((0,), (4,)) == QuadraticSurd.make(-2, 1, 1, 5)


def test_cf_value_finite_is_rational():
    assert cf_value((3, 7, 15, 1)).as_fraction() == Fraction(355, 113)
    assert cf_value((0,)).as_fraction() == 0


def test_cf_value_rejects_bad_digits():
    with pytest.raises(ValueError):
        cf_value((1, 0, 2))
    with pytest.raises(ValueError):
        cf_value((), ())
    with pytest.raises(ValueError):
        cf_value((1,), (10**6 + 1,))


def test_convergents_alternate_around_limit():
    digits = (1,) * 14
    phi = cf_value((1,), (1,))
    seq = list(convergents(digits))
    signs = [phi.compare(c) for c in seq]
    assert all(s != 0 for s in signs)
    assert all(signs[k] != signs[k + 1] for k in range(len(signs) - 1))
    # classical error bound 1/(q_n q_{n+1})
    for k in range(len(seq) - 1):
        err = phi - QuadraticSurd.from_fraction(seq[k])
        bound = Fraction(1, seq[k].denominator * seq[k + 1].denominator)
        assert abs(float(err)) < float(bound) + 1e-15


def test_height_constant_sequences():
    ones = CFSequence.make((1,), (1,), (1,))
    assert height_function(ones) == QuadraticSurd.sqrt_of(5)
    twos = CFSequence.make((2,), (2,), (2,))
    assert height_function(twos) == 2 * QuadraticSurd.sqrt_of(2)


def test_height_alternating_sequence():
    alt = CFSequence.make((2,), (2, 1), (1, 2))
    assert height_function(alt) == 2 * QuadraticSurd.sqrt_of(3)


def test_height_mixed_tails_spans_two_fields():
    seq = CFSequence.make((1,), (2,), (1,))
    val = height_function(seq)
    assert len(val.radicals) == 2
    with pytest.raises(ValueError):
        val.as_surd()
    # [1;1,1,...] + [0;2,2,...] = phi + (sqrt(2) - 1)
    expect = TailSum.from_terms(cf_value((1,), (1,)), cf_value((0,), (2,)))
    assert val == expect


def test_sequence_digit_layout():
    seq = CFSequence.make((5, 6, 7), (1, 2), (3, 4))
    assert seq.digits(-1, 2) == (5, 6, 7)
    assert seq.digit(-2) == 2
    assert seq.digit(-3) == 1
    assert seq.digit(2) == 3
    assert seq.digit(5) == 4


def test_sequence_validation():
    with pytest.raises(ValueError):
        CFSequence.make((1, 2), (1,), (1,))
    with pytest.raises(ValueError):
        CFSequence.make((1,), (), (1,))
    with pytest.raises(ValueError):
        CFSequence.make((0,), (1,), (1,))


def test_json_round_trip():
    seq = CFSequence.make((3, 1, 2), (1, 2, 2), (4, 1))
    data = seq.to_json()
    assert set(data) == {"left_period", "center", "right_period"}
    assert CFSequence.from_json(data) == seq


def test_gauss_hull_digits_two():
    lo, hi = gauss_hull(2)
    root3 = QuadraticSurd.sqrt_of(3)
    assert hi == root3 - 1
    assert lo == (root3 - 1) / 2


def test_gauss_set_brackets_contain_exact_hull():
    cs = gauss_cantor_set(2)
    lo, hi = gauss_hull(2)
    b = cs.hull_bracket()
    assert b[0] <= float(lo) <= b[1]
    assert b[2] <= float(hi) <= b[3]


def test_gauss_set_thickness_landmarks():
    assert thickness(gauss_cantor_set(2), 6).lower == pytest.approx(0.3660254, abs=1e-6)
    assert thickness(gauss_cantor_set(4), 6).lower > 1.0


def test_gauss_degenerate_single_digit():
    cs = gauss_cantor_set(1)
    b = cs.hull_bracket()
    assert b[3] - b[0] < 1e-14
    assert thickness(cs, 4).lower == 0.0


digit_lists = st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=5)


@given(digit_lists, digit_lists,
       st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=5).map(
           lambda v: v if len(v) % 2 else v + [1]),
       st.integers(min_value=-8, max_value=8))
@settings(max_examples=60, deadline=None)
def test_shift_covariance(left, right, center, k):
    seq = CFSequence.make(tuple(center), tuple(left), tuple(right))
    moved = seq.shifted(k)
    for i in range(-12, 13):
        assert moved.digit(i) == seq.digit(i + k)
    assert height_function(seq, k) == height_function(moved)


@given(digit_lists)
@settings(max_examples=40, deadline=None)
def test_periodic_height_max_is_rotation_invariant(period):
    period = tuple(period)
    # purely periodic: digit(i) = period[i mod n]
    base = CFSequence.make((period[0],), period, period[1:] + period[:1])
    for i in range(-6, 7):
        assert base.digit(i) == period[i % len(period)]

    def orbit_max(seq):
        vals = [height_function(seq, k) for k in range(len(period))]
        best = vals[0]
        for v in vals[1:]:
            if v > best:
                best = v
        return best

    assert orbit_max(base) == orbit_max(base.shifted(3))
