"""Cylinder covers, thickness, dimension, and intersection certificates."""
from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spectra_lab.cantor import (
    AffineBranch,
    MoebiusBranch,
    RegularCantorSet,
    box_dim_estimate,
    cylinders,
    full_interval,
    gap_lemma_test,
    hausdorff_dim,
    limit_geometry,
    middle_third,
    stable_intersection_sweep,
    sumset_contains_interval,
    thickness,
    translate,
    two_affine,
)

LOG23 = math.log(2.0) / math.log(3.0)


def gauss_pair() -> RegularCantorSet:
    # continued fractions with digits 1 and 2; hull endpoints are the
    # periodic points sqrt(3)-1 and (sqrt(3)-1)/2
    ymax = math.sqrt(3.0) - 1.0
    ymin = ymax / 2.0
    branches, brackets = [], []
    for d in (1, 2):
        lo = 1.0 / (d + ymax)
        hi = 1.0 / (d + ymin)
        wide = (math.nextafter(lo, 0.0), math.nextafter(lo, 1.0),
                math.nextafter(hi, 0.0), math.nextafter(hi, 1.0))
        branches.append(MoebiusBranch(d))
        brackets.append(wide)
    trans = frozenset((i, j) for i in range(2) for j in range(2))
    return RegularCantorSet(("1", "2"), tuple(branches), tuple(brackets),
                            trans, None, True, "cf-digits-12")


def test_affine_branch_rejects_expanding_ratio():
    with pytest.raises(ValueError):
        AffineBranch(Fraction(0), Fraction(1))
    with pytest.raises(ValueError):
        AffineBranch(Fraction(0), Fraction(3, 2))
    with pytest.raises(ValueError):
        MoebiusBranch(0)


def test_middle_third_cylinders_depth_two():
    cover = cylinders(middle_third(), 2)
    assert cover.words == [(0, 0), (0, 1), (1, 0), (1, 1)]
    exact = [(0, Fraction(1, 9)), (Fraction(2, 9), Fraction(1, 3)),
             (Fraction(2, 3), Fraction(7, 9)), (Fraction(8, 9), 1)]
    for k, (lo, hi) in enumerate(exact):
        assert cover.lo_lo[k] <= lo <= cover.lo_hi[k]
        assert cover.hi_lo[k] <= hi <= cover.hi_hi[k]


def test_cover_brackets_are_ordered_and_nested():
    cs = gauss_pair()
    shallow = cylinders(cs, 3).sorted_by_position()
    deep = cylinders(cs, 6).sorted_by_position()
    for cov in (shallow, deep):
        for k in range(len(cov)):
            assert cov.lo_lo[k] <= cov.lo_hi[k] <= cov.hi_lo[k] <= cov.hi_hi[k]
    assert deep.max_length_upper() < shallow.max_length_upper()


def test_thickness_middle_third_is_exactly_one():
    est = thickness(middle_third(), 6)
    assert est.exact == 1
    assert est.rigorous
    assert est.gap_count == 63


def test_thickness_ratio_two_fifths_is_exactly_two():
    est = thickness(two_affine(Fraction(2, 5), Fraction(2, 5)), 6)
    assert est.exact == 2


def test_thickness_full_interval_is_infinite():
    est = thickness(full_interval(), 5)
    assert est.infinite
    assert math.isinf(est.lower)


def test_thickness_cf_digits_12_lower_bound():
    est = thickness(gauss_pair(), 6)
    # true value is (sqrt(3)-1)/2; the walk may only undershoot
    true = (math.sqrt(3.0) - 1.0) / 2.0
    assert est.lower <= true + 1e-12
    assert est.lower > true - 1e-6


def test_gap_lemma_needs_strict_product():
    cert = gap_lemma_test(middle_third(), middle_third())
    assert cert.status == "inconclusive"
    assert cert.product == pytest.approx(1.0)
    assert cert.linked


def test_gap_lemma_certifies_thick_pair():
    cs = two_affine(Fraction(2, 5), Fraction(2, 5))
    cert = gap_lemma_test(cs, cs)
    assert cert.status == "certified"
    assert cert.product > 1.0
    assert cert.rigorous


def test_hausdorff_middle_third_encloses_log_ratio():
    enc = hausdorff_dim(middle_third(), tol=1e-6)
    assert enc.converged
    assert enc.width <= 1e-6
    assert enc.lo <= LOG23 <= enc.hi
    assert enc.rigorous


def test_hausdorff_quarter_ratio_encloses_half():
    enc = hausdorff_dim(two_affine(Fraction(1, 4), Fraction(1, 4)), tol=1e-8)
    assert enc.lo <= 0.5 <= enc.hi


def test_box_estimate_matches_exact_affine_slope():
    est = box_dim_estimate(middle_third(), range(4, 13))
    assert est.slope == pytest.approx(LOG23, abs=1e-6)
    assert not est.rigorous
    assert est.counts[0] == 16


def test_sumset_middle_third_certificate_shape():
    cert = sumset_contains_interval(middle_third(), middle_third(), (0.25, 1.75))
    assert cert.status == "certified"
    assert cert.nodes == 3
    assert cert.tree["rule"] == "split"
    assert [c["rule"] for c in cert.tree["children"]] == ["gap", "gap"]


def test_sumset_rejects_unreachable_target():
    cert = sumset_contains_interval(middle_third(), middle_third(), (-0.5, 0.5),
                                    depth_cap=6, node_cap=5000)
    assert cert.status == "failed"
    assert cert.tree is None
    assert cert.witness is not None and cert.witness < 0.0


def test_translate_keeps_exact_arithmetic():
    moved = translate(middle_third(), Fraction(1, 3))
    assert moved.exact
    lo, hi = moved.hull_exact()
    assert (lo, hi) == (Fraction(1, 3), Fraction(4, 3))
    assert thickness(moved, 5).exact == 1


def test_limit_geometry_affine_collapses_exactly():
    rep = limit_geometry(middle_third(), (0, 1), range(2, 8))
    assert rep.exact_zero
    assert rep.sup_diffs == (0.0,) * 6
    assert rep.ratios == ()


def test_limit_geometry_cf_ratios_contract():
    rep = limit_geometry(gauss_pair(), (0, 1), range(2, 9))
    assert all(d > 0 for d in rep.sup_diffs)
    assert all(0.1 < r < 0.6 for r in rep.ratios)
    assert not rep.rigorous


def test_sweep_reports_certified_run_without_false_positives():
    cs = two_affine(Fraction(2, 5), Fraction(2, 5))
    rep = stable_intersection_sweep(cs, cs, (-0.25, 0.25), steps=11, depth=5,
                                    refine_depth=10)
    assert rep.certified_runs
    assert rep.false_positives == ()
    lo, hi = rep.certified_runs[0]
    assert lo <= 0.0 <= hi


@st.composite
def contraction_pairs(draw):
    num_l = draw(st.integers(min_value=1, max_value=9))
    num_r = draw(st.integers(min_value=1, max_value=9))
    return Fraction(num_l, 20), Fraction(num_r, 20)


@given(contraction_pairs())
@settings(max_examples=25, deadline=None)
def test_two_affine_cover_invariants(ratios):
    rl, rr = ratios
    cs = two_affine(rl, rr)
    cover = cylinders(cs, 5).sorted_by_position()
    assert len(cover) == 32
    for k in range(len(cover)):
        assert -1e-12 <= cover.lo_lo[k] and cover.hi_hi[k] <= 1.0 + 1e-12
    for k in range(len(cover) - 1):
        assert cover.lo_lo[k] <= cover.lo_lo[k + 1]


@given(contraction_pairs())
@settings(max_examples=15, deadline=None)
def test_two_affine_thickness_positive_and_rigorous(ratios):
    rl, rr = ratios
    est = thickness(two_affine(rl, rr), 5)
    assert est.rigorous
    assert est.lower >= 0.0
    if rl == rr:
        # equal ratios make every visible gap identical by self-similarity
        expected = Fraction(rl, 1 - 2 * rl) if 2 * rl < 1 else None
        if expected is not None and est.exact is not None:
            assert est.exact == expected
