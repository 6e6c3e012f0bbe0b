"""Markov and Lagrange values, spectrum sampling, and flow reduction."""
from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spectra_lab.cfrac import CFSequence
from spectra_lab.spectra import (
    DiscreteSystem,
    FlowObservable,
    Observable,
    Orbit,
    SuspensionFlow,
    cf_shift_system,
    flow_section_inclusion,
    lagrange_value,
    markov_value,
    max_f_flow,
    sample_spectrum,
    spectrum_report,
)
from spectra_lab.surds import QuadraticSurd


def test_markov_constant_observable():
    sys2, _ = cf_shift_system(2)
    const = Observable("seven", lambda _s: Fraction(7), exact=True)
    orb = sys2.periodic_orbits(1)[0]
    assert markov_value(sys2, const, orb).exact == 7


def test_markov_exact_surd_values():
    sys2, height = cf_shift_system(2)
    orbs = {o.handle(): o for o in sys2.periodic_orbits(2)}
    assert markov_value(sys2, height, orbs["(1)"]).exact == QuadraticSurd.sqrt_of(5)
    assert markov_value(sys2, height, orbs["(2)"]).exact == 2 * QuadraticSurd.sqrt_of(2)
    assert markov_value(sys2, height, orbs["(1,2)"]).exact == 2 * QuadraticSurd.sqrt_of(3)


def test_markov_is_rotation_invariant():
    sys2, height = cf_shift_system(2)
    orb = next(o for o in sys2.periodic_orbits(3) if o.period == 3)
    rotated = Orbit(orb.points[1:] + orb.points[:1], orb.word)
    assert markov_value(sys2, height, orb).exact == markov_value(sys2, height, rotated).exact


def test_lagrange_ignores_transient():
    sys2, height = cf_shift_system(2)
    pt = CFSequence.make((5,), (1,), (1,))
    lv = lagrange_value(sys2, height, pt)
    assert lv.exact == QuadraticSurd.sqrt_of(5)
    assert lv.kind == "lagrange"
    mv = markov_value(sys2, height, pt)
    assert mv.exact > lv.exact


def test_lagrange_of_periodic_point_equals_markov():
    sys2, height = cf_shift_system(2)
    orb = next(o for o in sys2.periodic_orbits(2) if o.period == 2)
    pt = orb.points[0]
    assert lagrange_value(sys2, height, pt).exact == markov_value(sys2, height, orb).exact


def test_sample_spectrum_period_one():
    sys2, height = cf_shift_system(2)
    spec = sample_spectrum(sys2, height, 1)
    assert [s.exact for s in spec] == [QuadraticSurd.sqrt_of(5),
                                       2 * QuadraticSurd.sqrt_of(2)]


def test_sample_spectrum_values_below_three():
    sys2, height = cf_shift_system(2)
    spec = sample_spectrum(sys2, height, 4)
    assert spec[0].exact == QuadraticSurd.sqrt_of(5)
    low = [s.exact for s in spec if s.exact < 3]
    expected = [QuadraticSurd.sqrt_of(5), 2 * QuadraticSurd.sqrt_of(2),
                Fraction(1, 5) * QuadraticSurd.sqrt_of(221)]
    assert low == expected


def test_sample_spectrum_rejects_period_zero():
    sys2, height = cf_shift_system(2)
    with pytest.raises(ValueError):
        sample_spectrum(sys2, height, 0)


def test_sample_spectrum_deduplicates_equal_values():
    sys2, _ = cf_shift_system(2)
    const = Observable("one", lambda _s: Fraction(1), exact=True)
    spec = sample_spectrum(sys2, const, 3)
    assert len(spec) == 1


def test_spectrum_monotone_under_digit_restriction():
    small_sys, height = cf_shift_system((1, 2))
    big_sys, _ = cf_shift_system((1, 2, 3))
    small = {s.exact for s in sample_spectrum(small_sys, height, 3)}
    big = {s.exact for s in sample_spectrum(big_sys, height, 3)}
    assert small <= big


def test_equivariance_shift_and_scale():
    sys2, height = cf_shift_system(2)
    orb = next(o for o in sys2.periodic_orbits(3) if o.period == 3)
    base = markov_value(sys2, height, orb).exact
    plus = Observable("h+2", lambda s: height.evaluate(s) + 2, exact=True)
    assert markov_value(sys2, plus, orb).exact == base + 2
    # positive rational scaling through the radical terms
    from spectra_lab.surds import TailSum

    def scaled(s):
        v = TailSum._coerce(height.evaluate(s))
        return TailSum.make(3 * v.rational, tuple((3 * c, d) for c, d in v.radicals))

    triple = Observable("3h", scaled, exact=True)
    lhs = markov_value(sys2, triple, orb).exact
    rhs = TailSum._coerce(base)
    rhs = TailSum.make(3 * rhs.rational, tuple((3 * c, d) for c, d in rhs.radicals))
    assert lhs == rhs


def test_report_gaps_and_empty_warning():
    fake = [type("S", (), {"value": v})() for v in (1.0, 2.0, 3.0)]
    rep = spectrum_report(fake, 0.5)
    assert rep.gaps == ((1.0, 2.0), (2.0, 3.0))
    empty = spectrum_report([], 0.5)
    assert empty.warning
    assert empty.count == 0
    with pytest.raises(ValueError):
        spectrum_report(list(reversed(fake)), 0.5)


def test_report_densest_window_sits_in_upper_region():
    sys4, height = cf_shift_system(4)
    spec = sample_spectrum(sys4, height, 6)
    assert spec[-1].exact == 4 * QuadraticSurd.sqrt_of(2)
    rep = spectrum_report(spec, 0.01)
    lo, hi, count = rep.densest_window
    assert 4.52 <= lo and hi <= 6.0
    assert count >= 100
    assert rep.nonrigorous


def _loop_flow(roof_value: float = 1.0) -> SuspensionFlow:
    base = DiscreteSystem("loop", lambda x: x, lambda x: x,
                          lambda p: (Orbit((0.0,)),))
    roof = Observable("roof", lambda _pt: roof_value)
    return SuspensionFlow(base, roof)


def test_max_f_flow_constant_and_sine():
    susp = _loop_flow()
    const = FlowObservable("c", lambda pt, s: 4.25, lipschitz_time=0.0)
    got = max_f_flow(susp, const, 0.0)
    assert got.value == pytest.approx(4.25)
    assert got.upper == pytest.approx(4.25)
    sine = FlowObservable("sin", lambda pt, s: math.sin(2 * math.pi * s),
                          lipschitz_time=2 * math.pi)
    got = max_f_flow(susp, sine, 0.0)
    assert got.value == pytest.approx(1.0, abs=1e-9)
    assert got.certified and got.upper >= 1.0


def test_max_f_flow_halving_step_is_lipschitz_stable():
    susp = _loop_flow()
    F = FlowObservable("wiggle", lambda pt, s: math.cos(7.0 * s) + 0.3 * s,
                       lipschitz_time=7.3)
    coarse = max_f_flow(susp, F, 0.0, samples=32)
    fine = max_f_flow(susp, F, 0.0, samples=64)
    assert abs(fine.value - coarse.value) <= 7.3 * (1.0 / 32)


def test_max_f_flow_without_hint_is_uncertified():
    susp = _loop_flow()
    F = FlowObservable("plain", lambda pt, s: s * (1 - s))
    got = max_f_flow(susp, F, 0.0)
    assert not got.certified
    assert got.upper is None


def test_flow_inclusion_fiber_only_observable():
    susp = _loop_flow()
    F = FlowObservable("fiber", lambda pt, s: 1.0 - (s - 0.3) ** 2,
                       lipschitz_time=2.0)
    rep = flow_section_inclusion(susp, F, 1, samples=64, refine=10)
    assert rep.orbits_checked == 1
    assert rep.violations == ()


def test_flow_inclusion_cf_base():
    sys2, _ = cf_shift_system(2)
    susp = SuspensionFlow(sys2)
    F = FlowObservable("digit+s", lambda seq, s: float(seq.digit(0)) + s,
                       lipschitz_time=1.0)
    rep = flow_section_inclusion(susp, F, 3, samples=32, refine=8)
    assert rep.violations == ()
    assert rep.orbits_checked == len(sys2.periodic_orbits(3))


digit_seqs = st.tuples(
    st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=3),
    st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=3),
    st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=3).map(
        lambda v: v if len(v) % 2 else v + [1]),
)


@given(digit_seqs)
@settings(max_examples=50, deadline=None)
def test_lagrange_never_exceeds_markov(parts):
    left, right, center = parts
    sys4, height = cf_shift_system(4)
    pt = CFSequence.make(tuple(center), tuple(left), tuple(right))
    lv = lagrange_value(sys4, height, pt)
    mv = markov_value(sys4, height, pt)
    assert lv.exact <= mv.exact
    tail = sys4.tail_orbit(pt)
    assert lv.exact == markov_value(sys4, height, tail).exact
