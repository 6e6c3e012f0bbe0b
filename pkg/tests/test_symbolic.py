"""Subshift construction, periodic orbits, avoidance, and entropy."""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectra_lab.symbolic import (
    FiniteWord,
    PeriodicWord,
    SubshiftSFT,
    avoid_word,
    enumerate_periodic,
    fixed_point_count,
    full_shift,
    is_topologically_mixing,
    spectral_radius,
    spectral_radius_enclosure,
    subshift_from_json,
    subshift_to_json,
    symbolic_dimension,
)


def golden() -> SubshiftSFT:
    # no two consecutive 1s
    return SubshiftSFT(("0", "1"), frozenset({("0", "0"), ("0", "1"), ("1", "0")}), "golden")


def test_constructor_validation():
    with pytest.raises(ValueError):
        SubshiftSFT(("a", "a"), frozenset())
    with pytest.raises(ValueError):
        SubshiftSFT(("a",), frozenset({("a", "b")}))


def test_prune_removes_dead_symbols():
    s = SubshiftSFT(("a", "b", "c"), frozenset({("a", "a"), ("a", "b"), ("b", "a"), ("b", "c")}))
    p = s.prune()
    assert set(p.alphabet) == {"a", "b"}
    assert ("b", "c") not in p.allowed


def test_periodic_word_canonical_form():
    w = PeriodicWord.make(("1", "0", "1", "0"))
    assert w.symbols == ("0", "1")
    assert w.period == 2
    v = PeriodicWord.make(("2", "1", "1"))
    assert v.symbols == ("1", "1", "2")
    with pytest.raises(ValueError):
        PeriodicWord.make(("1", "1"), golden())


def test_finite_word_checks_transitions():
    g = golden()
    FiniteWord.make(("0", "1", "0"), g)
    with pytest.raises(ValueError):
        FiniteWord.make(("1", "1"), g)


def test_mixing():
    assert is_topologically_mixing(full_shift("ab"))
    assert is_topologically_mixing(golden())
    # pure cycle is irreducible but not mixing
    cyc = SubshiftSFT(("a", "b"), frozenset({("a", "b"), ("b", "a")}))
    assert not is_topologically_mixing(cyc)
    # dead symbol
    dead = SubshiftSFT(("a", "b"), frozenset({("a", "a"), ("a", "b")}))
    assert not is_topologically_mixing(dead)
    assert not is_topologically_mixing(SubshiftSFT((), frozenset()))


def test_enumerate_periodic_full_shift():
    s = full_shift("ab")
    # orbit classes with period dividing p: necklace counts
    assert len(enumerate_periodic(s, 1)) == 2
    assert len(enumerate_periodic(s, 2)) == 3
    assert len(enumerate_periodic(s, 3)) == 4
    words = {w.symbols for w in enumerate_periodic(s, 2)}
    assert words == {("a",), ("b",), ("a", "b")}


def test_enumerate_periodic_golden_fibonacci():
    g = golden()
    # fixed points of the p-th power = trace(M^p) = Lucas numbers
    lucas = [1, 3, 4, 7, 11, 18, 29]
    for p, expect in enumerate(lucas, start=1):
        assert fixed_point_count(g, p) == expect


def test_avoid_single_symbol():
    s = full_shift("abc")
    t = avoid_word(s, FiniteWord.make(("c",)))
    assert set(t.alphabet) == {"a", "b"}
    assert len(t.allowed) == 4


def test_avoid_word_golden_from_full_shift():
    s = full_shift("01")
    t = avoid_word(s, FiniteWord.make(("1", "1")))
    # one-block states after recoding; same entropy as the golden-mean shift
    rho = spectral_radius(t)
    assert rho == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-9)


def test_avoid_longer_word_growth_rate():
    s = full_shift("01")
    t = avoid_word(s, FiniteWord.make(("0", "1", "0")))
    # root of x^3 = x^2 + x - ... : check against direct transfer matrix power count
    m = t.transition_matrix()
    counts = [m.sum()]
    power = m.copy()
    for _ in range(6):
        power = power @ m
        counts.append(power.sum())
    ratio = counts[-1] / counts[-2]
    assert spectral_radius(t) == pytest.approx(ratio, abs=5e-2)


def test_avoid_everything_gives_empty():
    s = full_shift("0")
    t = avoid_word(s, FiniteWord.make(("0",)))
    assert t.is_empty


def test_spectral_radius_enclosure_full_shift():
    lo, hi = spectral_radius_enclosure(full_shift("abc"))
    assert lo <= 3.0 <= hi
    assert hi - lo < 1e-8
    with pytest.raises(ValueError):
        spectral_radius(SubshiftSFT((), frozenset()))


def test_symbolic_dimension_full_shift():
    # 2 symbols at contraction 1/3: dim = log 2 / log 3
    s = full_shift("ab")
    assert symbolic_dimension(s, 1 / 3) == pytest.approx(math.log(2) / math.log(3), abs=1e-9)
    with pytest.raises(ValueError):
        symbolic_dimension(s, 1.5)


def test_json_round_trip_with_tuple_symbols():
    s = avoid_word(full_shift("01"), FiniteWord.make(("1", "1", "1")))
    data = subshift_to_json(s)
    back = subshift_from_json(data)
    assert back.alphabet == s.alphabet
    assert back.allowed == s.allowed


@st.composite
def random_sft(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    syms = tuple(str(i) for i in range(n))
    pairs = [(a, b) for a in syms for b in syms]
    chosen = draw(st.sets(st.sampled_from(pairs), min_size=1))
    return SubshiftSFT(syms, frozenset(chosen)).prune()


@settings(max_examples=60, deadline=None)
@given(random_sft(), st.integers(min_value=1, max_value=5))
def test_periodic_orbits_lie_in_subshift(s, p):
    for orbit in enumerate_periodic(s, p):
        assert p % orbit.period == 0
        w = orbit.symbols
        for i, a in enumerate(w):
            assert (a, w[(i + 1) % len(w)]) in s.allowed


@settings(max_examples=40, deadline=None)
@given(random_sft())
def test_avoidance_is_monotone_in_entropy(s):
    if s.is_empty:
        return
    orbits = enumerate_periodic(s, 2)
    if not orbits:
        return
    w = FiniteWord.make(orbits[0].rotations()[0][:1])
    t = avoid_word(s, w)
    if t.is_empty:
        return
    assert spectral_radius(t) <= spectral_radius(s) + 1e-9
