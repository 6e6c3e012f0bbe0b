"""Lagrange and Markov dynamical spectra over pluggable systems.

Spectra are sampled on periodic orbits: the Markov value of an orbit is
the exact maximum of the observable over one period, the Lagrange value
of an eventually periodic point is the Markov value of its forward tail
orbit.  A suspension-flow layer reduces flow spectra to base spectra of
the fiberwise maximum and cross-checks the reduction by dense sampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Any, Callable

from .cfrac import CFSequence, height_function
from .surds import TailSum
from .symbolic import PeriodicWord, enumerate_periodic, full_shift

__all__ = [
    "DiscreteSystem",
    "FlowMax",
    "FlowObservable",
    "InclusionReport",
    "Observable",
    "Orbit",
    "SpectrumReport",
    "SpectrumSample",
    "SuspensionFlow",
    "cf_shift_system",
    "constant_roof",
    "flow_section_inclusion",
    "lagrange_value",
    "markov_value",
    "sample_spectrum",
    "spectrum_report",
    "max_f_flow",
]


@dataclass(frozen=True)
class Observable:
    """Point observable; ``exact`` promises evaluate() returns exactly
    comparable values (TailSum, Fraction, int) rather than floats."""

    label: str
    evaluate: Callable[[Any], Any]
    lipschitz: float | None = None
    exact: bool = False


@dataclass(frozen=True)
class FlowObservable:
    """Observable on suspension points (base point, fiber time)."""

    label: str
    evaluate: Callable[[Any, float], float]
    lipschitz_time: float | None = None


@dataclass(frozen=True)
class Orbit:
    """One periodic orbit: iterate maps points[k] to points[(k+1) % p]."""

    points: tuple
    word: PeriodicWord | None = None

    @property
    def period(self) -> int:
        return len(self.points)

    def handle(self) -> str:
        if self.word is not None:
            return "(" + ",".join(str(s) for s in self.word.symbols) + ")"
        return f"orbit<{self.points[0]!r}>"


@dataclass(frozen=True)
class DiscreteSystem:
    """Invertible discrete-time system with a periodic-orbit provider.

    Point representation is opaque; ``tail_orbit`` maps an eventually
    periodic point to its forward tail orbit and is required for
    Lagrange values.
    """

    label: str
    iterate: Callable[[Any], Any]
    inverse_iterate: Callable[[Any], Any]
    periodic_orbits: Callable[[int], tuple]
    tail_orbit: Callable[[Any], Orbit] | None = None
    point_horizon: Callable[[Any], int] | None = None


@dataclass(frozen=True)
class SpectrumSample:
    value: float
    exact: Any | None
    witness: str
    kind: str
    period: int = 0
    horizon: int = 0


def _value_cmp(a: SpectrumSample, b: SpectrumSample) -> int:
    if a.exact is not None and b.exact is not None:
        diff = TailSum._coerce(a.exact) - TailSum._coerce(b.exact)
        from .surds import sign_of_radical_sum

        return sign_of_radical_sum(diff.rational, list(diff.radicals))
    return (a.value > b.value) - (a.value < b.value)


def _exact_max(values):
    best = values[0]
    for v in values[1:]:
        if v > best:
            best = v
    return best


def markov_value(sys: DiscreteSystem, f: Observable, orbit) -> SpectrumSample:
    """Exact maximum of the observable over a periodic orbit, or over an
    eventually periodic point's two-sided itinerary.

    For a point the supremum is taken over both tail orbits plus a finite
    center window whose half-width is recorded as ``horizon``.
    """
    if isinstance(orbit, Orbit):
        vals = [f.evaluate(pt) for pt in orbit.points]
        if f.exact:
            best = _exact_max(vals)
            return SpectrumSample(float(best), best, orbit.handle(), "markov",
                                  orbit.period)
        best_f = max(float(v) for v in vals)
        return SpectrumSample(best_f, None, orbit.handle(), "markov", orbit.period)
    return _markov_point(sys, f, orbit)


def _markov_point(sys: DiscreteSystem, f: Observable, point) -> SpectrumSample:
    if sys.tail_orbit is None:
        raise ValueError(f"{sys.label} declares no periodic tails")
    horizon = sys.point_horizon(point) if sys.point_horizon else 8
    candidates = []
    fwd = point
    back = point
    candidates.append(f.evaluate(point))
    for _ in range(horizon):
        fwd = sys.iterate(fwd)
        back = sys.inverse_iterate(back)
        candidates.append(f.evaluate(fwd))
        candidates.append(f.evaluate(back))
    for tail_point in (fwd, back):
        tail = sys.tail_orbit(tail_point)
        candidates.extend(f.evaluate(pt) for pt in tail.points)
    if f.exact:
        best = _exact_max(candidates)
        return SpectrumSample(float(best), best, repr(point), "markov", 0, horizon)
    best_f = max(float(v) for v in candidates)
    return SpectrumSample(best_f, None, repr(point), "markov", 0, horizon)


def lagrange_value(sys: DiscreteSystem, f: Observable, point) -> SpectrumSample:
    """limsup of the observable along the forward orbit: the exact
    maximum over the declared periodic tail."""
    if sys.tail_orbit is None:
        raise ValueError(f"{sys.label} declares no periodic tails")
    tail = sys.tail_orbit(point)
    inner = markov_value(sys, f, tail)
    return SpectrumSample(inner.value, inner.exact, repr(point), "lagrange",
                          tail.period)


def sample_spectrum(sys: DiscreteSystem, f: Observable, max_period: int) -> tuple[SpectrumSample, ...]:
    """Markov values of every periodic orbit class with period up to
    ``max_period``, deduplicated and sorted ascending."""
    if max_period < 1:
        raise ValueError("max_period must be at least 1")
    samples = [markov_value(sys, f, orb) for orb in sys.periodic_orbits(max_period)]
    samples.sort(key=cmp_to_key(_value_cmp))
    out: list[SpectrumSample] = []
    for s in samples:
        if out:
            prev = out[-1]
            if s.exact is not None and prev.exact is not None:
                if _value_cmp(prev, s) == 0:
                    continue
            elif abs(s.value - prev.value) <= 1e-12:
                continue
        out.append(s)
    return tuple(out)


@dataclass(frozen=True)
class SpectrumReport:
    count: int
    lo: float | None
    hi: float | None
    gaps: tuple
    densest_window: tuple | None
    histogram: tuple
    resolution: float
    nonrigorous: bool = True
    warning: str = ""


def spectrum_report(samples, resolution: float) -> SpectrumReport:
    """Gap-and-density summary of a sorted sample list.  Heuristic
    evidence only: sampled periodic orbits say nothing certified about
    the closure."""
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    vals = [s.value for s in samples]
    if any(vals[k] > vals[k + 1] for k in range(len(vals) - 1)):
        raise ValueError("samples must be sorted ascending")
    if not vals:
        return SpectrumReport(0, None, None, (), None, (), resolution,
                              warning="empty sample list")
    gaps = tuple((vals[k], vals[k + 1]) for k in range(len(vals) - 1)
                 if vals[k + 1] - vals[k] > resolution)
    # resolution-connected runs: most samples, ties broken by span
    best = None
    start = 0
    for k in range(len(vals)):
        if k + 1 < len(vals) and vals[k + 1] - vals[k] <= resolution:
            continue
        count = k - start + 1
        span = vals[k] - vals[start]
        cand = (count, span, vals[start], vals[k])
        if best is None or (cand[0], cand[1]) > (best[0], best[1]):
            best = cand
        start = k + 1
    densest = (best[2], best[3], best[0])
    bins = [0] * 20
    lo, hi = vals[0], vals[-1]
    width = (hi - lo) or 1.0
    for v in vals:
        idx = min(19, int((v - lo) / width * 20))
        bins[idx] += 1
    return SpectrumReport(len(vals), lo, hi, gaps, densest, tuple(bins),
                          resolution)


# ---------------------------------------------------------------------------
# suspension flows

def constant_roof(height: float = 1.0) -> Observable:
    return Observable(f"roof={height:g}", lambda _pt, _h=float(height): _h)


@dataclass(frozen=True)
class SuspensionFlow:
    """Flow under a positive roof over an invertible base system, with
    the usual identification of (x, roof(x)) and (iterate(x), 0)."""

    base: DiscreteSystem
    roof: Observable = field(default_factory=constant_roof)

    def roof_at(self, point) -> float:
        h = float(self.roof.evaluate(point))
        if not h > 0:
            raise ValueError("roof must stay positive")
        return h


@dataclass(frozen=True)
class FlowMax:
    value: float
    upper: float | None
    certified: bool
    argmax: tuple | None = None


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _segment_max(F: FlowObservable, point, height: float, samples: int):
    h = height / samples
    best_v, best_s = -math.inf, 0.0
    for j in range(samples + 1):
        s = j * h if j < samples else height
        v = F.evaluate(point, s)
        if v > best_v:
            best_v, best_s = v, s
    # golden-section polish around the best grid node
    a = max(0.0, best_s - h)
    b = min(height, best_s + h)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = F.evaluate(point, c), F.evaluate(point, d)
    for _ in range(40):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = F.evaluate(point, c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = F.evaluate(point, d)
    refined = max(best_v, fc, fd)
    return refined, best_v, best_s, h


def max_f_flow(susp: SuspensionFlow, F: FlowObservable, x,
               samples: int = 64) -> FlowMax:
    """Maximum of F along the flow segment through (x, 0), from the
    previous return to the next: the full fibers over inverse_iterate(x)
    and over x.

    With a time-Lipschitz hint the grid maximum plus L*h/2 is a certified
    upper bound; without one the value is flagged uncertified.
    """
    prev = susp.base.inverse_iterate(x)
    best = -math.inf
    upper = -math.inf
    arg = None
    worst_h = 0.0
    for pt in (prev, x):
        height = susp.roof_at(pt)
        refined, grid_best, grid_s, h = _segment_max(F, pt, height, samples)
        if refined > best:
            best = refined
            arg = (pt, grid_s)
        worst_h = max(worst_h, h)
        if F.lipschitz_time is not None:
            upper = max(upper, grid_best + F.lipschitz_time * h / 2.0)
    certified = F.lipschitz_time is not None
    return FlowMax(best, upper if certified else None, certified, arg)


@dataclass(frozen=True)
class InclusionReport:
    orbits_checked: int
    violations: tuple
    max_discrepancy: float
    samples: int
    refine: int
    nonrigorous: bool = True


def flow_section_inclusion(susp: SuspensionFlow, F: FlowObservable,
                           max_period: int, samples: int = 64,
                           refine: int = 10, tol: float = 1e-9) -> InclusionReport:
    """Check, orbit by orbit, that the base Markov value of the fiberwise
    maximum bounds the densely sampled flow maximum over the suspended
    closed orbit.  A refined sample exceeding the coarse certified upper
    bound is reported as a violation."""
    if max_period < 1:
        raise ValueError("max_period must be at least 1")
    violations = []
    worst = 0.0
    orbits = susp.base.periodic_orbits(max_period)
    for orb in orbits:
        coarse_vals = [max_f_flow(susp, F, pt, samples) for pt in orb.points]
        coarse = max(v.value for v in coarse_vals)
        if all(v.certified for v in coarse_vals):
            bound = max(v.upper for v in coarse_vals)
        else:
            bound = coarse
        fine = max(max_f_flow(susp, F, pt, samples * refine).value
                   for pt in orb.points)
        gap = fine - bound
        worst = max(worst, gap)
        if gap > tol:
            violations.append((orb.handle(), coarse, fine, bound))
    return InclusionReport(len(orbits), tuple(violations), worst, samples, refine)


# ---------------------------------------------------------------------------
# the continued-fraction shift with its exact height observable

def _periodic_sequence(word: tuple[int, ...]) -> CFSequence:
    return CFSequence.make((word[0],), word, word[1:] + word[:1])


def cf_shift_system(digits) -> tuple[DiscreteSystem, Observable]:
    """Two-sided full shift on bounded continued-fraction digits, paired
    with the exact height observable.  ``digits`` is a bound N (meaning
    1..N) or an explicit digit collection."""
    if isinstance(digits, int):
        digit_set = tuple(range(1, digits + 1))
    else:
        digit_set = tuple(sorted(set(int(d) for d in digits)))
    if not digit_set or digit_set[0] < 1:
        raise ValueError("digits must be positive")
    shift = full_shift(tuple(str(d) for d in digit_set))

    def orbits(max_period: int):
        out = []
        for p in range(1, max_period + 1):
            for word in enumerate_periodic(shift, p):
                if len(word.symbols) != p:
                    continue
                ints = tuple(int(s) for s in word.symbols)
                base = _periodic_sequence(ints)
                pts = tuple(base.shifted(k) for k in range(p))
                out.append(Orbit(pts, word))
        return tuple(out)

    def tail_orbit(seq: CFSequence) -> Orbit:
        word = seq.right_period
        base = _periodic_sequence(word)
        pts = tuple(base.shifted(k) for k in range(len(word)))
        return Orbit(pts, PeriodicWord.make(tuple(str(d) for d in word)))

    def horizon(seq: CFSequence) -> int:
        return seq.radius + 2 * max(len(seq.left_period), len(seq.right_period)) + 2

    system = DiscreteSystem(
        label=f"cf-shift-{''.join(str(d) for d in digit_set)}",
        iterate=lambda s: s.shifted(1),
        inverse_iterate=lambda s: s.shifted(-1),
        periodic_orbits=orbits,
        tail_orbit=tail_orbit,
        point_horizon=horizon,
    )
    height = Observable("cf_height", height_function, exact=True)
    return system, height
