"""Regular Cantor sets on the line with certified interval combinatorics.

Cylinder covers, Hausdorff-dimension enclosures, thickness lower bounds,
gap-lemma certificates, sumset-interval certificates, renormalized limit
geometries, and translation sweeps. Floating-point bounds are kept sound
by a one-ulp outward step after every operation; sets with rational
affine data additionally run on an exact Fraction lane.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from . import kernels

__all__ = [
    "AffineBranch",
    "MoebiusBranch",
    "CustomBranch",
    "RegularCantorSet",
    "CylinderCover",
    "ThicknessEstimate",
    "DimensionEnclosure",
    "BoxDimEstimate",
    "GapLemmaCertificate",
    "IntervalCertificate",
    "LimitGeometryReport",
    "SweepReport",
    "middle_third",
    "two_affine",
    "full_interval",
    "translate",
    "cylinders",
    "thickness",
    "hausdorff_dim",
    "box_dim_estimate",
    "gap_lemma_test",
    "sumset_contains_interval",
    "limit_geometry",
    "stable_intersection_sweep",
]

_INF = math.inf


def _dn(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _fr_dn(f: Fraction) -> float:
    x = float(f)
    return x if Fraction(x) <= f else _dn(x)


def _fr_up(f: Fraction) -> float:
    x = float(f)
    return x if Fraction(x) >= f else _up(x)


def _pow_dn(x: float, s: float) -> float:
    # libm pow is a couple of ulps off at worst; four outward steps cover it
    r = math.pow(x, s)
    for _ in range(4):
        r = _dn(r)
    return max(r, 0.0)


def _pow_up(x: float, s: float) -> float:
    r = math.pow(x, s)
    for _ in range(4):
        r = _up(r)
    return r


def _imul(a_lo: float, a_hi: float, b_lo: float, b_hi: float) -> tuple[float, float]:
    corners = (a_lo * b_lo, a_lo * b_hi, a_hi * b_lo, a_hi * b_hi)
    return _dn(min(corners)), _up(max(corners))


def _iadd(a_lo: float, a_hi: float, b_lo: float, b_hi: float) -> tuple[float, float]:
    return _dn(a_lo + b_lo), _up(a_hi + b_hi)


# ---------------------------------------------------------------------------
# branch maps

@dataclass(frozen=True)
class AffineBranch:
    """x -> c0 + c1*x with 0 < |c1| < 1."""

    c0: Fraction
    c1: Fraction

    def __post_init__(self):
        if not 0 < abs(self.c1) < 1:
            raise ValueError("affine contraction must have 0 < |c1| < 1")


@dataclass(frozen=True)
class MoebiusBranch:
    """x -> 1/(a + x) for an integer digit a >= 1."""

    a: int

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("digit must be >= 1")


@dataclass(frozen=True)
class CustomBranch:
    """User-supplied contraction given by outward interval routines.

    ``image(lo, hi)`` returns an interval containing the true image of
    [lo, hi]; ``deriv(lo, hi)`` returns outward bounds on |psi'| there.
    Soundness of these routines is the caller's responsibility.
    """

    image: Callable[[float, float], tuple[float, float]]
    deriv: Callable[[float, float], tuple[float, float]]


Branch = Any


def _branch_deriv_range(branch: Branch, lo: float, hi: float) -> tuple[float, float]:
    """Outward bounds on |psi'| over [lo, hi]."""
    if isinstance(branch, AffineBranch):
        a = abs(branch.c1)
        return _fr_dn(a), _fr_up(a)
    if isinstance(branch, MoebiusBranch):
        t = _dn(branch.a + lo)
        dmax = _up(1.0 / _dn(t * t))
        u = _up(branch.a + hi)
        dmin = _dn(1.0 / _up(u * u))
        return dmin, dmax
    return branch.deriv(lo, hi)


# ---------------------------------------------------------------------------
# the set

@dataclass(eq=False)
class RegularCantorSet:
    """Markov family of contractions on a finite union of closed intervals.

    ``symbols[i]`` owns the interval ``root_brackets[i]`` (stored as
    outward lo/hi endpoint brackets) and the contraction ``branches[i]``
    mapping the relevant target intervals into it. ``transitions`` holds
    index pairs (i, j) meaning a cylinder starting with j may be extended
    on the left by i.
    """

    symbols: tuple
    branches: tuple
    root_brackets: tuple
    transitions: frozenset
    roots_exact: tuple | None = None
    tight_roots: bool = True
    label: str = ""

    def __post_init__(self):
        n = len(self.symbols)
        if not (len(self.branches) == len(self.root_brackets) == n):
            raise ValueError("parallel per-symbol tuples disagree in length")
        for i, j in self.transitions:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError("transition index out of range")
        self._targets = {i: sorted(j for a, j in self.transitions if a == i) for i in range(n)}

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def exact(self) -> bool:
        return self.roots_exact is not None and all(
            isinstance(b, AffineBranch) for b in self.branches
        )

    def targets(self, i: int) -> list[int]:
        return self._targets[i]

    def hull_bracket(self) -> tuple[float, float, float, float]:
        los = [rb[0] for rb in self.root_brackets]
        lhs = [rb[1] for rb in self.root_brackets]
        hls = [rb[2] for rb in self.root_brackets]
        his = [rb[3] for rb in self.root_brackets]
        k = int(np.argmin(los))
        m = int(np.argmax(his))
        return los[k], lhs[k], hls[m], his[m]

    def hull_exact(self) -> tuple[Fraction, Fraction] | None:
        if self.roots_exact is None:
            return None
        return min(e[0] for e in self.roots_exact), max(e[1] for e in self.roots_exact)


def _bracket_fraction(f: Fraction) -> tuple[float, float]:
    return _fr_dn(f), _fr_up(f)


def _affine_set(
    intervals: Sequence[tuple[Fraction, Fraction]],
    branches: Sequence[AffineBranch],
    transitions: frozenset,
    label: str,
) -> RegularCantorSet:
    brackets = []
    for lo, hi in intervals:
        a, b = _bracket_fraction(lo)
        c, d = _bracket_fraction(hi)
        brackets.append((a, b, c, d))
    return RegularCantorSet(
        symbols=tuple(range(len(intervals))),
        branches=tuple(branches),
        root_brackets=tuple(brackets),
        transitions=transitions,
        roots_exact=tuple((Fraction(lo), Fraction(hi)) for lo, hi in intervals),
        label=label,
    )


def two_affine(r_left, r_right, label: str = "") -> RegularCantorSet:
    """Two increasing affine contractions of [0,1] onto [0, r_left] and
    [1-r_right, 1]; a genuine Cantor set needs r_left + r_right < 1."""
    rl, rr = Fraction(r_left), Fraction(r_right)
    if not (0 < rl and 0 < rr and rl + rr <= 1):
        raise ValueError("need 0 < r_left, 0 < r_right, r_left + r_right <= 1")
    intervals = [(Fraction(0), rl), (1 - rr, Fraction(1))]
    branches = [AffineBranch(Fraction(0), rl), AffineBranch(1 - rr, rr)]
    trans = frozenset((i, j) for i in range(2) for j in range(2))
    return _affine_set(intervals, branches, trans, label or f"two-affine({rl},{rr})")


def middle_third() -> RegularCantorSet:
    return two_affine(Fraction(1, 3), Fraction(1, 3), label="middle-third")


def full_interval() -> RegularCantorSet:
    """[0,1] presented as a gapless two-branch system; thickness is infinite."""
    return two_affine(Fraction(1, 2), Fraction(1, 2), label="full-interval")


def translate(cs: RegularCantorSet, t) -> RegularCantorSet:
    """The set shifted by t. Affine data stays exact for rational t."""
    if cs.exact and isinstance(t, (int, Fraction)):
        tf = Fraction(t)
        intervals = [(lo + tf, hi + tf) for lo, hi in cs.roots_exact]
        branches = [AffineBranch(b.c0 + tf * (1 - b.c1), b.c1) for b in cs.branches]
        return _affine_set(intervals, branches, cs.transitions, f"{cs.label}+{tf}")
    tl, th = (_fr_dn(Fraction(t)), _fr_up(Fraction(t))) if isinstance(t, (int, Fraction)) else (t, t)
    new_brackets = tuple(
        (_dn(ll + tl), _up(lh + th), _dn(hl + tl), _up(hh + th))
        for ll, lh, hl, hh in cs.root_brackets
    )

    def shifted(branch):
        def image(lo, hi, _b=branch):
            a, b = _branch_image_bracket(_b, _dn(lo - th), _up(hi - tl))
            return _dn(a + tl), _up(b + th)

        def deriv(lo, hi, _b=branch):
            return _branch_deriv_range(_b, _dn(lo - th), _up(hi - tl))

        return CustomBranch(image, deriv)

    return RegularCantorSet(
        symbols=cs.symbols,
        branches=tuple(shifted(b) for b in cs.branches),
        root_brackets=new_brackets,
        transitions=cs.transitions,
        roots_exact=None,
        tight_roots=cs.tight_roots,
        label=f"{cs.label}+{float(t):g}",
    )


def _branch_image_bracket(branch: Branch, lo: float, hi: float) -> tuple[float, float]:
    """Outer image of [lo, hi] under the branch map."""
    if isinstance(branch, AffineBranch):
        c0l, c0h = _bracket_fraction(branch.c0)
        c1l, c1h = _bracket_fraction(branch.c1)
        pl, ph = _imul(c1l, c1h, lo, hi)
        return _dn(c0l + pl), _up(c0h + ph)
    if isinstance(branch, MoebiusBranch):
        return _dn(1.0 / _up(branch.a + hi)), _up(1.0 / _dn(branch.a + lo))
    return branch.image(lo, hi)


# ---------------------------------------------------------------------------
# cylinder covers (array lane, left extension)

@dataclass(eq=False)
class CylinderCover:
    """Flat arrays of depth-n cylinder data.

    Endpoint brackets bound the true cylinder endpoints; d_lo/d_hi bound
    the derivative of the writing map over its domain.
    """

    cset: RegularCantorSet
    depth: int
    states: np.ndarray
    lo_lo: np.ndarray
    lo_hi: np.ndarray
    hi_lo: np.ndarray
    hi_hi: np.ndarray
    d_lo: np.ndarray
    d_hi: np.ndarray
    words: list | None = None

    def __len__(self) -> int:
        return len(self.states)

    def lengths_upper(self) -> np.ndarray:
        return np.nextafter(self.hi_hi - self.lo_lo, np.inf)

    def max_length_upper(self) -> float:
        return float(self.lengths_upper().max()) if len(self) else 0.0

    def sorted_by_position(self) -> "CylinderCover":
        order = np.argsort(self.lo_lo, kind="stable")
        words = [self.words[i] for i in order] if self.words is not None else None
        return CylinderCover(
            self.cset, self.depth, self.states[order],
            self.lo_lo[order], self.lo_hi[order], self.hi_lo[order], self.hi_hi[order],
            self.d_lo[order], self.d_hi[order], words,
        )


def cylinders(cs: RegularCantorSet, depth: int, keep_words: bool | None = None) -> CylinderCover:
    """All depth-n cylinders (words of n symbols), built by extending words
    on the left one symbol at a time."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    m = cs.n
    states = np.arange(m, dtype=np.int64)
    lo_lo = np.array([rb[0] for rb in cs.root_brackets])
    lo_hi = np.array([rb[1] for rb in cs.root_brackets])
    hi_lo = np.array([rb[2] for rb in cs.root_brackets])
    hi_hi = np.array([rb[3] for rb in cs.root_brackets])
    d_lo = np.ones(m)
    d_hi = np.ones(m)
    words: list | None = [(i,) for i in range(m)]

    for _ in range(depth - 1):
        parts = []
        new_words: list = []
        for a in range(m):
            tg = cs.targets(a)
            if not tg:
                continue
            mask = np.isin(states, tg)
            if not mask.any():
                continue
            sel = np.nonzero(mask)[0]
            br = cs.branches[a]
            if isinstance(br, AffineBranch):
                c0l, c0h = _bracket_fraction(br.c0)
                c1l, c1h = _bracket_fraction(br.c1)
                out = kernels.expand_affine(
                    lo_lo[sel], lo_hi[sel], hi_lo[sel], hi_hi[sel], d_lo[sel], d_hi[sel],
                    c0l, c0h, c1l, c1h,
                )
            elif isinstance(br, MoebiusBranch):
                out = kernels.expand_moebius(
                    lo_lo[sel], lo_hi[sel], hi_lo[sel], hi_hi[sel], d_lo[sel], d_hi[sel],
                    float(br.a),
                )
            else:
                out = _expand_custom(br, lo_lo[sel], lo_hi[sel], hi_lo[sel], hi_hi[sel],
                                     d_lo[sel], d_hi[sel])
            parts.append((a, sel, out))
            if words is not None:
                new_words.extend((a,) + words[i] for i in sel)
        if not parts:
            raise ValueError("subshift died out; no cylinders at requested depth")
        states = np.concatenate([np.full(len(sel), a, dtype=np.int64) for a, sel, _ in parts])
        lo_lo = np.concatenate([o[0] for _, _, o in parts])
        lo_hi = np.concatenate([o[1] for _, _, o in parts])
        hi_lo = np.concatenate([o[2] for _, _, o in parts])
        hi_hi = np.concatenate([o[3] for _, _, o in parts])
        d_lo = np.concatenate([o[4] for _, _, o in parts])
        d_hi = np.concatenate([o[5] for _, _, o in parts])
        if keep_words is False or (keep_words is None and len(states) > 300_000):
            words = None
        if words is not None:
            words = new_words

    if keep_words is False:
        words = None
    return CylinderCover(cs, depth, states, lo_lo, lo_hi, hi_lo, hi_hi, d_lo, d_hi, words)


def _expand_custom(br: CustomBranch, lo_lo, lo_hi, hi_lo, hi_hi, d_lo, d_hi):
    n = len(lo_lo)
    out = tuple(np.empty(n) for _ in range(6))
    for i in range(n):
        a, b = br.image(lo_lo[i], hi_hi[i])
        dmin, dmax = br.deriv(lo_lo[i], hi_hi[i])
        # custom images carry no endpoint identification; keep outer box only
        out[0][i], out[1][i] = a, b
        out[2][i], out[3][i] = a, b
        out[4][i] = _dn(d_lo[i] * dmin)
        out[5][i] = _up(d_hi[i] * dmax)
    return out


# ---------------------------------------------------------------------------
# refinable cylinder nodes (object lane, right extension)

class _FloatLane:
    exact = False
    zero = 0.0

    @staticmethod
    def sub_dn(a, b):
        return _dn(a - b)

    @staticmethod
    def sub_up(a, b):
        return _up(a - b)

    @staticmethod
    def div_dn(a, b):
        if a == _INF:
            return _INF
        return _dn(a / b)

    @staticmethod
    def mul_dn(a, b):
        if a == _INF or b == _INF:
            return _INF
        return _dn(a * b)

    @staticmethod
    def add_dn(a, b):
        return _dn(a + b)

    @staticmethod
    def add_up(a, b):
        return _up(a + b)


class _ExactLane:
    exact = True
    zero = Fraction(0)

    @staticmethod
    def sub_dn(a, b):
        return a - b

    @staticmethod
    def sub_up(a, b):
        return a - b

    @staticmethod
    def div_dn(a, b):
        if a == _INF:
            return _INF
        return a / b

    @staticmethod
    def mul_dn(a, b):
        if a == _INF or b == _INF:
            return _INF
        return a * b

    @staticmethod
    def add_dn(a, b):
        return a + b

    @staticmethod
    def add_up(a, b):
        return a + b


@dataclass(eq=False)
class _CylNode:
    """One cylinder in the right-extension tree.

    In the exact lane all four endpoint slots hold Fractions with
    lo_lo == lo_hi and hi_lo == hi_hi; in the float lane they are outward
    endpoint brackets. ``comp`` is the writing map composed so far:
    ("ae", A, B) exact affine, ("af", A_lo, A_hi, B_lo, B_hi) float affine,
    ("mo", p, q, r, s) an exact integer Moebius matrix, or None when the
    node cannot be refined further.
    """

    word: tuple
    lo_lo: Any
    lo_hi: Any
    hi_lo: Any
    hi_hi: Any
    comp: tuple | None

    def len_up(self, lane) -> Any:
        return lane.sub_up(self.hi_hi, self.lo_lo)


def _root_nodes(cs: RegularCantorSet, lane) -> list[_CylNode]:
    nodes = []
    for i in range(cs.n):
        br = cs.branches[i]
        if lane.exact:
            lo, hi = cs.roots_exact[i]
            comp = ("ae", Fraction(0), Fraction(1))
            nodes.append(_CylNode((i,), lo, lo, hi, hi, comp))
            continue
        ll, lh, hl, hh = cs.root_brackets[i]
        if isinstance(br, MoebiusBranch):
            comp: tuple | None = ("mo", 1, 0, 0, 1)
        elif isinstance(br, AffineBranch):
            comp = ("af", 0.0, 0.0, 1.0, 1.0)
        else:
            comp = ("cu",)
        nodes.append(_CylNode((i,), ll, lh, hl, hh, comp))
    return sorted(nodes, key=lambda n: float(n.lo_lo))


def _compose(cs: RegularCantorSet, comp: tuple | None, last: int) -> tuple | None:
    """Extend the writing map by the branch owned by ``last`` on the inside."""
    if comp is None:
        return None
    br = cs.branches[last]
    kind = comp[0]
    if kind == "ae":
        if not isinstance(br, AffineBranch):
            return None
        _, A, B = comp
        return ("ae", A + B * br.c0, B * br.c1)
    if kind == "af":
        if not isinstance(br, AffineBranch):
            return None
        _, al, ah, bl, bh = comp
        c0l, c0h = _bracket_fraction(br.c0)
        c1l, c1h = _bracket_fraction(br.c1)
        pl, ph = _imul(bl, bh, c0l, c0h)
        nal, nah = _iadd(al, ah, pl, ph)
        nbl, nbh = _imul(bl, bh, c1l, c1h)
        return ("af", nal, nah, nbl, nbh)
    if kind == "mo":
        if not isinstance(br, MoebiusBranch):
            return None
        _, p, q, r, s = comp
        return ("mo", q, p + q * br.a, s, r + s * br.a)
    return None


def _node_children(cs: RegularCantorSet, node: _CylNode, lane) -> list[_CylNode]:
    """Subdivide a cylinder one level; empty when the map is not refinable."""
    last = node.word[-1]
    comp = _compose(cs, node.comp, last)
    kids: list[_CylNode] = []
    for b in cs.targets(last):
        word = node.word + (b,)
        if lane.exact:
            _, A, B = comp
            e_lo, e_hi = cs.roots_exact[b]
            v0, v1 = A + B * e_lo, A + B * e_hi
            if v0 > v1:
                v0, v1 = v1, v0
            kids.append(_CylNode(word, v0, v0, v1, v1, comp))
            continue
        if comp is None:
            if node.comp == ("cu",) and len(node.word) == 1:
                ll, lh, hl, hh = cs.root_brackets[b]
                a, c = cs.branches[last].image(ll, hh)
                kids.append(_CylNode(word, a, c, a, c, None))
                continue
            return []
        ll, lh, hl, hh = cs.root_brackets[b]
        kind = comp[0]
        if kind == "af":
            _, al, ah, bl, bh = comp
            p_ll, p_lh = _iadd(al, ah, *_imul(bl, bh, ll, lh))
            p_hl, p_hh = _iadd(al, ah, *_imul(bl, bh, hl, hh))
            if bl > 0:
                kids.append(_CylNode(word, p_ll, p_lh, p_hl, p_hh, comp))
            else:
                kids.append(_CylNode(word, p_hl, p_hh, p_ll, p_lh, comp))
        elif kind == "mo":
            _, p, q, r, s = comp
            det = p * s - q * r

            def ev(x: float) -> Fraction:
                fx = Fraction(x)
                return (p * fx + q) / (r * fx + s)

            if det > 0:
                kids.append(_CylNode(word, _fr_dn(ev(ll)), _fr_up(ev(lh)),
                                     _fr_dn(ev(hl)), _fr_up(ev(hh)), comp))
            else:
                kids.append(_CylNode(word, _fr_dn(ev(hh)), _fr_up(ev(hl)),
                                     _fr_dn(ev(lh)), _fr_up(ev(ll)), comp))
        else:
            return []
    return sorted(kids, key=lambda n: float(n.lo_lo))


def _expand_levels(cs: RegularCantorSet, nodes: list[_CylNode], levels: int, lane) -> list[_CylNode]:
    for _ in range(levels):
        nxt: list[_CylNode] = []
        for nd in nodes:
            kids = _node_children(cs, nd, lane)
            nxt.extend(kids if kids else [nd])
        nodes = nxt
    return sorted(nodes, key=lambda n: float(n.lo_lo))


# ---------------------------------------------------------------------------
# thickness

@dataclass(frozen=True)
class ThicknessEstimate:
    """Certified lower bound for the gap-and-bridge ratio of the gaps
    visible at the stated depth."""

    lower: float
    depth: int
    gap_count: int
    rigorous: bool
    exact: Fraction | None = None
    infinite: bool = False
    note: str = ""


def _mirror(node: _CylNode) -> _CylNode:
    return _CylNode(node.word, -node.hi_hi, -node.hi_lo, -node.lo_hi, -node.lo_lo,
                    ("mir",) + (node.comp or ()))


def _scan_children(cs, node, lane):
    if node.comp and node.comp[0] == "mir":
        inner = _CylNode(node.word, -node.hi_hi, -node.hi_lo, -node.lo_hi, -node.lo_lo,
                         node.comp[1:] or None)
        return [_mirror(k) for k in reversed(_node_children(cs, inner, lane))]
    return _node_children(cs, node, lane)


def _walk_side(cs, nodes: list[_CylNode], u_lo, start_edge_hi, refine_cap: int, lane):
    """Certified lower bound of the bridge extending rightward from a gap
    of certified size >= u_lo, starting at outer coordinate start_edge_hi."""
    stack = [(n, 0) for n in reversed(nodes)]
    far_lo = None
    far_hi = None
    while stack:
        node, rel = stack.pop()
        if far_lo is not None:
            g_hi = lane.sub_up(node.lo_hi, far_lo)
            if g_hi >= u_lo:
                break
        if node.len_up(lane) < u_lo:
            far_lo, far_hi = node.hi_lo, node.hi_hi
            continue
        if rel >= refine_cap:
            break
        kids = _scan_children(cs, node, lane)
        if not kids:
            break
        stack.extend((k, rel + 1) for k in reversed(kids))
    if far_lo is None:
        return lane.zero
    length = lane.sub_dn(far_lo, start_edge_hi)
    return max(length, lane.zero)


def _thickness_core(cs, nodes: list[_CylNode], refine_cap: int, lane):
    """(tau lower bound, number of certified visible gaps) over the given
    sorted node list."""
    gaps = []
    for i in range(len(nodes) - 1):
        g_lo = lane.sub_dn(nodes[i + 1].lo_lo, nodes[i].hi_hi)
        g_hi = lane.sub_up(nodes[i + 1].lo_hi, nodes[i].hi_lo)
        if g_lo > 0:
            gaps.append((i, g_lo, g_hi))
    if not gaps:
        return _INF, 0
    tau = _INF
    for i, g_lo, g_hi in gaps:
        right = _walk_side(cs, nodes[i + 1:], g_lo, nodes[i + 1].lo_hi, refine_cap, lane)
        mirrored = [_mirror(n) for n in reversed(nodes[: i + 1])]
        left = _walk_side(cs, mirrored, g_lo, -nodes[i].hi_lo, refine_cap, lane)
        ratio = lane.div_dn(min(left, right), g_hi)
        tau = min(tau, ratio)
    return tau, len(gaps)


def thickness(cs: RegularCantorSet, depth: int = 8, refine_cap: int = 16) -> ThicknessEstimate:
    """Lower-bound the thickness ledger over the gaps visible at ``depth``.

    Bridges walk outward from each gap, crossing a neighbor only when it is
    certified smaller than the gap, descending into it otherwise; a bridge
    that cannot be certified further is truncated, which only lowers the
    reported value.
    """
    lane = _ExactLane if cs.exact else _FloatLane
    nodes = _expand_levels(cs, _root_nodes(cs, lane), depth - 1, lane)
    hull_lo, _, _, hull_hi = cs.hull_bracket()
    if not hull_lo < hull_hi:
        return ThicknessEstimate(0.0, depth, 0, True, note="degenerate hull")
    tau, gap_count = _thickness_core(cs, nodes, refine_cap, lane)
    if gap_count == 0:
        _, lo_hi, hi_lo, _ = cs.hull_bracket()
        if not _dn(hi_lo - lo_hi) > 0:
            return ThicknessEstimate(0.0, depth, 0, True,
                                     note="hull width not certified positive")
        return ThicknessEstimate(_INF, depth, 0, True, infinite=True,
                                 note="no gap certified at this depth")
    exact = tau if (lane.exact and tau != _INF) else None
    return ThicknessEstimate(float(tau), depth, gap_count, True, exact=exact)


# ---------------------------------------------------------------------------
# Hausdorff dimension by certified transfer-operator bracketing

@dataclass(frozen=True)
class DimensionEnclosure:
    lo: float
    hi: float
    depth: int
    converged: bool
    rigorous: bool = True

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _weight_table(cs: RegularCantorSet, depth: int):
    """Transition structure on depth-n words with outward |psi'| ranges
    taken over the target word's hull."""
    cover = cylinders(cs, depth, keep_words=True)
    if cover.words is None:
        raise ValueError("dimension table needs materialized words")
    index = {w: i for i, w in enumerate(cover.words)}
    rows, cols, dmins, dmaxs = [], [], [], []
    for j, w in enumerate(cover.words):
        hull_lo = float(cover.lo_lo[j])
        hull_hi = float(cover.hi_hi[j])
        for a in range(cs.n):
            if (a, w[0]) not in cs.transitions:
                continue
            src = (a,) + w[:-1]
            i = index.get(src)
            if i is None:
                continue
            dmin, dmax = _branch_deriv_range(cs.branches[a], hull_lo, hull_hi)
            rows.append(i)
            cols.append(j)
            dmins.append(dmin)
            dmaxs.append(dmax)
    n = len(cover.words)
    return n, np.array(rows), np.array(cols), np.array(dmins), np.array(dmaxs)


def _certify_side(table, s: float, perron_tol: float) -> int:
    """+1 when s is certified <= dim, -1 when certified >= dim, else 0."""
    from scipy import sparse

    from ._perron import ConvergenceError, perron_enclosure

    n, rows, cols, dmins, dmaxs = table
    lo_data = np.array([_pow_dn(x, s) for x in dmins])
    hi_data = np.array([_pow_up(x, s) for x in dmaxs])
    try:
        m_lo = sparse.csr_matrix((lo_data, (rows, cols)), shape=(n, n))
        p_lo, _ = perron_enclosure(m_lo, perron_tol)
        if p_lo >= 1.0:
            return 1
        m_hi = sparse.csr_matrix((hi_data, (rows, cols)), shape=(n, n))
        _, p_hi = perron_enclosure(m_hi, perron_tol)
        if p_hi <= 1.0:
            return -1
    except ConvergenceError:
        pass
    return 0


def hausdorff_dim(cs: RegularCantorSet, tol: float = 1e-6, max_depth: int = 16,
                  perron_tol: float = 1e-11) -> DimensionEnclosure:
    """Certified enclosure of the Hausdorff dimension.

    Bisection on s: the spectral radius of the inf-weight transfer matrix
    staying >= 1 certifies s from below, the sup-weight radius <= 1 from
    above. When neither certifies, the word depth escalates and tightens
    both matrices toward the true pressure.
    """
    lo, hi = 0.0, 1.0
    depth = 1
    while depth <= max_depth:
        table = _weight_table(cs, depth)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            side = _certify_side(table, mid, perron_tol)
            if side > 0:
                lo = mid
            elif side < 0:
                hi = mid
            else:
                break
        if hi - lo <= tol:
            return DimensionEnclosure(lo, hi, depth, True)
        depth = depth + 1 if depth < 2 else depth + 2
    return DimensionEnclosure(lo, hi, depth - 2 if depth > 2 else 1, False)


# ---------------------------------------------------------------------------
# box-counting estimate (deliberately nonrigorous)

@dataclass(frozen=True)
class BoxDimEstimate:
    slope: float
    depths: tuple
    eps: tuple
    counts: tuple
    rigorous: bool = False


def _merged_atoms(cover: CylinderCover) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(cover.lo_lo, kind="stable")
    l = cover.lo_lo[order]
    r = cover.hi_hi[order]
    running = np.maximum.accumulate(r)
    new_group = np.empty(len(l), dtype=bool)
    new_group[0] = True
    new_group[1:] = l[1:] > running[:-1]
    starts = np.nonzero(new_group)[0]
    merged_l = l[starts]
    merged_r = np.maximum.reduceat(r, starts)
    return merged_l, merged_r


def _cover_count(l: np.ndarray, r: np.ndarray, eps: float) -> int:
    count = 0
    i = 0
    n = len(l)
    while i < n:
        count += 1
        limit = _up(l[i] + eps)
        j = int(np.searchsorted(r, limit, side="right"))
        i = max(i + 1, j)
    return count


def box_dim_estimate(cs: RegularCantorSet, depths: range) -> BoxDimEstimate:
    """Least-squares box-counting slope; scales are the maximal cylinder
    lengths at each depth, counts come from greedy minimal covers of a
    deeper reference cover."""
    if len(depths) < 2:
        raise ValueError("need at least two depths")
    deep = cylinders(cs, depths.stop + 3, keep_words=False)
    l, r = _merged_atoms(deep)
    eps_list, counts = [], []
    for d in depths:
        eps = cylinders(cs, d, keep_words=False).max_length_upper()
        eps_list.append(eps)
        counts.append(_cover_count(l, r, eps))
    x = np.log(1.0 / np.array(eps_list))
    y = np.log(np.array(counts, dtype=float))
    slope = float(np.polyfit(x, y, 1)[0])
    return BoxDimEstimate(slope, tuple(depths), tuple(eps_list), tuple(counts))


# ---------------------------------------------------------------------------
# gap lemma

@dataclass(frozen=True)
class GapLemmaCertificate:
    status: str
    tau_left: float
    tau_right: float
    product: float
    linked: bool
    depth: int
    rigorous: bool = True
    detail: str = ""


def _hull_not_in_any_gap(hull, cover: CylinderCover) -> bool:
    """Certify the hull (bracket 4-tuple) is not contained in any gap of
    the covered set: refute containment in each visible gap and rule out
    invisible gaps by a diameter comparison."""
    h_lo_lo, h_lo_hi, h_hi_lo, h_hi_hi = hull
    width_lo = _dn(h_hi_lo - h_lo_hi)
    if not width_lo > cover.max_length_upper():
        return False
    for i in range(len(cover) - 1):
        gap_plus = _up(cover.lo_hi[i + 1] - cover.hi_lo[i])
        if gap_plus <= 0:
            continue
        refuted = h_lo_hi < cover.hi_lo[i] or h_hi_lo > cover.lo_hi[i + 1]
        if not refuted:
            return False
    return True


def gap_lemma_test(a: RegularCantorSet, b: RegularCantorSet, depth: int = 6) -> GapLemmaCertificate:
    """Certified-intersection test: thickness product strictly above one
    plus linked hulls guarantee the two sets meet."""
    ta = thickness(a, depth)
    tb = thickness(b, depth)
    if ta.exact is not None and tb.exact is not None:
        product_ok = ta.exact * tb.exact > 1
        product = float(ta.exact * tb.exact)
    else:
        raw = ta.lower * tb.lower
        if math.isnan(raw):
            product, product_ok = 0.0, False
        elif math.isinf(raw):
            product, product_ok = _INF, True
        else:
            product = _dn(raw)
            product_ok = product > 1.0
    ha = a.hull_bracket()
    hb = b.hull_bracket()
    overlap = max(ha[1], hb[1]) < min(ha[2], hb[2])
    cov_a = cylinders(a, depth).sorted_by_position()
    cov_b = cylinders(b, depth).sorted_by_position()
    linked = overlap and _hull_not_in_any_gap(ha, cov_b) and _hull_not_in_any_gap(hb, cov_a)
    status = "certified" if (product_ok and linked) else "inconclusive"
    detail = "" if status == "certified" else (
        "thickness product not strictly above one" if not product_ok else "linking not certified"
    )
    return GapLemmaCertificate(status, ta.lower, tb.lower, product, linked, depth, detail=detail)


# ---------------------------------------------------------------------------
# certified sumset interval containment

@dataclass(frozen=True)
class IntervalCertificate:
    status: str
    target: tuple
    witness: float | None
    tree: dict | None
    nodes: int
    max_depth_used: int
    rigorous: bool = True


class _SumProver:
    """Recursive certificate builder for [lo, hi] subset of K1 + K2.

    A target closes at a pair of subtree nodes when the thickness product
    of the subtrees reaches one and anchor points p1 in K1, q2 in K2 keep
    every x in the target linked with both sets; otherwise the target is
    split, or covered by children sum windows and recursed.
    """

    def __init__(self, a: RegularCantorSet, b: RegularCantorSet, depth_cap: int,
                 tau_depth: int, endpoint_depth: int, split_cap: int, node_cap: int):
        if not (a.tight_roots and b.tight_roots):
            raise ValueError("sumset certificates need tight root brackets")
        self.a, self.b = a, b
        self.depth_cap = depth_cap
        self.tau_depth = tau_depth
        self.endpoint_depth = endpoint_depth
        self.split_cap = split_cap
        self.node_cap = node_cap
        self.exact = a.exact and b.exact
        self.lane = _ExactLane if self.exact else _FloatLane
        self.nodes = 0
        self.max_depth_used = 0
        self._tau_cache: dict[tuple[int, tuple], object] = {}
        self._end_cache: dict[tuple[int, tuple], list] = {}
        self._child_cache: dict[tuple[int, tuple], list] = {}

    def _set(self, which: int) -> RegularCantorSet:
        return self.a if which == 0 else self.b

    def _top_nodes(self, which: int) -> list[_CylNode]:
        return _root_nodes(self._set(which), self.lane)

    def _children(self, which: int, node: _CylNode | None) -> list[_CylNode]:
        key = (which, () if node is None else node.word)
        got = self._child_cache.get(key)
        if got is None:
            if node is None:
                got = self._top_nodes(which)
            else:
                got = _node_children(self._set(which), node, self.lane)
            self._child_cache[key] = got
        return got

    def _hull(self, which: int, node: _CylNode | None):
        if node is not None:
            return node.lo_lo, node.lo_hi, node.hi_lo, node.hi_hi
        kids = self._top_nodes(which)
        return kids[0].lo_lo, kids[0].lo_hi, kids[-1].hi_lo, kids[-1].hi_hi

    def _tau(self, which: int, node: _CylNode | None):
        key = (which, () if node is None else node.word)
        got = self._tau_cache.get(key)
        if got is None:
            base = self._top_nodes(which) if node is None else [node]
            leaves = _expand_levels(self._set(which), base, self.tau_depth, self.lane)
            got, _ = _thickness_core(self._set(which), leaves, 8, self.lane)
            self._tau_cache[key] = got
        return got

    def _product_ok(self, u, v) -> bool:
        tau_u = self._tau(0, u)
        tau_v = self._tau(1, v)
        if tau_u == _INF:
            return tau_v > 0
        if tau_v == _INF:
            return tau_u > 0
        if self.exact:
            return tau_u * tau_v >= 1
        return _dn(float(tau_u) * float(tau_v)) >= 1.0

    def _endpoints(self, which: int, node: _CylNode | None) -> list:
        """Brackets of set points: cylinder endpoints a few levels down."""
        key = (which, () if node is None else node.word)
        got = self._end_cache.get(key)
        if got is None:
            base = self._top_nodes(which) if node is None else [node]
            leaves = _expand_levels(self._set(which), base, self.endpoint_depth, self.lane)
            got = []
            for lf in leaves:
                got.append((lf.lo_lo, lf.lo_hi))
                got.append((lf.hi_lo, lf.hi_hi))
            self._end_cache[key] = got
        return got

    def _word_len(self, node: _CylNode | None) -> int:
        return 0 if node is None else len(node.word)

    def _gap_rule(self, t_lo, t_hi, u, v):
        if not self._product_ok(u, v):
            return None
        tau_u = self._tau(0, u)
        tau_v = self._tau(1, v)
        a_lo_lo, a_lo_hi, b_hi_lo, b_hi_hi = self._hull(0, u)
        c_lo_lo, c_lo_hi, d_hi_lo, d_hi_hi = self._hull(1, v)
        lane = self.lane
        p1 = None
        for e_lo, e_hi in self._endpoints(0, u):
            if t_lo >= lane.add_up(e_hi, c_lo_hi) and t_hi <= lane.add_dn(e_lo, d_hi_lo):
                p1 = (e_lo, e_hi)
                break
        if p1 is None:
            return None
        q2 = None
        for e_lo, e_hi in self._endpoints(1, v):
            if t_lo >= lane.add_up(a_lo_hi, e_hi) and t_hi <= lane.add_dn(b_hi_lo, e_lo):
                q2 = (e_lo, e_hi)
                break
        if q2 is None:
            return None
        return {
            "rule": "gap",
            "target": [float(t_lo), float(t_hi)],
            "pair": [self._word(u), self._word(v)],
            "p1": [float(p1[0]), float(p1[1])],
            "q2": [float(q2[0]), float(q2[1])],
            "tau_product": float(tau_u) * float(tau_v)
            if tau_u != _INF and tau_v != _INF else None,
        }

    @staticmethod
    def _word(node: _CylNode | None) -> list:
        return [] if node is None else list(node.word)

    def _prove(self, t_lo, t_hi, u, v, split_budget: int):
        self.nodes += 1
        if self.nodes > self.node_cap:
            return None, None
        self.max_depth_used = max(self.max_depth_used,
                                  self._word_len(u), self._word_len(v))
        leaf = self._gap_rule(t_lo, t_hi, u, v)
        if leaf is not None:
            return leaf, None
        # splitting only narrows the anchor conditions of the gap rule, so
        # it is pointless when the thickness product already fails
        if split_budget > 0 and self._product_ok(u, v):
            mid = (t_lo + t_hi) / 2
            left, w = self._prove(t_lo, mid, u, v, split_budget - 1)
            if left is not None:
                right, w = self._prove(mid, t_hi, u, v, split_budget - 1)
                if right is not None:
                    return {
                        "rule": "split",
                        "target": [float(t_lo), float(t_hi)],
                        "pair": [self._word(u), self._word(v)],
                        "children": [left, right],
                    }, None
        if max(self._word_len(u), self._word_len(v)) < self.depth_cap:
            return self._cover_rule(t_lo, t_hi, u, v)
        return None, float((t_lo + t_hi) / 2)

    def _cover_rule(self, t_lo, t_hi, u, v):
        lane = self.lane
        windows = []
        for uc in self._children(0, u):
            for vc in self._children(1, v):
                w_lo = lane.add_up(uc.lo_hi, vc.lo_hi)
                w_hi = lane.add_dn(uc.hi_lo, vc.hi_lo)
                if w_lo < w_hi:
                    windows.append((w_lo, w_hi, uc, vc))
        windows.sort(key=lambda t: (float(t[0]), -float(t[1])))
        pieces = []
        pos = t_lo
        guard = 0
        while pos < t_hi:
            guard += 1
            if guard > 4 * len(windows) + 8:
                return None, float(pos)
            best = None
            for w_lo, w_hi, uc, vc in windows:
                if w_lo <= pos and w_hi > pos:
                    if best is None or w_hi > best[1]:
                        best = (w_lo, w_hi, uc, vc)
            if best is None:
                return None, float(pos)
            piece_hi = best[1] if best[1] < t_hi else t_hi
            pieces.append((pos, piece_hi, best[2], best[3]))
            pos = piece_hi
        children = []
        for p_lo, p_hi, uc, vc in pieces:
            sub, w = self._prove(p_lo, p_hi, uc, vc, self.split_cap)
            if sub is None:
                return None, w if w is not None else float((p_lo + p_hi) / 2)
            children.append(sub)
        return {
            "rule": "cover",
            "target": [float(t_lo), float(t_hi)],
            "pair": [self._word(u), self._word(v)],
            "children": children,
        }, None


def sumset_contains_interval(a: RegularCantorSet, b: RegularCantorSet,
                             target: tuple[float, float], depth_cap: int = 14,
                             tau_depth: int = 4, endpoint_depth: int = 3,
                             split_cap: int = 6,
                             node_cap: int = 200_000) -> IntervalCertificate:
    """Certify that every point of [target] is a sum of one point from
    each set, returning a machine-checkable proof tree on success."""
    t_lo_f, t_hi_f = float(target[0]), float(target[1])
    if not t_lo_f < t_hi_f:
        raise ValueError("target must be a nondegenerate interval")
    prover = _SumProver(a, b, depth_cap, tau_depth, endpoint_depth, split_cap, node_cap)
    if prover.exact:
        t_lo, t_hi = Fraction(t_lo_f), Fraction(t_hi_f)
    else:
        t_lo, t_hi = t_lo_f, t_hi_f
    tree, witness = prover._prove(t_lo, t_hi, None, None, split_cap)
    status = "certified" if tree is not None else "failed"
    return IntervalCertificate(status, (t_lo_f, t_hi_f), witness, tree,
                               prover.nodes, prover.max_depth_used)


# ---------------------------------------------------------------------------
# limit geometry along a left-infinite periodic tail

@dataclass(frozen=True)
class LimitGeometryReport:
    n_values: tuple
    sup_diffs: tuple
    ratios: tuple
    grid_size: int
    log_deriv_spread: tuple
    exact_zero: bool
    rigorous: bool = False


def _tail_window(tail: tuple[int, ...], n: int) -> tuple[int, ...]:
    L = len(tail)
    return tuple(tail[(L - 1 - (n - i)) % L] for i in range(n + 1))


def limit_geometry(cs: RegularCantorSet, tail, n_range: range = range(2, 11),
                   grid: int = 33) -> LimitGeometryReport:
    """Track the renormalized inverse-branch compositions along a periodic
    left tail: each composition is rescaled back onto the base interval of
    the tail's last symbol and compared with its successor.

    Affine sets renormalize to the identity at every stage, so successive
    differences vanish exactly; nonlinear sets contract at the derivative
    rate of the tail map.
    """
    tail = tuple(int(s) for s in tail)
    if not tail:
        raise ValueError("tail must be nonempty")
    for s in tail:
        if not 0 <= s < cs.n:
            raise ValueError("tail symbol out of range")
    L = len(tail)
    for i in range(L):
        if (tail[i], tail[(i + 1) % L]) not in cs.transitions:
            raise ValueError("tail is not an admissible periodic word")
    theta0 = tail[-1]
    exact = cs.exact
    n_max = max(n_range) + 1
    windows = {n: _tail_window(tail, n) for n in list(n_range) + [n_max]}

    if exact:
        lo0, hi0 = cs.roots_exact[theta0]
        span = hi0 - lo0
        xs = [lo0 + Fraction(j, grid - 1) * span for j in range(grid)]

        def renormalized(n):
            w = windows[n]
            a_aff, b_aff = Fraction(0), Fraction(1)
            for s in reversed(w[:-1]):
                br = cs.branches[s]
                a_aff, b_aff = br.c0 + br.c1 * a_aff, br.c1 * b_aff
            img_a = a_aff + b_aff * lo0
            img_b = a_aff + b_aff * hi0
            img_lo, img_hi = (img_a, img_b) if img_a <= img_b else (img_b, img_a)
            scale = span / (img_hi - img_lo)
            if b_aff > 0:
                return [lo0 + (a_aff + b_aff * x - img_lo) * scale for x in xs], abs(b_aff * scale)
            return [lo0 + (img_hi - a_aff - b_aff * x) * scale for x in xs], abs(b_aff * scale)

        vals = {n: renormalized(n) for n in windows}
        diffs, spreads = [], []
        for n in n_range:
            cur, slope_cur = vals[n]
            nxt, _ = vals[n + 1]
            diffs.append(max(abs(c - x) for c, x in zip(cur, nxt)))
            spreads.append(0.0)
        exact_zero = all(d == 0 for d in diffs)
        sup_diffs = tuple(float(d) for d in diffs)
    else:
        h_lo_lo, _, _, h_hi_hi = cs.root_brackets[theta0]
        lo0, hi0 = h_lo_lo, h_hi_hi
        xs = np.linspace(lo0, hi0, grid)

        def apply_chain(w, pts):
            ys = np.array(pts, dtype=float)
            dys = np.ones_like(ys)
            for s in reversed(w[:-1]):
                br = cs.branches[s]
                if isinstance(br, AffineBranch):
                    c0, c1 = float(br.c0), float(br.c1)
                    dys = dys * c1
                    ys = c0 + c1 * ys
                elif isinstance(br, MoebiusBranch):
                    t = br.a + ys
                    dys = dys * (-1.0 / (t * t))
                    ys = 1.0 / t
                else:
                    raise ValueError("custom branches are not supported here")
            return ys, dys

        def renormalized(n):
            w = windows[n]
            ys, dys = apply_chain(w, xs)
            img_lo, img_hi = float(np.min(ys)), float(np.max(ys))
            scale = (hi0 - lo0) / (img_hi - img_lo)
            orient = 1.0 if ys[-1] >= ys[0] else -1.0
            if orient > 0:
                out = lo0 + (ys - img_lo) * scale
            else:
                out = lo0 + (img_hi - ys) * scale
            return out, np.abs(dys) * scale

        vals = {n: renormalized(n) for n in windows}
        diffs, spreads = [], []
        for n in n_range:
            cur, dcur = vals[n]
            nxt, _ = vals[n + 1]
            diffs.append(float(np.max(np.abs(cur - nxt))))
            logs = np.log(dcur)
            spreads.append(float(np.max(logs) - np.min(logs)))
        exact_zero = False
        sup_diffs = tuple(diffs)

    ratios = []
    for i in range(len(sup_diffs) - 1):
        if sup_diffs[i] > 0:
            ratios.append(sup_diffs[i + 1] / sup_diffs[i])
    return LimitGeometryReport(tuple(n_range), sup_diffs, tuple(ratios), grid,
                               tuple(spreads), exact_zero)


# ---------------------------------------------------------------------------
# translation sweep for stable intersections

@dataclass(frozen=True)
class SweepReport:
    offsets: tuple
    statuses: tuple
    certified_runs: tuple
    false_positives: tuple
    depth: int
    refine_depth: int


def _outer_boxes(cover: CylinderCover) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(cover.lo_lo, kind="stable")
    return cover.lo_lo[order], cover.hi_hi[order]


def _boxes_overlap(al, ar, bl, br) -> bool:
    i = j = 0
    while i < len(al) and j < len(bl):
        if ar[i] < bl[j]:
            i += 1
        elif br[j] < al[i]:
            j += 1
        else:
            return True
    return False


def stable_intersection_sweep(a: RegularCantorSet, b: RegularCantorSet,
                              t_range: tuple[float, float], steps: int = 41,
                              depth: int = 6, refine_depth: int = 12) -> SweepReport:
    """Sweep translates of the second set across an offset range, apply the
    certified-intersection test at each offset, and cross-check every
    certified offset against refined outer covers: a certified offset whose
    refined covers are disjoint would be a false positive."""
    if steps < 2:
        raise ValueError("need at least two sweep steps")
    t0, t1 = Fraction(float(t_range[0])), Fraction(float(t_range[1]))
    offsets = [t0 + Fraction(k, steps - 1) * (t1 - t0) for k in range(steps)]
    fine_a = _outer_boxes(cylinders(a, refine_depth, keep_words=False))
    statuses = []
    false_positives = []
    for t in offsets:
        bt = translate(b, t)
        cert = gap_lemma_test(a, bt, depth)
        statuses.append(cert.status)
        if cert.status == "certified":
            fine_b = _outer_boxes(cylinders(bt, refine_depth, keep_words=False))
            if not _boxes_overlap(fine_a[0], fine_a[1], fine_b[0], fine_b[1]):
                false_positives.append(float(t))
    runs = []
    k = 0
    while k < steps:
        if statuses[k] == "certified":
            start = k
            while k + 1 < steps and statuses[k + 1] == "certified":
                k += 1
            runs.append((float(offsets[start]), float(offsets[k])))
        k += 1
    return SweepReport(tuple(float(t) for t in offsets), tuple(statuses),
                       tuple(runs), tuple(false_positives), depth, refine_depth)
