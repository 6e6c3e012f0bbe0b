"""Subshifts of finite type: periodic orbits, word avoidance, entropy.

Symbols may be strings, integers, or (after higher-block recoding) tuples
of symbols; they only need to be hashable and mutually orderable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np
from scipy import sparse

from ._perron import ConvergenceError, perron_enclosure

__all__ = [
    "SubshiftSFT",
    "PeriodicWord",
    "FiniteWord",
    "CapExceededError",
    "ConvergenceError",
    "is_topologically_mixing",
    "enumerate_periodic",
    "avoid_word",
    "spectral_radius",
    "spectral_radius_enclosure",
    "symbolic_dimension",
    "full_shift",
    "subshift_to_json",
    "subshift_from_json",
]

Symbol = Any

DEFAULT_ORBIT_CAP = 10**6


class CapExceededError(RuntimeError):
    """Enumeration would exceed the configured resource cap."""


@dataclass(frozen=True)
class SubshiftSFT:
    """Finite alphabet with an allowed-transition relation."""

    alphabet: tuple[Symbol, ...]
    allowed: frozenset[tuple[Symbol, Symbol]]
    label: str = ""

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate symbols in alphabet")
        syms = set(self.alphabet)
        for a, b in self.allowed:
            if a not in syms or b not in syms:
                raise ValueError(f"transition ({a!r}, {b!r}) uses unknown symbol")

    @property
    def is_empty(self) -> bool:
        return not self.alphabet

    def index(self, sym: Symbol) -> int:
        return self.alphabet.index(sym)

    def successors(self, sym: Symbol) -> list[Symbol]:
        return [b for b in self.alphabet if (sym, b) in self.allowed]

    def transition_matrix(self) -> np.ndarray:
        n = len(self.alphabet)
        pos = {a: i for i, a in enumerate(self.alphabet)}
        m = np.zeros((n, n))
        for a, b in self.allowed:
            m[pos[a], pos[b]] = 1.0
        return m

    def prune(self) -> "SubshiftSFT":
        """Drop symbols with no outgoing or no incoming transition, repeatedly."""
        alive = set(self.alphabet)
        allowed = set(self.allowed)
        while True:
            out = {a for a, _ in allowed}
            inc = {b for _, b in allowed}
            keep = {s for s in alive if s in out and s in inc}
            if keep == alive:
                break
            alive = keep
            allowed = {(a, b) for a, b in allowed if a in alive and b in alive}
        return SubshiftSFT(tuple(s for s in self.alphabet if s in alive), frozenset(allowed), self.label)


@dataclass(frozen=True)
class PeriodicWord:
    """One periodic orbit of the shift, stored as its primitive word in
    lexicographically minimal rotation."""

    symbols: tuple[Symbol, ...]

    @staticmethod
    def make(symbols: Sequence[Symbol], subshift: SubshiftSFT | None = None) -> "PeriodicWord":
        w = tuple(symbols)
        if not w:
            raise ValueError("empty periodic word")
        # primitive root
        n = len(w)
        for d in range(1, n + 1):
            if n % d == 0 and w == w[:d] * (n // d):
                w = w[:d]
                break
        w = min(w[k:] + w[:k] for k in range(len(w)))
        if subshift is not None:
            for i, a in enumerate(w):
                b = w[(i + 1) % len(w)]
                if (a, b) not in subshift.allowed:
                    raise ValueError(f"cyclic transition ({a!r}, {b!r}) not allowed")
        return PeriodicWord(w)

    @property
    def period(self) -> int:
        return len(self.symbols)

    def rotations(self) -> list[tuple[Symbol, ...]]:
        w = self.symbols
        return [w[k:] + w[:k] for k in range(len(w))]


@dataclass(frozen=True)
class FiniteWord:
    symbols: tuple[Symbol, ...]

    @staticmethod
    def make(symbols: Sequence[Symbol], subshift: SubshiftSFT | None = None) -> "FiniteWord":
        w = tuple(symbols)
        if not w:
            raise ValueError("empty word")
        if subshift is not None:
            for a, b in zip(w, w[1:]):
                if (a, b) not in subshift.allowed:
                    raise ValueError(f"transition ({a!r}, {b!r}) not allowed")
        return FiniteWord(w)

    def __len__(self) -> int:
        return len(self.symbols)


def full_shift(symbols: Sequence[Symbol], label: str = "") -> SubshiftSFT:
    syms = tuple(symbols)
    return SubshiftSFT(syms, frozenset((a, b) for a in syms for b in syms), label or f"full-{len(syms)}-shift")


def is_topologically_mixing(s: SubshiftSFT) -> bool:
    """Primitivity of the transition matrix; Wielandt's bound (n-1)^2 + 1
    caps the power that must become strictly positive."""
    if s.is_empty:
        return False
    if s.prune().alphabet != s.alphabet:
        return False
    n = len(s.alphabet)
    bound = (n - 1) ** 2 + 1
    m = s.transition_matrix() > 0
    # primitive => every power >= bound is positive, so one power of two suffices
    power = m
    exp = 1
    while True:
        if power.all():
            return True
        if exp >= bound:
            return False
        power = power @ power
        exp *= 2


def enumerate_periodic(s: SubshiftSFT, p: int, cap: int = DEFAULT_ORBIT_CAP) -> list[PeriodicWord]:
    """All orbit classes of period dividing p, deduplicated by canonical rotation."""
    if p < 1:
        raise ValueError("period must be >= 1")
    if s.is_empty:
        return []
    mat = s.transition_matrix()
    est = float(np.trace(np.linalg.matrix_power(mat, p)))
    if est > cap:
        raise CapExceededError(f"~{est:.3g} fixed points of the {p}-th power exceeds cap {cap}")
    succ = {a: s.successors(a) for a in s.alphabet}
    classes: set[tuple[Symbol, ...]] = set()

    def dfs(prefix: list[Symbol]):
        if len(prefix) == p:
            if (prefix[-1], prefix[0]) in s.allowed:
                classes.add(PeriodicWord.make(prefix).symbols)
            return
        for b in succ[prefix[-1]]:
            prefix.append(b)
            dfs(prefix)
            prefix.pop()

    for a in s.alphabet:
        dfs([a])
    return [PeriodicWord(w) for w in sorted(classes, key=lambda w: (len(w), w))]


def fixed_point_count(s: SubshiftSFT, p: int, cap: int = DEFAULT_ORBIT_CAP) -> int:
    """Number of fixed points of the p-th shift power (= trace of matrix power)."""
    return sum(c.period for c in enumerate_periodic(s, p, cap) if p % c.period == 0)


def avoid_word(s: SubshiftSFT, w: FiniteWord, cap: int = DEFAULT_ORBIT_CAP) -> SubshiftSFT:
    """Subshift of all bi-infinite sequences of ``s`` containing no occurrence
    of ``w``, on the (|w|-1)-block alphabet for |w| >= 2.

    An empty result is legal; callers check ``is_empty``.
    """
    word = w.symbols
    if len(word) < 1:
        raise ValueError("need a nonempty word")
    label = f"{s.label or 'sft'} avoid {'.'.join(map(str, word))}"
    if len(word) == 1:
        keep = tuple(a for a in s.alphabet if a != word[0])
        allowed = frozenset((a, b) for a, b in s.allowed if a in keep and b in keep)
        return SubshiftSFT(keep, allowed, label).prune()

    k = len(word)
    blocks: list[tuple[Symbol, ...]] = []

    def grow(prefix: tuple[Symbol, ...]):
        if len(blocks) > cap:
            raise CapExceededError(f"block-state count exceeds cap {cap}")
        if len(prefix) == k - 1:
            blocks.append(prefix)
            return
        for b in s.successors(prefix[-1]):
            grow(prefix + (b,))

    for a in s.alphabet:
        grow((a,))
    blockset = set(blocks)
    allowed_pairs = set()
    for u in blocks:
        for b in s.successors(u[-1]):
            v = u[1:] + (b,)
            if v in blockset and u + (b,) != word:
                allowed_pairs.add((u, v))
    return SubshiftSFT(tuple(blocks), frozenset(allowed_pairs), label).prune()


def _sparse_matrix(s: SubshiftSFT) -> sparse.csr_matrix:
    pos = {a: i for i, a in enumerate(s.alphabet)}
    rows = [pos[a] for a, _ in s.allowed]
    cols = [pos[b] for _, b in s.allowed]
    n = len(s.alphabet)
    return sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))


def spectral_radius_enclosure(s: SubshiftSFT, tol: float = 1e-10) -> tuple[float, float]:
    if s.is_empty:
        raise ValueError("empty subshift")
    return perron_enclosure(_sparse_matrix(s), tol)


def spectral_radius(s: SubshiftSFT, tol: float = 1e-10) -> float:
    lo, hi = spectral_radius_enclosure(s, tol)
    return 0.5 * (lo + hi)


def symbolic_dimension(s: SubshiftSFT, ratio: float) -> float:
    """Hausdorff dimension of the self-similar model where every symbol
    contracts by ``ratio``: log(spectral radius)/log(1/ratio)."""
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must lie in (0, 1)")
    rho = spectral_radius(s, tol=1e-12)
    if rho <= 0.0:
        raise ValueError("empty subshift")
    return math.log(rho) / math.log(1.0 / ratio)


def _sym_to_json(sym: Symbol):
    if isinstance(sym, tuple):
        return [_sym_to_json(x) for x in sym]
    return sym


def _sym_from_json(sym):
    if isinstance(sym, list):
        return tuple(_sym_from_json(x) for x in sym)
    return sym


def subshift_to_json(s: SubshiftSFT) -> dict:
    return {
        "alphabet": [_sym_to_json(a) for a in s.alphabet],
        "allowed": [[_sym_to_json(a), _sym_to_json(b)] for a, b in sorted(s.allowed, key=repr)],
        "label": s.label,
    }


def subshift_from_json(data: dict) -> SubshiftSFT:
    alphabet = tuple(_sym_from_json(a) for a in data["alphabet"])
    allowed = frozenset((_sym_from_json(a), _sym_from_json(b)) for a, b in data["allowed"])
    return SubshiftSFT(alphabet, allowed, data.get("label", ""))
