"""Weighted Hamming metrics, weak norms, zeta norms and mixed norms.

Every sum is carried out in exact rationals.  Geometric and geometrically
continued weights have closed-form sums over arithmetic progressions, so
distances between Finite, Cofinite and Periodic graphs are exact.  Oracle
graphs and weights without closed forms produce an enclosing interval whose
width is the certified tail bound at the evaluation depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, NamedTuple

from .core import (
    EMPTY,
    Cofinite,
    Finite,
    Graph,
    Oracle,
    Periodic,
    Permutation,
    complement,
    finite,
    intersect,
    members,
    periodic,
    sym_diff,
)
from .errors import DepthExhausted

DEFAULT_DEPTH = 64
SCAN_CAP = 1_000_000


def Q(x) -> Fraction:
    """Parse an exact rational from int, Fraction or a "p/q" string."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted where exact rationals are required")
    return Fraction(x)


# --------------------------------------------------------------------------
# Intervals
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DyadicInterval:
    """Closed rational interval ``[lo, hi]`` enclosing a (possibly infinite) sum."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> DyadicInterval:
        return cls(Fraction(x), Fraction(x))

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise ValueError(f"interval {self} is not exact")
        return self.lo

    def __add__(self, other) -> DyadicInterval:
        if not isinstance(other, DyadicInterval):
            other = DyadicInterval.point(other)
        return DyadicInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> DyadicInterval:
        return DyadicInterval(-self.hi, -self.lo)

    def __sub__(self, other) -> DyadicInterval:
        if not isinstance(other, DyadicInterval):
            other = DyadicInterval.point(other)
        return self + (-other)

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def within(self, other: DyadicInterval) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __str__(self) -> str:
        if self.exact:
            return f"{self.lo} exact"
        return f"[{self.lo}, {self.hi}] width {self.width}"


# --------------------------------------------------------------------------
# Weights
# --------------------------------------------------------------------------


class WeightFn:
    """A summable positive weight on edge labels.

    Subclasses supply ``value``; ``ap_sum`` returns the exact sum over an
    infinite arithmetic progression or ``None`` when no closed form exists,
    and ``tail_bound(N)`` must dominate the sum over all labels > N.
    """

    def value(self, n: int) -> Fraction:
        raise NotImplementedError

    def ap_sum(self, start: int, stride: int) -> Fraction | None:
        return None

    def tail_bound(self, n: int) -> Fraction:
        raise NotImplementedError

    def total(self) -> Fraction | None:
        return self.ap_sum(1, 1)

    def __call__(self, n: int) -> Fraction:
        return self.value(n)


@dataclass(frozen=True)
class Geometric(WeightFn):
    """phi(n) = a^(-n) for rational a > 1."""

    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Q(self.a))
        if self.a <= 1:
            raise ValueError(f"geometric weight needs a > 1, got {self.a}")

    def value(self, n: int) -> Fraction:
        return self.a ** -n

    def ap_sum(self, start: int, stride: int) -> Fraction:
        return self.a ** -start / (1 - self.a ** -stride)

    def tail_bound(self, n: int) -> Fraction:
        return self.a ** -n / (self.a - 1)


@dataclass(frozen=True)
class Tabulated(WeightFn):
    """Explicit values for labels 1..N, then geometric continuation.

    For n > N, phi(n) = values[-1] * ratio^(n - N) with 0 < ratio < 1, which
    makes the tail sum exact and serves as its own certificate.
    """

    values: tuple[Fraction, ...]
    ratio: Fraction

    def __post_init__(self):
        vals = tuple(Q(v) for v in self.values)
        if not vals or any(v <= 0 for v in vals):
            raise ValueError("tabulated weights need at least one value, all positive")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "ratio", Q(self.ratio))
        if not 0 < self.ratio < 1:
            raise ValueError(f"tail ratio must lie in (0, 1), got {self.ratio}")

    @property
    def size(self) -> int:
        return len(self.values)

    def value(self, n: int) -> Fraction:
        if n <= self.size:
            return self.values[n - 1]
        return self.values[-1] * self.ratio ** (n - self.size)

    def ap_sum(self, start: int, stride: int) -> Fraction:
        total = sum((self.values[n - 1] for n in range(start, self.size + 1, stride)), Fraction(0))
        n0 = start
        if n0 <= self.size:
            n0 += ((self.size - start) // stride + 1) * stride
        return total + self.value(n0) / (1 - self.ratio ** stride)

    def tail_bound(self, n: int) -> Fraction:
        if n >= self.size:
            return self.value(n + 1) / (1 - self.ratio)
        return self.ap_sum(n + 1, 1)


@dataclass(frozen=True, eq=False)
class FunctionWeight(WeightFn):
    """Arbitrary positive weight with a caller-certified tail bound."""

    fn: Callable[[int], Fraction]
    tail: Callable[[int], Fraction]

    def value(self, n: int) -> Fraction:
        return Fraction(self.fn(n))

    def tail_bound(self, n: int) -> Fraction:
        return Fraction(self.tail(n))


@dataclass(frozen=True)
class TailShift:
    """Symbolic relabelling n -> n + shift for n >= start, identity below.

    Not a bijection of N; it stands for the non-finitary relabellings that
    break the derivative.
    """

    shift: int
    start: int = 1

    def __call__(self, n: int) -> int:
        return n + self.shift if n >= self.start else n


@dataclass(frozen=True)
class Relabelled(WeightFn):
    """Geometric weight read through a relabelling: phi(n) = a^(-sigma(n))."""

    base: Geometric
    sigma: Permutation | TailShift

    def value(self, n: int) -> Fraction:
        return self.base.value(self.sigma(n))

    def ap_sum(self, start: int, stride: int) -> Fraction:
        if isinstance(self.sigma, Permutation):
            total = self.base.ap_sum(start, stride)
            for n in self.sigma.support:
                if n >= start and (n - start) % stride == 0:
                    total += self.value(n) - self.base.value(n)
            return total
        total = sum(
            (self.value(n) for n in range(start, self.sigma.start, stride)),
            Fraction(0),
        )
        n0 = start
        if n0 < self.sigma.start:
            n0 += -(-(self.sigma.start - start) // stride) * stride
        return total + self.base.ap_sum(n0 + self.sigma.shift, stride)

    def tail_bound(self, n: int) -> Fraction:
        return self.ap_sum(n + 1, 1)


@dataclass(frozen=True)
class ZetaFn:
    """Weight for the locally constant norms: zeta(n) -> 0, no other accumulation.

    ``sup_after(N)`` must dominate zeta(n) for every n > N.
    """

    fn: Callable[[int], Fraction]
    sup_after: Callable[[int], Fraction]
    name: str = "zeta"

    @classmethod
    def padic(cls, p) -> ZetaFn:
        p = Q(p)
        if p <= 1:
            raise ValueError(f"zeta_p needs p > 1, got {p}")
        return cls(lambda n: p ** -n, lambda n: p ** -(n + 1), f"zeta_{p}")

    def __call__(self, n: int) -> Fraction:
        return Fraction(self.fn(n))


# --------------------------------------------------------------------------
# Sums, distances and norms
# --------------------------------------------------------------------------


def _progression_start(start: int, stride: int, residue: int) -> int:
    return start + (residue - start) % stride


def weighted_sum(g: Graph, phi: WeightFn, depth: int = DEFAULT_DEPTH) -> DyadicInterval:
    """Enclosure of sum_{n in g} phi(n)."""
    if isinstance(g, Finite):
        return DyadicInterval.point(sum((phi.value(n) for n in g.labels), Fraction(0)))
    if isinstance(g, Cofinite):
        total = phi.total()
        if total is not None:
            return DyadicInterval.point(total - sum((phi.value(n) for n in g.missing), Fraction(0)))
    if isinstance(g, Periodic):
        parts = [phi.ap_sum(_progression_start(g.start, g.stride, r), g.stride) for r in sorted(g.residues)]
        if all(p is not None for p in parts):
            exact = sum((phi.value(n) for n in g.base), Fraction(0)) + sum(parts, Fraction(0))
            return DyadicInterval.point(exact)
    head = sum((phi.value(n) for n in members(g, 1, depth + 1)), Fraction(0))
    return DyadicInterval(head, head + phi.tail_bound(depth))


def dist(g1: Graph, g2: Graph, phi: WeightFn, depth: int = DEFAULT_DEPTH) -> DyadicInterval:
    """d_phi(G1, G2): the phi-weight of the symmetric difference."""
    return weighted_sum(sym_diff(g1, g2), phi, depth)


def weak_norm(
    g: Graph,
    a=2,
    depth: int = DEFAULT_DEPTH,
    sigma: Permutation | TailShift | None = None,
) -> DyadicInterval:
    """sum_{n in G} a^(-n), optionally with labels read through ``sigma``."""
    phi: WeightFn = Geometric(Q(a))
    if sigma is not None:
        phi = Relabelled(phi, sigma)
    return weighted_sum(g, phi, depth)


def zeta_norm(g: Graph, zeta: ZetaFn, depth: int = DEFAULT_DEPTH) -> Fraction:
    """Largest zeta-weight carried by an edge of ``g``; 0 for the empty graph.

    The scan runs over labels in increasing order and stops as soon as the
    best value found dominates ``zeta.sup_after`` of the current label.
    """
    if g == EMPTY:
        return Fraction(0)
    stop = depth + 1 if isinstance(g, Oracle) else SCAN_CAP
    best: Fraction | None = None
    for n in members(g, 1, stop):
        v = zeta(n)
        if best is None or v > best:
            best = v
        if best >= zeta.sup_after(n):
            return best
    if isinstance(g, Finite) and best is not None:
        return best
    if best is None:
        raise DepthExhausted(f"no edge found up to label {depth}")
    raise DepthExhausted(f"maximum not certified by label {depth}")


def mixed_dist(
    g1: Graph,
    g2: Graph,
    part: Graph,
    phi: WeightFn,
    zeta: ZetaFn,
    depth: int = DEFAULT_DEPTH,
) -> DyadicInterval:
    """phi-weight of the difference inside ``part`` plus its zeta-norm outside."""
    d = sym_diff(g1, g2)
    inside = weighted_sum(intersect(d, part), phi, depth)
    return inside + zeta_norm(intersect(d, complement(part)), zeta, depth)


class Truncation(NamedTuple):
    graph: Finite
    bound: int
    residual: DyadicInterval


def edge_bound(a, eps) -> int:
    """Ceiling of 1 - log(eps (a - 1)) / log(a), computed without floats."""
    a, eps = Q(a), Q(eps)
    target = eps * (a - 1)
    if target <= 0:
        raise ValueError("eps must be positive")
    if target >= 1:
        raise ValueError("eps must be below ||K_V||_a = 1/(a - 1)")
    # smallest integer N with N - 1 >= -log_a(target), i.e. a^(N-1) * target >= 1
    n = 1
    while a ** (n - 1) * target < 1:
        n += 1
    return n


def truncate(g: Graph, a, eps, depth: int = DEFAULT_DEPTH) -> Truncation:
    """Finite approximation G0 = G ∩ {labels <= N} with ||G - G0||_a < eps."""
    a, eps = Q(a), Q(eps)
    if a <= 1:
        raise ValueError("a must exceed 1")
    if not 0 < eps < 1 / (a - 1):
        raise ValueError(f"eps must lie in (0, ||K_V||_a) = (0, {1 / (a - 1)})")
    n = edge_bound(a, eps)
    g0 = Finite(frozenset(members(g, 1, n + 1)))
    residual = weak_norm(sym_diff(g, g0), a, depth)
    if not residual.hi < eps:
        raise AssertionError(f"truncation residual {residual} not below {eps}")
    return Truncation(g0, n, residual)


# --------------------------------------------------------------------------
# Phase transition at a = 2
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseReport:
    a: Fraction
    trials: int
    subsets_checked: int
    collisions: tuple[tuple[frozenset[int], frozenset[int]], ...]
    canonical_pairs: tuple[tuple[Graph, Graph, Fraction], ...]

    @property
    def injective_on_prefix(self) -> bool:
        return not self.collisions

    @property
    def canonical_pairs_equal(self) -> bool:
        return all(
            weak_norm(g, 2).value == weak_norm(h, 2).value == v
            for g, h, v in self.canonical_pairs
        )


def collision_partner(g: Finite) -> Graph:
    """For finite nonempty G = {n_1 < ... < n_k}: {n_1..n_(k-1)} plus every label > n_k."""
    if not g.labels:
        raise ValueError("the empty graph has no binary-expansion partner")
    top = max(g.labels)
    return periodic(g.labels - {top}, top + 1, 1)


def phase_check(a, trials: int) -> PhaseReport:
    """Exhaustive collision search among subsets of labels 1..trials.

    At a = 2 the report also carries the canonical finite/infinite pairs with
    equal norm for every nonempty subset.
    """
    a = Q(a)
    if a <= 1:
        raise ValueError("a must exceed 1")
    weights = [a ** -n for n in range(1, trials + 1)]
    seen: dict[Fraction, frozenset[int]] = {}
    collisions = []
    for mask in range(1 << trials):
        s = frozenset(n + 1 for n in range(trials) if mask >> n & 1)
        v = sum((weights[n - 1] for n in s), Fraction(0))
        if v in seen:
            collisions.append((seen[v], s))
        else:
            seen[v] = s
    pairs = []
    if a == 2:
        for k in range(1, trials + 1):
            for subset in combinations(range(1, trials + 1), k):
                g = finite(subset)
                pairs.append((g, collision_partner(g), weak_norm(g, 2).value))
    return PhaseReport(a, trials, 1 << trials, tuple(collisions), tuple(pairs))


def lex_less(g: Iterable[int], h: Iterable[int]) -> bool:
    """Lexicographic order on indicator streams of two finite label sets."""
    d = set(g) ^ set(h)
    if not d:
        return False
    return min(d) in set(h)
