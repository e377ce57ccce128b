"""Homomorphism indicators, Möbius inversion and Lagrange interpolation.

Patterns are finite labelled graphs H sitting inside K_V.  The injective
indicator t_inj(H, G) records H ⊆ G; the induced indicator t_ind(H, G)
records G ∩ K_{V(H)} = H.  Linear combinations of indicators with rational
coefficients are :class:`IndicatorCombo` values, which is what the Möbius
expansions and the interpolation routine produce.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .core import (
    Edge,
    Finite,
    Graph,
    contains_all,
    contains_none,
    edge,
    label_pair,
    pair_label,
)
from .errors import EmptySupport, NotSeparated, TooManySupergraphs
from .metrics import WeightFn

MAX_MISSING = 20
SCAN_DEPTH = 10_000


@dataclass(frozen=True)
class Pattern:
    """A finite graph H given by its edges (vertex ids are labels, not up to isomorphism)."""

    edges: frozenset[Edge] = frozenset()
    labels: frozenset[int] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        es = frozenset(edge(*e) for e in self.edges)
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "labels", frozenset(pair_label(e) for e in es))

    def __lt__(self, other):
        return sorted(self.labels) < sorted(other.labels)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> Pattern:
        return cls(frozenset(edge(u, v) for u, v in pairs))

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> Pattern:
        return cls(frozenset(label_pair(n) for n in labels))

    @property
    def vertices(self) -> frozenset[int]:
        """Non-isolated vertices V(H)."""
        return frozenset(v for e in self.edges for v in e)

    @property
    def closure(self) -> frozenset[Edge]:
        """All pairs within V(H), i.e. K_{V(H)}."""
        return frozenset(edge(u, v) for u, v in combinations(sorted(self.vertices), 2))

    @property
    def missing(self) -> frozenset[Edge]:
        return self.closure - self.edges

    def union(self, other: Pattern) -> Pattern:
        return Pattern(self.edges | other.edges)

    def pairs(self) -> list[list[int]]:
        return [list(e) for e in sorted(self.edges)]

    def __len__(self) -> int:
        return len(self.edges)


NAMED_PATTERNS = {
    "empty": Pattern(),
    "K2": Pattern.from_pairs([(1, 2)]),
    "edge": Pattern.from_pairs([(1, 2)]),
    "path3": Pattern.from_pairs([(1, 2), (2, 3)]),
    "triangle": Pattern.from_pairs([(1, 2), (2, 3), (1, 3)]),
    "K3": Pattern.from_pairs([(1, 2), (2, 3), (1, 3)]),
    "two_edges": Pattern.from_pairs([(1, 2), (3, 4)]),
    "K4": Pattern.from_pairs(combinations(range(1, 5), 2)),
}


def t_inj(h: Pattern, g: Graph) -> int:
    return int(contains_all(g, h.labels))


def t_ind(h: Pattern, g: Graph) -> int:
    if not contains_all(g, h.labels):
        return 0
    return int(contains_none(g, {pair_label(e) for e in h.missing}))


FLAVORS = {"inj": t_inj, "ind": t_ind}


@dataclass(frozen=True)
class Term:
    coef: Fraction
    pattern: Pattern
    flavor: str = "inj"

    def __post_init__(self):
        object.__setattr__(self, "coef", Fraction(self.coef))
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")


@dataclass(frozen=True)
class IndicatorCombo:
    terms: tuple[Term, ...] = ()

    def __call__(self, g: Graph) -> Fraction:
        return self.evaluate(g)

    def evaluate(self, g: Graph) -> Fraction:
        total = Fraction(0)
        for t in self.terms:
            if FLAVORS[t.flavor](t.pattern, g):
                total += t.coef
        return total

    def simplify(self) -> IndicatorCombo:
        """Merge like terms, drop zeros, sort deterministically."""
        acc: dict[tuple[str, Pattern], Fraction] = defaultdict(Fraction)
        for t in self.terms:
            acc[(t.flavor, t.pattern)] += t.coef
        keep = [
            Term(c, h, fl)
            for (fl, h), c in sorted(acc.items(), key=lambda kv: (len(kv[0][1]), sorted(kv[0][1].labels), kv[0][0]))
            if c != 0
        ]
        return IndicatorCombo(tuple(keep))

    def rewrite(self, flavor: str) -> IndicatorCombo:
        """Re-express every term in the given flavor via Möbius expansion."""
        direction = "inj_from_ind" if flavor == "ind" else "ind_from_inj"
        out: list[Term] = []
        for t in self.terms:
            if t.flavor == flavor:
                out.append(t)
                continue
            for sub in mobius_expand(t.pattern, direction).terms:
                out.append(Term(t.coef * sub.coef, sub.pattern, sub.flavor))
        return IndicatorCombo(tuple(out)).simplify()

    def __add__(self, other: IndicatorCombo) -> IndicatorCombo:
        return IndicatorCombo(self.terms + other.terms)

    def scale(self, c) -> IndicatorCombo:
        c = Fraction(c)
        return IndicatorCombo(tuple(Term(t.coef * c, t.pattern, t.flavor) for t in self.terms))

    def __len__(self) -> int:
        return len(self.terms)


def _supersets(h: Pattern) -> Iterable[tuple[int, Pattern]]:
    missing = sorted(h.missing)
    if len(missing) > MAX_MISSING:
        raise TooManySupergraphs(
            f"{len(missing)} missing edges would need 2^{len(missing)} supergraphs (limit {MAX_MISSING})"
        )
    for r in range(len(missing) + 1):
        for extra in combinations(missing, r):
            yield r, Pattern(h.edges | frozenset(extra))


def mobius_expand(h: Pattern, direction: str) -> IndicatorCombo:
    """Inclusion-exclusion over the supergraphs H ⊆ H' ⊆ K_{V(H)}.

    ``ind_from_inj``: t_ind(H) = sum (-1)^|H' - H| t_inj(H').
    ``inj_from_ind``: t_inj(H) = sum t_ind(H').
    """
    if direction == "ind_from_inj":
        return IndicatorCombo(tuple(Term((-1) ** r, hp, "inj") for r, hp in _supersets(h)))
    if direction == "inj_from_ind":
        return IndicatorCombo(tuple(Term(1, hp, "ind") for _, hp in _supersets(h)))
    raise ValueError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class IndicatorFn:
    """1 iff no edge of ``absent`` is in G and every edge of ``present`` is."""

    absent: frozenset[int] = frozenset()
    present: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "absent", frozenset(self.absent))
        object.__setattr__(self, "present", frozenset(self.present))
        if self.absent & self.present:
            raise ValueError("absent and present label sets must be disjoint")

    @property
    def support(self) -> frozenset[int]:
        return self.absent | self.present

    def __call__(self, g: Graph) -> int:
        return int(contains_none(g, self.absent) and contains_all(g, self.present))

    def as_combo(self) -> IndicatorCombo:
        """Expand prod 1_{e in G} prod (1 - 1_{e in G}) into injective indicators."""
        base = Pattern.from_labels(self.present)
        absent = sorted(self.absent)
        terms = []
        for r in range(len(absent) + 1):
            for extra in combinations(absent, r):
                terms.append(Term((-1) ** r, base.union(Pattern.from_labels(extra)), "inj"))
        return IndicatorCombo(tuple(terms)).simplify()


def lipschitz_constant(f: IndicatorFn, phi: WeightFn) -> Fraction:
    """Best Lipschitz constant of ``f`` for d_phi: 1 / min phi over the support."""
    if not f.support:
        raise EmptySupport("constant indicator has no Lipschitz constant to report")
    return 1 / min(phi(n) for n in f.support)


def sharpness_witness(f: IndicatorFn, phi: WeightFn) -> tuple[Graph, Graph]:
    """A pair attaining the Lipschitz constant.

    The pair (∅, {e'}) with e' minimizing phi, translated by the ``present``
    edges so that f flips between the two graphs.
    """
    if not f.support:
        raise EmptySupport("constant indicator has no witness")
    best = min(sorted(f.support), key=lambda n: phi(n))
    g = Finite(f.present)
    return g, Finite(f.present ^ {best})


def separating_label(g1: Graph, g2: Graph, depth: int = SCAN_DEPTH) -> int:
    """Least label on which the two graphs disagree."""
    for n in range(1, depth + 1):
        if g1.contains(n) != g2.contains(n):
            return n
    raise NotSeparated(f"graphs agree on labels 1..{depth}")


def _product(factors: list[tuple[int, bool]]) -> IndicatorCombo:
    """Expand prod over (label, positive) of t(e) or (1 - t(e)) into injective terms."""
    combo = [(Fraction(1), frozenset())]
    for n, positive in factors:
        nxt = []
        for c, labels in combo:
            if positive:
                nxt.append((c, labels | {n}))
            else:
                nxt.append((c, labels))
                nxt.append((-c, labels | {n}))
        combo = nxt
    return IndicatorCombo(tuple(Term(c, Pattern.from_labels(ls), "inj") for c, ls in combo))


def interpolate(points: Sequence[tuple[Graph, Fraction]], depth: int = SCAN_DEPTH) -> IndicatorCombo:
    """A finite combination of injective indicators taking value a_j at G_j.

    Built from the separating products: for each i, the product over j != i
    of t(e_ij) if e_ij ∈ G_i, else (1 - t(e_ij)), with e_ij the least label
    separating G_i from G_j.
    """
    if not points:
        return IndicatorCombo()
    out = IndicatorCombo()
    for i, (gi, ai) in enumerate(points):
        ai = Fraction(ai)
        if ai == 0:
            continue
        factors = []
        for j, (gj, _) in enumerate(points):
            if j == i:
                continue
            n = separating_label(gi, gj, depth)
            factors.append((n, gi.contains(n)))
        out = out + _product(factors).scale(ai)
    return out.simplify()
