"""Edge labellings, graph representations and the Z/2Z-algebra on graph space.

A graph on the countable vertex set V = {1, 2, ...} is identified with its
edge set, and every edge {i, j} with a positive integer label.  The canonical
labelling is colexicographic::

    psi({i, j}) = (j - 1)(j - 2)/2 + i        (i < j)

so the edges among the first n vertices carry exactly the labels
1 .. C(n, 2).  Graphs are stored as sets of labels in one of four forms:

``Finite``     finitely many edges
``Cofinite``   all but finitely many edges
``Periodic``   eventually periodic, neither finite nor cofinite
``Oracle``     a black-box membership predicate with a declared class

Finite, Cofinite and Periodic values are always normalized, so structural
equality is set equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, isqrt, lcm
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .errors import IncompatiblePeriodic, OracleTagMismatch

MAX_PERIOD = 1 << 12
SPOT_CHECK_DEPTH = 1000
TAGS = ("finite", "cofinite", "proper", "unknown")


# --------------------------------------------------------------------------
# Edges and labellings
# --------------------------------------------------------------------------


class Edge(NamedTuple):
    """Unordered vertex pair, stored with ``i < j``."""

    i: int
    j: int


def edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop ({u}, {v}) is not an edge")
    if min(u, v) < 1:
        raise ValueError(f"vertex ids start at 1, got ({u}, {v})")
    return Edge(min(u, v), max(u, v))


def pair_label(e: Edge) -> int:
    """Canonical colex label of an edge."""
    return comb(e.j - 1, 2) + e.i


def label_pair(n: int) -> Edge:
    """Inverse of :func:`pair_label`."""
    if n < 1:
        raise ValueError(f"labels start at 1, got {n}")
    j = (1 + isqrt(8 * n)) // 2
    while comb(j, 2) < n:
        j += 1
    while comb(j - 1, 2) >= n:
        j -= 1
    return Edge(n - comb(j - 1, 2), j)


@dataclass(frozen=True)
class Permutation:
    """A permutation of the positive integers moving finitely many points.

    ``moves`` holds the sorted ``(n, sigma(n))`` pairs with ``sigma(n) != n``.
    """

    moves: tuple[tuple[int, int], ...] = ()
    _fwd: dict = field(default=None, compare=False, repr=False, hash=False)
    _inv: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        fwd = {a: b for a, b in self.moves if a != b}
        if sorted(fwd) != sorted(fwd.values()):
            raise ValueError("moves do not describe a permutation")
        if any(a < 1 for a in fwd):
            raise ValueError("permutation must act on positive integers")
        object.__setattr__(self, "moves", tuple(sorted(fwd.items())))
        object.__setattr__(self, "_fwd", fwd)
        object.__setattr__(self, "_inv", {b: a for a, b in fwd.items()})

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]]) -> Permutation:
        moves: dict[int, int] = {}
        for cyc in cycles:
            cyc = list(cyc)
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated point in cycle {cyc}")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if a in moves:
                    raise ValueError("cycles are not disjoint")
                moves[a] = b
        return cls(tuple(moves.items()))

    def __call__(self, n: int) -> int:
        return self._fwd.get(n, n)

    def inverse(self, n: int) -> int:
        return self._inv.get(n, n)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._fwd)

    def cycles(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for a in sorted(self._fwd):
            if a in seen:
                continue
            cyc = [a]
            seen.add(a)
            b = self._fwd[a]
            while b != a:
                cyc.append(b)
                seen.add(b)
                b = self._fwd[b]
            out.append(cyc)
        return out


IDENTITY = Permutation()


@dataclass(frozen=True)
class EdgeLabeling:
    """The bijection K_V -> N: colex order followed by an optional twist."""

    twist: Permutation = IDENTITY

    def label(self, e: Edge) -> int:
        return self.twist(pair_label(e))

    def unlabel(self, n: int) -> Edge:
        if n < 1:
            raise ValueError(f"labels start at 1, got {n}")
        return label_pair(self.twist.inverse(n))


CANONICAL = EdgeLabeling()


def label(e: Edge, labeling: EdgeLabeling = CANONICAL) -> int:
    return labeling.label(e)


def unlabel(n: int, labeling: EdgeLabeling = CANONICAL) -> Edge:
    return labeling.unlabel(n)


# --------------------------------------------------------------------------
# Graph representations
# --------------------------------------------------------------------------


class Graph:
    """Common interface; see the concrete representations below."""

    kind: str = "graph"

    def contains(self, n: int) -> bool:
        raise NotImplementedError

    def __contains__(self, n: int) -> bool:
        return self.contains(n)

    def has_edge(self, e: Edge, labeling: EdgeLabeling = CANONICAL) -> bool:
        return self.contains(labeling.label(e))

    @property
    def horizon(self) -> int:
        """Largest label at which the graph departs from its tail regime."""
        return 0


def _labels(xs: Iterable[int]) -> frozenset[int]:
    out = frozenset(int(x) for x in xs)
    if any(x < 1 for x in out):
        raise ValueError("labels must be positive integers")
    return out


@dataclass(frozen=True)
class Finite(Graph):
    labels: frozenset[int] = frozenset()

    kind = "finite"

    def __post_init__(self):
        object.__setattr__(self, "labels", _labels(self.labels))

    def contains(self, n: int) -> bool:
        return n in self.labels

    @property
    def horizon(self) -> int:
        return max(self.labels, default=0)


@dataclass(frozen=True)
class Cofinite(Graph):
    missing: frozenset[int] = frozenset()

    kind = "cofinite"

    def __post_init__(self):
        object.__setattr__(self, "missing", _labels(self.missing))

    def contains(self, n: int) -> bool:
        return n not in self.missing

    @property
    def horizon(self) -> int:
        return max(self.missing, default=0)


@dataclass(frozen=True)
class Periodic(Graph):
    """``base`` below ``start``, then every n >= start with n % stride in residues.

    Build these with :func:`periodic`, which normalizes; the constructor only
    checks shape.
    """

    base: frozenset[int]
    start: int
    stride: int
    residues: frozenset[int]

    kind = "periodic"

    def __post_init__(self):
        object.__setattr__(self, "base", _labels(self.base))
        object.__setattr__(self, "residues", frozenset(self.residues))
        if self.start < 1 or self.stride < 1:
            raise ValueError("start and stride must be positive")
        if self.base and max(self.base) >= self.start:
            raise ValueError("base labels must lie below the tail start")
        if not self.residues or len(self.residues) >= self.stride:
            raise ValueError("a periodic graph needs a proper nonempty residue set")
        if any(not 0 <= r < self.stride for r in self.residues):
            raise ValueError("residues must lie in [0, stride)")

    def contains(self, n: int) -> bool:
        if n < self.start:
            return n in self.base
        return n % self.stride in self.residues

    @property
    def horizon(self) -> int:
        return self.start - 1

    @property
    def is_single_progression(self) -> bool:
        return len(self.residues) == 1


@dataclass(frozen=True, eq=False)
class Oracle(Graph):
    """Membership predicate plus a trusted classification tag.

    The tag is spot-checked on labels (depth/2, depth]: a window that is all
    ones contradicts ``finite`` and a window of all zeros contradicts
    ``cofinite``.
    """

    predicate: Callable[[int], bool]
    tag: str = "unknown"
    check_depth: int = SPOT_CHECK_DEPTH

    kind = "oracle"

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown oracle tag {self.tag!r}")
        if self.check_depth >= 2 and self.tag in ("finite", "cofinite"):
            window = range(self.check_depth // 2 + 1, self.check_depth + 1)
            bits = [bool(self.predicate(n)) for n in window]
            if self.tag == "finite" and all(bits):
                raise OracleTagMismatch(
                    f"oracle tagged finite but labels {window.start}..{window.stop - 1} are all present"
                )
            if self.tag == "cofinite" and not any(bits):
                raise OracleTagMismatch(
                    f"oracle tagged cofinite but labels {window.start}..{window.stop - 1} are all absent"
                )

    def contains(self, n: int) -> bool:
        return bool(self.predicate(n))


EMPTY = Finite()
COMPLETE = Cofinite()


# --------------------------------------------------------------------------
# Normal forms
# --------------------------------------------------------------------------


class _EP(NamedTuple):
    prefix: frozenset[int]
    start: int
    stride: int
    residues: frozenset[int]


def _to_ep(g: Graph) -> _EP:
    if isinstance(g, Finite):
        return _EP(g.labels, g.horizon + 1, 1, frozenset())
    if isinstance(g, Cofinite):
        m = g.horizon + 1
        return _EP(frozenset(range(1, m)) - g.missing, m, 1, frozenset({0}))
    if isinstance(g, Periodic):
        return _EP(g.base, g.start, g.stride, g.residues)
    raise TypeError(f"no eventually-periodic form for {type(g).__name__}")


def _normalize(prefix: Iterable[int], start: int, stride: int, residues: Iterable[int]) -> Graph:
    residues = frozenset(r % stride for r in residues)
    for d in range(1, stride + 1):
        if stride % d == 0 and all((r + d) % stride in residues for r in residues):
            stride, residues = d, frozenset(r % d for r in residues)
            break
    prefix = set(prefix)
    if not residues:
        return Finite(frozenset(prefix))
    if len(residues) == stride:
        return Cofinite(frozenset(range(1, start)) - prefix)
    while start > 1 and ((start - 1) in prefix) == ((start - 1) % stride in residues):
        start -= 1
        prefix.discard(start)
    return Periodic(frozenset(prefix), start, stride, residues)


def finite(labels: Iterable[int] = ()) -> Finite:
    return Finite(frozenset(labels))


def cofinite(missing: Iterable[int] = ()) -> Cofinite:
    return Cofinite(frozenset(missing))


def periodic(
    base: Iterable[int] = (),
    start: int = 1,
    stride: int = 1,
    residues: Iterable[int] | None = None,
) -> Graph:
    """Edge set ``base`` XOR ``{n >= start : n % stride in residues}``.

    ``residues`` defaults to ``{start % stride}``, i.e. the single progression
    start, start + stride, ...  The result is normalized and may come back as
    Finite or Cofinite (stride 1 tails are cofinite).
    """
    if start < 1 or stride < 1:
        raise ValueError("start and stride must be positive")
    if stride > MAX_PERIOD:
        raise IncompatiblePeriodic(f"stride {stride} exceeds MAX_PERIOD={MAX_PERIOD}")
    base = _labels(base)
    res = frozenset({start % stride}) if residues is None else frozenset(r % stride for r in residues)
    m = max(start, max(base, default=0) + 1)
    prefix = {
        n for n in range(1, m)
        if (n in base) != (n >= start and n % stride in res)
    }
    return _normalize(prefix, m, stride, res)


def from_edges(pairs: Iterable[Sequence[int]], labeling: EdgeLabeling = CANONICAL) -> Finite:
    return Finite(frozenset(labeling.label(edge(u, v)) for u, v in pairs))


def edges_of(g: Finite, labeling: EdgeLabeling = CANONICAL) -> list[Edge]:
    return sorted(labeling.unlabel(n) for n in g.labels)


def classify(g: Graph) -> str:
    """One of 'finite', 'cofinite', 'proper' (neither), or 'unknown'."""
    if isinstance(g, Finite):
        return "finite"
    if isinstance(g, Cofinite):
        return "cofinite"
    if isinstance(g, Periodic):
        return "proper"
    return g.tag


def members(g: Graph, start: int = 1, stop: int | None = None) -> Iterator[int]:
    """Labels of ``g`` in increasing order from ``start`` (inclusive) to ``stop`` (exclusive)."""
    if isinstance(g, Finite):
        for n in sorted(g.labels):
            if n >= start and (stop is None or n < stop):
                yield n
        return
    n = start
    while stop is None or n < stop:
        if g.contains(n):
            yield n
        n += 1


def contains_all(g: Graph, labels: Iterable[int]) -> bool:
    if isinstance(g, Finite):
        return g.labels.issuperset(labels)
    if isinstance(g, Cofinite):
        return g.missing.isdisjoint(labels)
    return all(g.contains(n) for n in labels)


def contains_none(g: Graph, labels: Iterable[int]) -> bool:
    if isinstance(g, Finite):
        return g.labels.isdisjoint(labels)
    if isinstance(g, Cofinite):
        return g.missing.issuperset(labels)
    return not any(g.contains(n) for n in labels)


def contains(g: Graph, e: Edge, labeling: EdgeLabeling = CANONICAL) -> int:
    return int(g.has_edge(e, labeling))


# --------------------------------------------------------------------------
# Algebra
# --------------------------------------------------------------------------

_XOR_TAGS = {
    frozenset({"finite"}): "finite",
    frozenset({"cofinite"}): "finite",
    frozenset({"finite", "cofinite"}): "cofinite",
    frozenset({"proper", "finite"}): "proper",
    frozenset({"proper", "cofinite"}): "proper",
}
_AND_TAGS = {
    frozenset({"cofinite"}): "cofinite",
    frozenset({"proper", "cofinite"}): "proper",
}


def _oracle_combine(op, g1: Graph, g2: Graph, tag: str) -> Oracle:
    return Oracle(lambda n: op(g1.contains(n), g2.contains(n)), tag, check_depth=0)


def _merge(op, g1: Graph, g2: Graph) -> Graph:
    e1, e2 = _to_ep(g1), _to_ep(g2)
    stride = lcm(e1.stride, e2.stride)
    if stride > MAX_PERIOD:
        raise IncompatiblePeriodic(
            f"periods {e1.stride} and {e2.stride} merge to {stride} > MAX_PERIOD={MAX_PERIOD}"
        )
    start = max(e1.start, e2.start)
    prefix = [n for n in range(1, start) if op(g1.contains(n), g2.contains(n))]
    residues = [
        r for r in range(stride)
        if op(r % e1.stride in e1.residues, r % e2.stride in e2.residues)
    ]
    return _normalize(prefix, start, stride, residues)


def sym_diff(g1: Graph, g2: Graph) -> Graph:
    """Graph addition: the symmetric difference of edge sets."""
    if isinstance(g1, Oracle) or isinstance(g2, Oracle):
        tag = _XOR_TAGS.get(frozenset({classify(g1), classify(g2)}), "unknown")
        return _oracle_combine(lambda a, b: a != b, g1, g2, tag)
    if isinstance(g1, Finite) and isinstance(g2, Finite):
        return Finite(g1.labels ^ g2.labels)
    if isinstance(g1, Cofinite) and isinstance(g2, Cofinite):
        return Finite(g1.missing ^ g2.missing)
    if isinstance(g1, Finite) and isinstance(g2, Cofinite):
        return Cofinite(g2.missing ^ g1.labels)
    if isinstance(g1, Cofinite) and isinstance(g2, Finite):
        return Cofinite(g1.missing ^ g2.labels)
    return _merge(lambda a, b: a != b, g1, g2)


def intersect(g1: Graph, g2: Graph) -> Graph:
    """Graph multiplication: the intersection of edge sets."""
    if isinstance(g1, Oracle) or isinstance(g2, Oracle):
        pair = frozenset({classify(g1), classify(g2)})
        tag = "finite" if "finite" in pair else _AND_TAGS.get(pair, "unknown")
        return _oracle_combine(lambda a, b: a and b, g1, g2, tag)
    if isinstance(g1, Finite) and isinstance(g2, Finite):
        return Finite(g1.labels & g2.labels)
    if isinstance(g1, Cofinite) and isinstance(g2, Cofinite):
        return Cofinite(g1.missing | g2.missing)
    if isinstance(g1, Finite) and isinstance(g2, Cofinite):
        return Finite(g1.labels - g2.missing)
    if isinstance(g1, Cofinite) and isinstance(g2, Finite):
        return Finite(g2.labels - g1.missing)
    return _merge(lambda a, b: a and b, g1, g2)


def complement(g: Graph) -> Graph:
    return sym_diff(g, COMPLETE)


def union(g1: Graph, g2: Graph) -> Graph:
    return complement(intersect(complement(g1), complement(g2)))


def difference(g1: Graph, g2: Graph) -> Graph:
    """Edges of ``g1`` not in ``g2`` (set difference, not graph subtraction)."""
    return intersect(g1, complement(g2))


def prefix(g: Graph, n: int) -> Finite:
    """``g`` restricted to labels 1..n."""
    if isinstance(g, Finite):
        return Finite(frozenset(x for x in g.labels if x <= n))
    return Finite(frozenset(members(g, 1, n + 1)))


def tail_from(n: int) -> Cofinite:
    """All labels >= n."""
    return Cofinite(frozenset(range(1, n)))


def equal_to_depth(g1: Graph, g2: Graph, depth: int) -> bool:
    return all(g1.contains(n) == g2.contains(n) for n in range(1, depth + 1))


def converged_at_depth(seq: Sequence[Graph], e0: Iterable[int]) -> tuple[bool, Finite | None]:
    """Whether ``E0 ∩ G_n`` is constant over the last half of ``seq``.

    Returns the stabilized trace as a Finite graph when it is.
    """
    if not seq:
        raise ValueError("empty sequence")
    e0 = sorted(set(e0))
    tail = seq[len(seq) // 2:]
    traces = {frozenset(n for n in e0 if g.contains(n)) for g in tail}
    if len(traces) == 1:
        return True, Finite(traces.pop())
    return False, None
