"""Edge densities of the induced prefixes G[n] = G restricted to vertices 1..n.

With the colex labelling the edges of G[n] are exactly the labels
1..C(n, 2) of G, so the density sequence of any representable graph is
computable term by term.  The constructions below build graphs vertex by
vertex: each new vertex v is joined to the first d_v earlier vertices, so a
construction is fully described by its back-degree sequence (d_2, d_3, ...).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb, factorial, floor, isqrt
from typing import Iterable, Sequence

from .core import COMPLETE, EMPTY, Finite, Graph, edge, members, pair_label
from .errors import BadEpsilon, ConstructionError, GrowthBoundViolated, TooLargePattern
from .homind import Pattern

MAX_PATTERN_VERTICES = 8


def induced_prefix(g: Graph, n: int) -> Pattern:
    """Edges of ``g`` among vertices 1..n."""
    if n < 1:
        raise ValueError("n must be positive")
    return Pattern.from_labels(members(g, 1, comb(n, 2) + 1))


def growth_bounds(n: int, e: Fraction) -> tuple[Fraction, Fraction]:
    """Range of e(G[n+1]) given e(G[n]) = e."""
    r = Fraction(n - 1, n + 1)
    return r * e, r * e + Fraction(2, n + 1)


@dataclass(frozen=True)
class DensityPoint:
    n: int
    edges: int

    @property
    def density(self) -> Fraction:
        return Fraction(self.edges, comb(self.n, 2))


@dataclass(frozen=True)
class DensityTrajectory:
    points: tuple[DensityPoint, ...]

    @property
    def densities(self) -> list[Fraction]:
        return [p.density for p in self.points]

    @property
    def ns(self) -> list[int]:
        return [p.n for p in self.points]

    def at(self, n: int) -> Fraction:
        return self.points[n - self.points[0].n].density

    def __len__(self) -> int:
        return len(self.points)

    def check_growth(self) -> None:
        for p, q in zip(self.points, self.points[1:]):
            lo, hi = growth_bounds(p.n, p.density)
            if not lo <= q.density <= hi:
                raise GrowthBoundViolated(
                    f"e(G[{q.n}]) = {q.density} outside [{lo}, {hi}] from e(G[{p.n}]) = {p.density}"
                )


def _trajectory_from_counts(counts: Iterable[tuple[int, int]]) -> DensityTrajectory:
    traj = DensityTrajectory(tuple(DensityPoint(n, m) for n, m in counts))
    traj.check_growth()
    return traj


def trajectory(g: Graph, n_max: int) -> DensityTrajectory:
    """e(G[n]) for n = 2..n_max, with the growth bounds checked along the way."""
    if n_max < 2:
        raise ValueError("N must be at least 2")
    counts = []
    total = 0
    for n in range(2, n_max + 1):
        total += sum(1 for _ in members(g, comb(n - 1, 2) + 1, comb(n, 2) + 1))
        counts.append((n, total))
    return _trajectory_from_counts(counts)


# --------------------------------------------------------------------------
# Back-degree constructions
# --------------------------------------------------------------------------


def degrees_to_graph(degrees: Sequence[int]) -> Finite:
    """``degrees[v - 1]`` is the number of earlier vertices joined to vertex v."""
    labels = []
    for v, d in enumerate(degrees, start=1):
        if not 0 <= d < v:
            raise ValueError(f"vertex {v} cannot have back-degree {d}")
        first = comb(v - 1, 2) + 1
        labels.extend(range(first, first + d))
    return Finite(frozenset(labels))


def degrees_trajectory(degrees: Sequence[int]) -> DensityTrajectory:
    counts, total = [], 0
    for v, d in enumerate(degrees, start=1):
        total += d
        if v >= 2:
            counts.append((v, total))
    return _trajectory_from_counts(counts)


@dataclass(frozen=True)
class Construction:
    """A finite graph given by back-degrees, plus its density trajectory."""

    degrees: tuple[int, ...]
    trajectory: DensityTrajectory

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def edges(self) -> int:
        return sum(self.degrees)

    @property
    def density(self) -> Fraction:
        return Fraction(self.edges, comb(self.n, 2))

    @property
    def graph(self) -> Finite:
        return degrees_to_graph(self.degrees)


@dataclass(frozen=True)
class TargetConstruction:
    graph: Graph
    trajectory: DensityTrajectory
    degrees: tuple[int, ...] | None


def construct_target(e, n_max: int) -> TargetConstruction:
    """A graph whose prefix densities converge to ``e``.

    Each new vertex n + 1 gets the back-degree k in 0..n that brings the
    density closest to e (ties to the smaller k), which keeps
    |e(G[n]) - e| < 1 / C(n, 2) at every step.
    """
    e = Fraction(e)
    if not 0 <= e <= 1:
        raise ValueError("target density must lie in [0, 1]")
    if n_max < 2:
        raise ValueError("N must be at least 2")
    if e in (0, 1):
        g = EMPTY if e == 0 else COMPLETE
        return TargetConstruction(g, trajectory(g, n_max), None)
    degrees, total = [0, 1], 1
    for v in range(3, n_max + 1):
        c = comb(v, 2)
        ideal = e * c - total
        k = min(range(v), key=lambda d: (abs(d - ideal), d))
        total += k
        degrees.append(k)
        if not abs(Fraction(total, c) - e) < Fraction(1, c):
            raise ConstructionError(f"density {Fraction(total, c)} at n = {v} misses {e} by >= 1/{c}")
    traj = degrees_trajectory(degrees)
    return TargetConstruction(degrees_to_graph(degrees), traj, tuple(degrees))


def ceil_sqrt(x: Fraction) -> int:
    """Smallest integer m >= 0 with m^2 >= x."""
    x = Fraction(x)
    if x <= 0:
        return 0
    m = isqrt(x.numerator // x.denominator)
    while m * m < x:
        m += 1
    return m


def growth_size(n1: int, p0, p1, eps) -> int:
    """Ceiling of 1 + max(sqrt(2/eps), n1 sqrt(p1/(p0+eps)), n1 sqrt((1-p0)/(1-p1+eps)))."""
    p0, p1, eps = Fraction(p0), Fraction(p1), Fraction(eps)
    return 1 + max(
        ceil_sqrt(2 / eps),
        ceil_sqrt(n1 * n1 * p1 / (p0 + eps)),
        ceil_sqrt(n1 * n1 * (1 - p0) / (1 - p1 + eps)),
    )


def grow_to_density(degrees: Sequence[int], p_other, eps, direction: str | None = None) -> Construction:
    """Extend a graph with density p_i to one with density within eps of p_other.

    The graph is given by back-degrees on vertices 1..n1.  New vertices up to
    the bound n2 of :func:`growth_size` are attached one at a time, each with
    the largest (going up) or smallest (going down) back-degree keeping the
    density on the near side of the target, and every intermediate prefix
    density is checked to stay between the two endpoints.
    """
    degrees = list(degrees)
    n1 = len(degrees)
    if n1 < 2:
        raise ValueError("start graph needs at least two vertices")
    total = sum(degrees)
    p_i = Fraction(total, comb(n1, 2))
    p_other, eps = Fraction(p_other), Fraction(eps)
    if direction is None:
        direction = "up" if p_other > p_i else "down"
    if direction not in ("up", "down") or (direction == "up") != (p_other > p_i):
        raise ValueError(f"direction {direction!r} does not lead from {p_i} to {p_other}")
    p0, p1 = min(p_i, p_other), max(p_i, p_other)
    if not 0 <= p0 < p1 <= 1:
        raise ValueError("densities must satisfy 0 <= p0 < p1 <= 1")
    if not 0 < eps < (p1 - p0) / 2:
        raise BadEpsilon(f"eps = {eps} must lie in (0, {(p1 - p0) / 2})")
    n2 = growth_size(n1, p0, p1, eps)
    for v in range(n1 + 1, n2 + 1):
        c = comb(v, 2)
        if direction == "up":
            d = floor(p1 * c) - total
        else:
            d = ceil(p0 * c) - total
        d = min(max(d, 0), v - 1)
        total += d
        degrees.append(d)
        x = Fraction(total, c)
        if not p0 <= x <= p1:
            raise ConstructionError(f"intermediate density {x} at n = {v} left [{p0}, {p1}]")
    final = Fraction(total, comb(n2, 2))
    if not abs(final - p_other) < eps:
        raise ConstructionError(f"reached {final} at n = {n2}, not within {eps} of {p_other}")
    return Construction(tuple(degrees), degrees_trajectory(degrees))


@dataclass(frozen=True)
class OscillatingConstruction:
    construction: Construction
    targets: tuple[Fraction, ...]
    marks: dict  # target -> list of vertex counts
    rounds: int

    @property
    def first_mark(self) -> int:
        return min(n for ns in self.marks.values() for n in ns)

    @property
    def trajectory(self) -> DensityTrajectory:
        return self.construction.trajectory

    @property
    def graph(self) -> Finite:
        return self.construction.graph


def construct_oscillating(targets: Sequence, rounds: int) -> OscillatingConstruction:
    """Prefix of a graph whose densities accumulate at every target.

    Starting near e_1, the construction sweeps up through e_2, ..., e_m and
    back down to e_1 once per round, with tolerance min(1/k, eps0) in round k
    (eps0 is half the smallest gap).  Marks record the vertex counts where a
    sweep landed within that tolerance of a target.
    """
    ts = tuple(Fraction(t) for t in targets)
    if len(ts) < 2:
        raise ValueError("need at least two targets (use construct_target for one)")
    if list(ts) != sorted(set(ts)) or not 0 <= ts[0] or not ts[-1] <= 1:
        raise ValueError("targets must be strictly increasing within [0, 1]")
    if rounds < 1:
        raise ValueError("rounds must be positive")
    eps0 = min(b - a for a, b in zip(ts, ts[1:])) / 2
    # start on n vertices with ceil(e_1 C(n, 2)) edges, n large enough that
    # the density grid is finer than eps0 / 2
    n = 2
    while comb(n, 2) * eps0 < 2:
        n += 1
    need = ceil(ts[0] * comb(n, 2))
    degrees = []
    for v in range(1, n + 1):
        d = min(v - 1, need - sum(degrees))
        degrees.append(d)
    marks: dict[Fraction, list[int]] = {t: [] for t in ts}
    marks[ts[0]].append(n)
    for k in range(1, rounds + 1):
        tol = min(Fraction(1, k), eps0)
        for i in range(1, len(ts)):
            degrees = list(_sweep(degrees, ts[i], tol).degrees)
            marks[ts[i]].append(len(degrees))
        tol_next = min(Fraction(1, k + 1), eps0)
        degrees = list(_sweep(degrees, ts[0], tol_next).degrees)
        marks[ts[0]].append(len(degrees))
    return OscillatingConstruction(Construction(tuple(degrees), degrees_trajectory(degrees)), ts, marks, rounds)


def _sweep(degrees: Sequence[int], target: Fraction, tol: Fraction) -> Construction:
    current = Fraction(sum(degrees), comb(len(degrees), 2))
    eps = min(tol, abs(target - current) / 3)
    return grow_to_density(degrees, target, eps)


# --------------------------------------------------------------------------
# Accumulation points and homomorphism densities
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AccumulationReport:
    lo: Fraction
    hi: Fraction
    clusters: tuple[Fraction, ...]
    window: int
    n: int


def accumulation_set(g: Graph | DensityTrajectory, n_max: int, window: int) -> AccumulationReport:
    """Estimate of the limiting density set from the last ``window`` terms.

    The interval is the observed min/max; clusters are the turning points
    (local extrema) of the density sequence inside the window.
    """
    if not n_max >= window >= 2:
        raise ValueError("need N >= window >= 2")
    traj = g if isinstance(g, DensityTrajectory) else trajectory(g, n_max)
    vals = [p.density for p in traj.points if n_max - window < p.n <= n_max]
    if len(vals) < 2:
        raise ValueError("trajectory too short for the window")
    turns = {
        b for a, b, c in zip(vals, vals[1:], vals[2:])
        if (b > a and b >= c) or (b < a and b <= c)
    }
    return AccumulationReport(min(vals), max(vals), tuple(sorted(turns)), window, n_max)


@dataclass(frozen=True)
class LimitingHomDensity:
    pattern: Pattern
    values: tuple[tuple[int, Fraction], ...]  # (n, t_ind(H, G[n]))

    def at(self, n: int) -> Fraction:
        return dict(self.values)[n]


def limiting_hom_density(h: Pattern, g: Graph, n_max: int) -> LimitingHomDensity:
    """t_ind(H, G[n]) = ind(H, G[n]) (n - k)! / n! for n = k..N, k = |V(H)|.

    ind counts injective maps V(H) -> {1..n} that map edges to edges and
    non-edges to non-edges.  All maps into {1..N} are enumerated once by
    backtracking and bucketed by their largest image vertex.
    """
    verts = sorted(h.vertices)
    k = len(verts)
    if k > MAX_PATTERN_VERTICES:
        raise TooLargePattern(f"pattern has {k} vertices (limit {MAX_PATTERN_VERTICES})")
    if n_max < max(k, 1):
        raise ValueError("N must be at least |V(H)|")
    adj_h = {(a, b) for a in verts for b in verts if a != b and edge(a, b) in h.edges}
    adj_g: dict[tuple[int, int], bool] = {}

    def adjacent(x: int, y: int) -> bool:
        key = (x, y) if x < y else (y, x)
        if key not in adj_g:
            adj_g[key] = g.contains(pair_label(edge(*key)))
        return adj_g[key]

    by_max = [0] * (n_max + 1)
    image: list[int] = []

    def extend(i: int, used: set[int]) -> None:
        if i == k:
            by_max[max(image, default=0)] += 1
            return
        for x in range(1, n_max + 1):
            if x in used:
                continue
            if all(adjacent(x, image[j]) == ((verts[i], verts[j]) in adj_h) for j in range(i)):
                image.append(x)
                used.add(x)
                extend(i + 1, used)
                used.discard(x)
                image.pop()

    extend(0, set())
    values, running = [], 0
    start = max(k, 2)
    for n in range(0, n_max + 1):
        running += by_max[n]
        if n >= start:
            values.append((n, Fraction(running * factorial(n - k), factorial(n))))
    return LimitingHomDensity(h, tuple(values))


def monotone_subsequence(values: Sequence[Fraction]) -> list[int]:
    """Indices of the suffix maxima: a non-increasing, hence convergent, subsequence."""
    out, best = [], None
    for i in range(len(values) - 1, -1, -1):
        if best is None or values[i] >= best:
            best = values[i]
            out.append(i)
    return out[::-1]
