"""Reference implementations written independently of the package.

Everything here works on plain Python sets and brute-force enumeration so
that tests compare the library against code sharing none of its logic.
"""

from fractions import Fraction
from itertools import combinations, permutations
from math import comb


def colex_pairs(n_vertices):
    """All pairs {i < j} with j <= n_vertices, listed in colex order."""
    return [(i, j) for j in range(2, n_vertices + 1) for i in range(1, j)]


def label_table(n_vertices):
    return {p: k for k, p in enumerate(colex_pairs(n_vertices), start=1)}


def members_upto(contains, depth):
    return {n for n in range(1, depth + 1) if contains(n)}


def norm_enclosure(contains, a, depth):
    """Partial sum up to ``depth`` and the worst-case tail bound beyond it."""
    a = Fraction(a)
    head = sum((a ** -n for n in range(1, depth + 1) if contains(n)), Fraction(0))
    return head, head + a ** -depth / (a - 1)


def truncation_bound(a, eps):
    """Smallest integer N >= 1 - log(eps (a-1)) / log a, found exactly."""
    a, eps = Fraction(a), Fraction(eps)
    n = 1
    while a ** (n - 1) * eps * (a - 1) < 1:
        n += 1
    while n > 1 and a ** (n - 2) * eps * (a - 1) >= 1:
        n -= 1
    return n


def graph_bits(labels, n_labels=10):
    return sum(1 << (n - 1) for n in labels if n <= n_labels)


def induced_on(pattern_pairs, graph_pairs):
    """1 iff the graph restricted to the pattern's vertices is the pattern."""
    verts = {v for p in pattern_pairs for v in p}
    inside = {p for p in graph_pairs if p[0] in verts and p[1] in verts}
    return int(inside == set(pattern_pairs))


def subgraph_of(pattern_pairs, graph_pairs):
    return int(set(pattern_pairs) <= set(graph_pairs))


def induced_count(pattern_pairs, graph_pairs, n):
    """Number of injections V(H) -> {1..n} preserving edges and non-edges."""
    verts = sorted({v for p in pattern_pairs for v in p})
    hp = {frozenset(p) for p in pattern_pairs}
    gp = {frozenset(p) for p in graph_pairs}
    total = 0
    for img in permutations(range(1, n + 1), len(verts)):
        m = dict(zip(verts, img))
        if all(
            (frozenset((u, v)) in hp) == (frozenset((m[u], m[v])) in gp)
            for u, v in combinations(verts, 2)
        ):
            total += 1
    return total


def edge_density(graph_pairs, n):
    inside = sum(1 for i, j in graph_pairs if j <= n)
    return Fraction(inside, comb(n, 2))
