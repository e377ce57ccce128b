"""Random graph generators shared by the property and acceptance tests."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from graphspace.core import cofinite, finite, periodic

label_sets = st.frozensets(st.integers(1, 30), max_size=8)


@st.composite
def finite_graphs(draw):
    return finite(draw(label_sets))


@st.composite
def cofinite_graphs(draw):
    return cofinite(draw(label_sets))


@st.composite
def periodic_graphs(draw, strides=(2, 3, 4)):
    base = draw(st.frozensets(st.integers(1, 20), max_size=5))
    start = draw(st.integers(1, 30))
    stride = draw(st.sampled_from(strides))
    return periodic(base, start, stride)


graphs = st.one_of(finite_graphs(), cofinite_graphs(), periodic_graphs())
# a shared stride keeps every sym_diff of three graphs representable
same_stride_graphs = st.one_of(finite_graphs(), cofinite_graphs(), periodic_graphs(strides=(2,)))


def rand_labels(rng: random.Random, hi=24, k_max=6):
    return rng.sample(range(1, hi + 1), rng.randint(0, k_max))


def rand_finite(rng):
    return finite(rand_labels(rng))


def rand_cofinite(rng):
    return cofinite(rand_labels(rng))


def rand_proper(rng, strides=(2, 3, 4)):
    return periodic(rand_labels(rng, 16, 4), rng.randint(1, 24), rng.choice(strides))


def rand_graph(rng, strides=(2, 3, 4)):
    kind = rng.randrange(3)
    if kind == 0:
        return rand_finite(rng)
    if kind == 1:
        return rand_cofinite(rng)
    return rand_proper(rng, strides)


def rand_rational(rng, lo, hi, den_max=12):
    """Uniform-ish rational strictly inside (lo, hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    while True:
        d = rng.randint(1, den_max)
        x = lo + (hi - lo) * Fraction(rng.randint(1, 4 * d - 1), 4 * d)
        if lo < x < hi:
            return x
