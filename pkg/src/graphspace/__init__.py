"""graphspace: exact computations on countable labelled graphs.

Graphs on the vertex set {1, 2, ...} are identified with sets of edge
labels.  The package provides the metric structure on that space, indicator
functions of finite patterns, a probe-based derivative calculus and
edge-density constructions.
"""

from .core import (
    CANONICAL,
    COMPLETE,
    EMPTY,
    Cofinite,
    EdgeLabeling,
    Finite,
    Graph,
    Oracle,
    Periodic,
    Permutation,
    classify,
    cofinite,
    complement,
    edge,
    finite,
    from_edges,
    intersect,
    label,
    periodic,
    sym_diff,
    unlabel,
)
from .errors import GraphSpaceError
from .metrics import DyadicInterval, Geometric, Tabulated, ZetaFn, dist, truncate, weak_norm, zeta_norm

__version__ = "0.1.0"

__all__ = [
    "CANONICAL",
    "COMPLETE",
    "EMPTY",
    "Cofinite",
    "DyadicInterval",
    "EdgeLabeling",
    "Finite",
    "Geometric",
    "Graph",
    "GraphSpaceError",
    "Oracle",
    "Periodic",
    "Permutation",
    "Tabulated",
    "ZetaFn",
    "classify",
    "cofinite",
    "complement",
    "dist",
    "edge",
    "finite",
    "from_edges",
    "intersect",
    "label",
    "periodic",
    "sym_diff",
    "truncate",
    "unlabel",
    "weak_norm",
    "zeta_norm",
]
