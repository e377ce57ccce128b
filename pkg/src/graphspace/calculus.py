"""Derivatives of real-valued graph functions through the binary encoding.

A graph G is sent to x = ||G||_2 in [0, 1].  The derivative of f at G is the
limit of

    (f(G1) - f(G)) / (||G1||_2 - ||G||_2)

as G1 -> G through graphs that are neither finite nor cofinite.  Limits can
only be probed, never proved, so :func:`derivative` walks explicit probe
families G1 = G Δ D_k with ||D_k||_2 -> 0 and reports what the exact
difference quotients do.  ``converged`` means the quotients settled to depth;
it is evidence, not a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterator, Sequence

from .core import (
    COMPLETE,
    EMPTY,
    Finite,
    Graph,
    Periodic,
    Permutation,
    classify,
    pair_label,
    periodic,
    sym_diff,
)
from .errors import (
    CLimitMissing,
    EndpointExcluded,
    InadmissibleProbe,
    UnknownPartDerivative,
)
from .homind import IndicatorCombo, IndicatorFn
from .metrics import (
    DEFAULT_DEPTH,
    DyadicInterval,
    Geometric,
    Relabelled,
    Tabulated,
    TailShift,
    WeightFn,
    ZetaFn,
    dist,
    weak_norm,
    zeta_norm,
)

DEFAULT_TOL = Fraction(1, 2**20)
DEFAULT_MAX_DEPTH = 40
DEFAULT_WINDOW = 5

Twist = Permutation | TailShift | None


def encode(g: Graph, depth: int = DEFAULT_DEPTH, sigma: Twist = None) -> DyadicInterval:
    """||G||_2, optionally with labels read through ``sigma``."""
    return weak_norm(g, 2, depth, sigma)


def _exact_encode(g: Graph, sigma: Twist = None) -> Fraction:
    x = encode(g, sigma=sigma)
    if not x.exact:
        raise InadmissibleProbe("difference quotients need exactly representable graphs")
    return x.lo


# --------------------------------------------------------------------------
# Graph functions
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GraphFn:
    """A function on graph space with exact rational values.

    ``horizon`` is the largest label the function singles out; probes are
    started beyond it.
    """

    evaluate: Callable[[Graph], Fraction]
    tag: str = "user"
    name: str = "f"
    horizon: int = 0

    def __call__(self, g: Graph) -> Fraction:
        return Fraction(self.evaluate(g))


def encode_fn() -> GraphFn:
    return GraphFn(lambda g: encode(g).value, "encode", "encode")


def constant_fn(c) -> GraphFn:
    c = Fraction(c)
    return GraphFn(lambda g: c, "constant", f"const({c})")


def distance_fn(g0: Graph, phi: WeightFn, name: str | None = None) -> GraphFn:
    """G -> d_phi(G0, G), which must be exact at every evaluated graph."""
    return GraphFn(
        lambda g: dist(g0, g, phi).value,
        "distance",
        name or f"dist({_short(g0)})",
        g0.horizon,
    )


def zeta_fn(zeta: ZetaFn) -> GraphFn:
    return GraphFn(lambda g: zeta_norm(g, zeta), "zeta_norm", zeta.name)


def indicator_fn(f: IndicatorFn | IndicatorCombo, name: str = "indicator") -> GraphFn:
    if isinstance(f, IndicatorFn):
        horizon = max(f.support, default=0)
    else:
        horizon = max((pair_label(e) for t in f.terms for e in t.pattern.closure), default=0)
    return GraphFn(lambda g: Fraction(f(g)), "indicator", name, horizon)


def translated(f: GraphFn, g0: Graph) -> GraphFn:
    """G -> f(G Δ G0)."""
    return GraphFn(
        lambda g: f(sym_diff(g, g0)),
        "translated",
        f"{f.name}(· Δ {_short(g0)})",
        max(f.horizon, g0.horizon),
    )


def _short(g: Graph) -> str:
    if g == EMPTY:
        return "0"
    if g == COMPLETE:
        return "K"
    return classify(g)


# --------------------------------------------------------------------------
# Probes
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProbeFamily:
    """A sequence k -> D_k (k = 1, 2, ...) of shrinking perturbations."""

    name: str
    perturbation: Callable[[int], Graph]
    side: str = "two-sided"
    flags: tuple[str, ...] = ()

    def __call__(self, k: int) -> Graph:
        return self.perturbation(k)


def tail_probes(start: int, stride: int = 2, name: str | None = None) -> ProbeFamily:
    """D_k = {start + k - 1, start + k - 1 + stride, ...}."""
    return ProbeFamily(
        name or f"tail{stride}@{start}",
        lambda k: periodic((), start + k - 1, stride),
        "two-sided",
        ("tail",),
    )


def _labels_where(g: Graph, start: int, present: bool) -> Iterator[int]:
    n = start
    while True:
        if g.contains(n) == present:
            yield n
        n += 1


def toggle_probes(g: Graph, start: int, remove: bool) -> ProbeFamily:
    """Single-edge toggles at the labels >= start that ``g`` has (remove) or lacks (add)."""
    cache: list[int] = []
    it = _labels_where(g, start, remove)

    def pick(k: int) -> Graph:
        while len(cache) < k:
            cache.append(next(it))
        return Finite(frozenset({cache[k - 1]}))

    side = "decreasing" if remove else "increasing"
    return ProbeFamily(f"{'remove' if remove else 'add'}@{start}", pick, side, ("toggle",))


def default_probes(g: Graph, f: GraphFn | None = None, beyond: int = 0) -> list[ProbeFamily]:
    """Tail probes of both parities for finite/cofinite G, add/remove toggles otherwise."""
    start = max(g.horizon, f.horizon if f is not None else 0, beyond) + 1
    if classify(g) in ("finite", "cofinite"):
        return [
            tail_probes(start, 2, f"tail-even@{start}"),
            tail_probes(start + 1, 2, f"tail-odd@{start + 1}"),
        ]
    return [toggle_probes(g, start, remove=False), toggle_probes(g, start, remove=True)]


def _period(g: Graph) -> int:
    return g.stride if isinstance(g, Periodic) else 1


def _half_split(block: Graph, period: int, start: int, k: int) -> Graph:
    """Every other period of ``block`` from label ``start + k`` on.

    ``block`` is eventually periodic with period dividing ``period``; keeping
    only the labels in even-numbered periods leaves infinitely many labels
    both inside and outside the probe in each infinite residue class.
    """
    s = 2 * period
    base = max(start + k, (block.horizon if not isinstance(block, Finite) else 0) + 1)
    residues = {r for r in range(s) if r < period and block.contains(base + (r - base) % s)}
    if not residues:
        return EMPTY
    return periodic((), base, s, residues)


def translation_probe_families(g: Graph, g0: Graph) -> tuple[ProbeFamily, ProbeFamily]:
    """The two probe families that break translation by a proper graph G0.

    The first lives inside G0 (ratio -1), the second outside it (ratio +1).
    Both keep every infinite block among G \\ G0, G ∩ G0, G0 \\ G, rest split
    into two infinite halves on the probe's side of G0.
    """
    if classify(g0) != "proper":
        raise InadmissibleProbe("translation probes need G0 neither finite nor cofinite")
    period = lcm(_period(g), _period(g0))
    start = max(g.horizon, g0.horizon) + 1
    outside = sym_diff(g0, COMPLETE)

    def inside_k(k: int) -> Graph:
        return _half_split(g0, period, start, k)

    def outside_k(k: int) -> Graph:
        return _half_split(outside, period, start, k)

    return (
        ProbeFamily("inside-G0", inside_k, "two-sided", ("translation", "inside")),
        ProbeFamily("outside-G0", outside_k, "two-sided", ("translation", "outside")),
    )


def ratio_T(g: Graph, g0: Graph, probe: Graph) -> Fraction:
    """(||G Δ P|| - ||G||) / (||G Δ G0 Δ P|| - ||G Δ G0||), exactly."""
    h = sym_diff(g, g0)
    num = _exact_encode(sym_diff(g, probe)) - _exact_encode(g)
    den = _exact_encode(sym_diff(h, probe)) - _exact_encode(h)
    return num / den


# --------------------------------------------------------------------------
# Derivative verdicts
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DerivativeVerdict:
    status: str
    value: DyadicInterval | None = None
    witness: tuple | None = None
    traces: dict = field(default_factory=dict, compare=False)
    flags: tuple[str, ...] = ()
    ratio_trace: tuple[Fraction, ...] | None = field(default=None, compare=False)

    @property
    def converged(self) -> bool:
        return self.status == "converged"


@dataclass(frozen=True)
class _Trace:
    name: str
    steps: tuple[Fraction, ...]
    quotients: tuple[Fraction, ...]


def _trace(
    f: GraphFn,
    g: Graph,
    family: ProbeFamily,
    max_depth: int,
    sigma: Twist,
) -> _Trace:
    fg = f(g)
    xg = _exact_encode(g, sigma)
    check_sign = sigma is None or isinstance(sigma, TailShift)
    steps, quotients = [], []
    for k in range(1, max_depth + 1):
        d = family(k)
        g1 = sym_diff(g, d)
        if classify(g1) != "proper":
            raise InadmissibleProbe(
                f"probe {family.name}[{k}] moves G to a {classify(g1)} graph"
            )
        h = _exact_encode(g1, sigma) - xg
        if h == 0:
            raise InadmissibleProbe(f"probe {family.name}[{k}] has zero denominator")
        if check_sign:
            first = min(_first_labels(d))
            above = not g.contains(first)
            if (h > 0) != above:
                raise AssertionError(f"denominator sign disagrees with lexicographic order at {family.name}[{k}]")
        steps.append(h)
        quotients.append((f(g1) - fg) / h)
    return _Trace(family.name, tuple(steps), tuple(quotients))


def _first_labels(d: Graph) -> Iterator[int]:
    if isinstance(d, Finite):
        yield from d.labels
    else:
        n = 1
        while not d.contains(n):
            n += 1
        yield n


def _judge(traces: Sequence[_Trace], tol: Fraction, window: int) -> tuple[str, DyadicInterval | None, tuple | None]:
    stable, growing = [], False
    for t in traces:
        tail = t.quotients[-window:]
        lo, hi = min(tail), max(tail)
        if hi - lo <= 2 * tol:
            stable.append((t.name, lo, hi))
            continue
        mags = [abs(q) for q in tail]
        if all(b > a for a, b in zip(mags, mags[1:])):
            growing = True
    if len(stable) == len(traces):
        lo = min(s[1] for s in stable)
        hi = max(s[2] for s in stable)
        if hi - lo <= 2 * tol:
            return "converged", DyadicInterval(lo, hi), None
    if growing:
        return "diverged", None, None
    if len(stable) >= 2:
        mids = sorted(((s[1] + s[2]) / 2, s[0]) for s in stable)
        (vlo, nlo), (vhi, nhi) = mids[0], mids[-1]
        if vhi - vlo > 2 * tol:
            return "oscillating", None, ((nlo, vlo), (nhi, vhi))
    return "inconclusive", None, None


def _check_point(g: Graph) -> None:
    if g == EMPTY or g == COMPLETE:
        raise EndpointExcluded("the derivative is not defined at the empty or complete graph")


def derivative(
    f: GraphFn,
    g: Graph,
    probes: Sequence[ProbeFamily] | None = None,
    tol=DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    window: int = DEFAULT_WINDOW,
    sigma: Twist = None,
) -> DerivativeVerdict:
    """Probe the difference quotients of ``f`` at ``g`` along each family.

    ``converged``: every family's last ``window`` quotients sit within tol of
    one common value.  ``oscillating``: two families settle more than 2 tol
    apart.  ``diverged``: some family's quotients grow in magnitude across the
    window.  Otherwise ``inconclusive``.
    """
    _check_point(g)
    tol = Fraction(tol)
    if window < 2 or max_depth < window:
        raise ValueError("need 2 <= window <= max_depth")
    if probes is None:
        probes = default_probes(g, f)
    traces = [_trace(f, g, p, max_depth, sigma) for p in probes]
    status, value, witness = _judge(traces, tol, window)
    return DerivativeVerdict(
        status,
        value,
        witness,
        {t.name: t.quotients for t in traces},
    )


# --------------------------------------------------------------------------
# Closed forms for distance functions
# --------------------------------------------------------------------------


def c_phi(phi: WeightFn, depth: int = DEFAULT_DEPTH, tol=DEFAULT_TOL) -> Fraction:
    """lim 2^n phi(n), or CLimitMissing when it does not exist."""
    if isinstance(phi, Relabelled) and isinstance(phi.sigma, Permutation):
        return c_phi(phi.base, depth, tol)
    if isinstance(phi, Geometric):
        if phi.a == 2:
            return Fraction(1)
        if phi.a > 2:
            return Fraction(0)
        raise CLimitMissing(f"2^n a^-n diverges for a = {phi.a} < 2")
    if isinstance(phi, Tabulated):
        two_r = 2 * phi.ratio
        if two_r < 1:
            return Fraction(0)
        if two_r == 1:
            return phi.values[-1] * 2**phi.size
        raise CLimitMissing(f"2^n phi(n) grows like (2 * {phi.ratio})^n")
    seq = [2**n * phi(n) for n in range(depth, 2 * depth + 1)]
    if max(seq) - min(seq) > Fraction(tol):
        raise CLimitMissing(f"2^n phi(n) not Cauchy on labels {depth}..{2 * depth}")
    return seq[-1]


@dataclass(frozen=True)
class DistanceDerivative:
    value: Fraction
    case: str  # "same" (both finite or both cofinite) or "mixed"
    c: Fraction


def distance_derivative(g0: Graph, phi: WeightFn, g: Graph) -> DistanceDerivative:
    """Closed-form derivative of G -> d_phi(G0, G) at G: +c_phi or -c_phi."""
    _check_point(g)
    k0 = classify(g0)
    if k0 not in ("finite", "cofinite"):
        raise ValueError("G0 must be finite or cofinite")
    kg, kd = classify(g), classify(sym_diff(g, g0))
    if kg not in ("finite", "cofinite") or kd not in ("finite", "cofinite"):
        raise ValueError("G and G Δ G0 must both be finite or cofinite")
    c = c_phi(phi)
    case = "same" if kg == kd else "mixed"
    return DistanceDerivative(c if case == "same" else -c, case, c)


# --------------------------------------------------------------------------
# Critical points
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalReport:
    verdict: DerivativeVerdict
    critical: bool
    second: DyadicInterval | None
    classification: str  # not_critical | local_min | local_max | inconclusive


def critical_point_check(
    f: GraphFn,
    g: Graph,
    probes: Sequence[ProbeFamily] | None = None,
    tol=DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    window: int = DEFAULT_WINDOW,
) -> CriticalReport:
    """First-derivative verdict plus a second-derivative estimate.

    The second derivative along a family is estimated from its last two
    steps as 2 (q_K - q_(K-1)) / (h_K - h_(K-1)), which is exact for
    quadratics in the encoding.
    """
    _check_point(g)
    tol = Fraction(tol)
    if probes is None:
        probes = default_probes(g, f)
    traces = [_trace(f, g, p, max_depth, None) for p in probes]
    status, value, witness = _judge(traces, tol, window)
    verdict = DerivativeVerdict(status, value, witness, {t.name: t.quotients for t in traces})
    critical = status == "converged" and max(abs(value.lo), abs(value.hi)) <= tol
    if not critical:
        return CriticalReport(verdict, False, None, "not_critical")
    seconds = [
        2 * (t.quotients[-1] - t.quotients[-2]) / (t.steps[-1] - t.steps[-2])
        for t in traces
    ]
    second = DyadicInterval(min(seconds), max(seconds))
    if second.lo > tol:
        kind = "local_min"
    elif second.hi < -tol:
        kind = "local_max"
    else:
        kind = "inconclusive"
    return CriticalReport(verdict, True, second, kind)


# --------------------------------------------------------------------------
# Product and chain rules
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Known:
    """A graph function together with its derivative at the query graph (None if unknown)."""

    fn: GraphFn
    derivative: Fraction | None


@dataclass(frozen=True, eq=False)
class Outer:
    """A real function h with derivative dh, for the chain rule."""

    h: Callable[[Fraction], Fraction]
    dh: Callable[[Fraction], Fraction]
    name: str = "h"


@dataclass(frozen=True)
class Combined:
    fn: GraphFn
    derivative: Fraction


def combine(rule: str, parts: Sequence, at: Graph) -> Combined:
    """Assemble (f g)' = f g' + f' g or (h ∘ f)' = h'(f) f' at ``at``.

    ``product`` takes any number of :class:`Known` parts; ``chain`` takes
    ``(Outer, Known)``.
    """
    if rule == "product":
        parts = list(parts)
        if not parts:
            raise ValueError("product of no parts")
        for p in parts:
            if p.derivative is None:
                raise UnknownPartDerivative(f"no derivative known for {p.fn.name}")
        fns = [p.fn for p in parts]

        def prod(g: Graph) -> Fraction:
            out = Fraction(1)
            for fn in fns:
                out *= fn(g)
            return out

        values = [fn(at) for fn in fns]
        total = Fraction(0)
        for i, p in enumerate(parts):
            term = Fraction(p.derivative)
            for j, v in enumerate(values):
                if j != i:
                    term *= v
            total += term
        name = " * ".join(fn.name for fn in fns)
        return Combined(GraphFn(prod, "product", name, max(fn.horizon for fn in fns)), total)
    if rule == "chain":
        outer, inner = parts
        if inner.derivative is None:
            raise UnknownPartDerivative(f"no derivative known for {inner.fn.name}")
        fn = inner.fn
        composed = GraphFn(lambda g: Fraction(outer.h(fn(g))), "chain", f"{outer.name}({fn.name})", fn.horizon)
        return Combined(composed, Fraction(outer.dh(fn(at))) * Fraction(inner.derivative))
    raise ValueError(f"unknown rule {rule!r}")


# --------------------------------------------------------------------------
# Relabelled derivatives
# --------------------------------------------------------------------------


def twisted_derivative(
    f: GraphFn,
    g: Graph,
    sigma: Permutation | TailShift,
    probes: Sequence[ProbeFamily] | None = None,
    tol=DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    window: int = DEFAULT_WINDOW,
) -> DerivativeVerdict:
    """Derivative with the encoding read through a relabelling ``sigma``.

    A finite-support permutation leaves the verdict unchanged once probes sit
    beyond its support.  A tail shift by n0 scales every denominator by
    2^-n0; the per-probe ratio of twisted to plain quotients is reported in
    ``ratio_trace`` and the verdict is flagged ``not_finitary``.
    """
    if isinstance(sigma, Permutation):
        beyond = max(sigma.support, default=0)
        flags = ()
    elif isinstance(sigma, TailShift):
        beyond = sigma.start
        flags = ("not_finitary",)
    else:
        raise TypeError("sigma must be a Permutation or a TailShift")
    if probes is None:
        probes = default_probes(g, f, beyond)
    twisted = derivative(f, g, probes, tol, max_depth, window, sigma)
    ratios = None
    if isinstance(sigma, TailShift):
        first = probes[0]
        plain = _trace(f, g, first, max_depth, None)
        bent = _trace(f, g, first, max_depth, sigma)
        ratios = tuple(a / b for a, b in zip(plain.steps, bent.steps))
    return DerivativeVerdict(
        twisted.status,
        twisted.value,
        twisted.witness,
        twisted.traces,
        flags,
        ratios,
    )
