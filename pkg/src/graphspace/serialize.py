"""JSON and CSV interchange for graphs, weights, combos, verdicts and trajectories.

Rationals always travel as "p/q" strings (integers as "p").
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any

from .calculus import DerivativeVerdict
from .core import (
    CANONICAL,
    Cofinite,
    EdgeLabeling,
    Finite,
    Graph,
    Periodic,
    cofinite,
    finite,
    from_edges,
    periodic,
)
from .density import DensityTrajectory
from .homind import IndicatorCombo, Pattern, Term
from .metrics import DyadicInterval, Geometric, Tabulated, WeightFn


class FormatError(ValueError):
    """Malformed interchange data; the message names the offending field."""


def rat(x) -> str:
    return str(Fraction(x))


def parse_rat(s, where: str = "value") -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise FormatError(f"{where}: expected an exact rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise FormatError(f"{where}: cannot parse rational {s!r}") from exc


def _int_list(obj: dict, key: str, where: str) -> list[int]:
    vals = obj.get(key, [])
    if not isinstance(vals, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in vals):
        raise FormatError(f"{where}.{key}: expected a list of integers")
    if any(v < 1 for v in vals):
        raise FormatError(f"{where}.{key}: labels must be >= 1")
    return vals


# --------------------------------------------------------------------------
# Graphs
# --------------------------------------------------------------------------


def graph_to_json(g: Graph) -> dict:
    if isinstance(g, Finite):
        return {"repr": "finite", "labels": sorted(g.labels)}
    if isinstance(g, Cofinite):
        return {"repr": "cofinite", "missing": sorted(g.missing)}
    if isinstance(g, Periodic):
        if g.is_single_progression:
            (r,) = g.residues
            start = g.start + (r - g.start) % g.stride
            return {"repr": "periodic", "base": sorted(g.base), "tail": {"start": start, "stride": g.stride}}
        return {
            "repr": "periodic",
            "base": sorted(g.base),
            "tail": {"start": g.start, "stride": g.stride, "residues": sorted(g.residues)},
        }
    raise FormatError(f"{type(g).__name__} graphs have no JSON form")


def graph_from_json(obj: Any, labeling: EdgeLabeling = CANONICAL, where: str = "graph") -> Graph:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    if "edges" in obj and "repr" not in obj:
        edges = obj["edges"]
        if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e) for e in edges
        ):
            raise FormatError(f"{where}.edges: expected a list of [i, j] pairs")
        try:
            return from_edges(edges, labeling)
        except ValueError as exc:
            raise FormatError(f"{where}.edges: {exc}") from exc
    kind = obj.get("repr")
    if kind == "finite":
        return finite(_int_list(obj, "labels", where))
    if kind == "cofinite":
        return cofinite(_int_list(obj, "missing", where))
    if kind == "periodic":
        base = _int_list(obj, "base", where)
        tail = obj.get("tail")
        if not isinstance(tail, dict):
            raise FormatError(f"{where}.tail: expected an object with start and stride")
        start, stride = tail.get("start"), tail.get("stride")
        if not isinstance(start, int) or not isinstance(stride, int) or start < 1 or stride < 1:
            raise FormatError(f"{where}.tail: start and stride must be positive integers")
        residues = tail.get("residues")
        if residues is not None and (
            not isinstance(residues, list) or not all(isinstance(r, int) for r in residues)
        ):
            raise FormatError(f"{where}.tail.residues: expected a list of integers")
        return periodic(base, start, stride, residues)
    raise FormatError(f"{where}.repr: unknown representation {kind!r}")


def pattern_to_json(h: Pattern) -> dict:
    return {"edges": h.pairs()}


def pattern_from_json(obj: Any, where: str = "H") -> Pattern:
    if not isinstance(obj, dict) or not isinstance(obj.get("edges"), list):
        raise FormatError(f"{where}: expected {{\"edges\": [[i, j], ...]}}")
    try:
        return Pattern.from_pairs(obj["edges"])
    except (ValueError, TypeError) as exc:
        raise FormatError(f"{where}.edges: {exc}") from exc


# --------------------------------------------------------------------------
# Weights
# --------------------------------------------------------------------------


def weight_to_json(phi: WeightFn) -> dict:
    if isinstance(phi, Geometric):
        return {"kind": "geometric", "a": rat(phi.a)}
    if isinstance(phi, Tabulated):
        return {
            "kind": "tabulated",
            "values": [rat(v) for v in phi.values],
            "tail": "geometric-from",
            "ratio": rat(phi.ratio),
        }
    raise FormatError(f"{type(phi).__name__} weights have no JSON form")


def weight_from_json(obj: Any, where: str = "weight") -> WeightFn:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    kind = obj.get("kind")
    try:
        if kind == "geometric":
            return Geometric(parse_rat(obj.get("a"), f"{where}.a"))
        if kind == "tabulated":
            if obj.get("tail") != "geometric-from":
                raise FormatError(f"{where}.tail: only \"geometric-from\" tails are supported")
            vals = obj.get("values")
            if not isinstance(vals, list):
                raise FormatError(f"{where}.values: expected a list")
            return Tabulated(
                tuple(parse_rat(v, f"{where}.values[{i}]") for i, v in enumerate(vals)),
                parse_rat(obj.get("ratio"), f"{where}.ratio"),
            )
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from exc
    raise FormatError(f"{where}.kind: unknown weight kind {kind!r}")


# --------------------------------------------------------------------------
# Combos, intervals and verdicts
# --------------------------------------------------------------------------


def combo_to_json(c: IndicatorCombo) -> list[dict]:
    return [{"coef": rat(t.coef), "H": pattern_to_json(t.pattern), "flavor": t.flavor} for t in c.terms]


def combo_from_json(obj: Any) -> IndicatorCombo:
    if not isinstance(obj, list):
        raise FormatError("combo: expected a list of terms")
    terms = []
    for i, t in enumerate(obj):
        if not isinstance(t, dict):
            raise FormatError(f"combo[{i}]: expected an object")
        flavor = t.get("flavor", "inj")
        if flavor not in ("inj", "ind"):
            raise FormatError(f"combo[{i}].flavor: expected inj or ind")
        terms.append(Term(parse_rat(t.get("coef"), f"combo[{i}].coef"), pattern_from_json(t.get("H"), f"combo[{i}].H"), flavor))
    return IndicatorCombo(tuple(terms))


def interval_to_json(x: DyadicInterval, with_float: bool = False) -> dict:
    out: dict = {"lo": rat(x.lo), "hi": rat(x.hi), "exact": x.exact}
    if with_float:
        out["float"] = float(x.mid)
    return out


def verdict_to_json(v: DerivativeVerdict, with_float: bool = False) -> dict:
    out: dict = {"status": v.status}
    if v.value is not None:
        out["value"] = rat(v.value.lo) if v.value.exact else interval_to_json(v.value)
        if with_float:
            out["value_float"] = float(v.value.mid)
    if v.witness is not None:
        out["witness"] = [{"probe": name, "limit": rat(val)} for name, val in v.witness]
    if v.flags:
        out["flags"] = list(v.flags)
    if v.ratio_trace is not None:
        out["ratio_trace"] = [rat(r) for r in v.ratio_trace]
    out["probes"] = [{"name": name, "trace": [rat(q) for q in qs]} for name, qs in v.traces.items()]
    return out


# --------------------------------------------------------------------------
# Density output
# --------------------------------------------------------------------------

CSV_HEADER = ("n", "edges", "density_num", "density_den")


def trajectory_to_csv(t: DensityTrajectory, with_float: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + (("density_float",) if with_float else ()))
    for p in t.points:
        d = p.density
        row = [p.n, p.edges, d.numerator, d.denominator]
        if with_float:
            row.append(repr(float(d)))
        w.writerow(row)
    return buf.getvalue()


def trajectory_from_csv(text: str) -> list[tuple[int, int, Fraction]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0][:4]) != CSV_HEADER:
        raise FormatError(f"trajectory CSV: header must start with {','.join(CSV_HEADER)}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            n, m, num, den = (int(x) for x in row[:4])
        except ValueError as exc:
            raise FormatError(f"trajectory CSV line {lineno}: {exc}") from exc
        out.append((n, m, Fraction(num, den)))
    return out


def marks_to_json(marks: dict) -> list[dict]:
    return [{"target": rat(t), "indices": list(ns)} for t, ns in sorted(marks.items())]


def dumps(obj: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def loads(text: str, where: str = "input") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{where}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc

