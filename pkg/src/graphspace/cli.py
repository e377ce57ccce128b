"""Command-line interface: ``graphspace <command> ...``.

Graphs are given inline or as JSON files:

    empty | complete | finite:1,3 | cofinite:2 | periodic:START:STRIDE[:BASE]
    edges:1-2,2-3 | path3 | triangle | K2 | ... | FILE.json | '{"repr": ...}'

Weights: ``geom2``, ``geom3/2`` or a weight JSON file.  Exit status is 0 on
success, 1 on a domain error (a JSON error object goes to stderr) and 2 on a
usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import calculus, density, homind, metrics
from .core import (
    COMPLETE,
    EMPTY,
    CANONICAL,
    EdgeLabeling,
    Graph,
    Permutation,
    classify,
    from_edges,
    intersect,
    label,
    periodic,
    sym_diff,
    unlabel,
    cofinite,
    edge,
    finite,
)
from .errors import GraphSpaceError
from .serialize import (
    FormatError,
    combo_to_json,
    dumps,
    graph_from_json,
    graph_to_json,
    interval_to_json,
    loads,
    marks_to_json,
    parse_rat,
    pattern_from_json,
    pattern_to_json,
    rat,
    trajectory_to_csv,
    verdict_to_json,
    weight_from_json,
)

DEPTH_ENV = "GRAPHSPACE_DEPTH"


@dataclass(frozen=True)
class Config:
    labeling: EdgeLabeling = CANONICAL
    weight: metrics.WeightFn = metrics.Geometric(2)
    tol: Fraction = calculus.DEFAULT_TOL
    window: int = calculus.DEFAULT_WINDOW
    max_depth: int = calculus.DEFAULT_MAX_DEPTH
    depth: int = metrics.DEFAULT_DEPTH
    fmt: str = "json"
    with_float: bool = False


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# Argument parsing helpers
# --------------------------------------------------------------------------


def _ints(text: str, where: str) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"{where}: expected comma-separated integers, got {text!r}") from exc


def _read_json_arg(text: str, where: str):
    if text.lstrip().startswith(("{", "[")):
        return loads(text, where)
    path = Path(text)
    if path.suffix == ".json" or path.is_file():
        try:
            return loads(path.read_text(encoding="utf-8"), str(path))
        except OSError as exc:
            raise UsageError(f"{where}: cannot read {path}: {exc.strerror}") from exc
    return None


def parse_graph(text: str, cfg: Config = Config(), where: str = "graph") -> Graph:
    obj = _read_json_arg(text, where)
    if obj is not None:
        return graph_from_json(obj, cfg.labeling, where)
    kind, _, rest = text.partition(":")
    if kind == "empty" and not rest:
        return EMPTY
    if kind == "complete" and not rest:
        return COMPLETE
    if kind == "finite":
        return finite(_ints(rest, where))
    if kind == "cofinite":
        return cofinite(_ints(rest, where))
    if kind == "periodic":
        parts = rest.split(":")
        if len(parts) not in (2, 3):
            raise UsageError(f"{where}: expected periodic:START:STRIDE[:BASE], got {text!r}")
        start, stride = _ints(parts[0], where), _ints(parts[1], where)
        if len(start) != 1 or len(stride) != 1:
            raise UsageError(f"{where}: START and STRIDE must be single integers")
        base = _ints(parts[2], where) if len(parts) == 3 else []
        return periodic(base, start[0], stride[0])
    if kind == "edges":
        return from_edges(_pairs(rest, where), cfg.labeling)
    if text in homind.NAMED_PATTERNS:
        return from_edges(homind.NAMED_PATTERNS[text].pairs(), cfg.labeling)
    raise UsageError(f"{where}: cannot parse graph {text!r}")


def _pairs(text: str, where: str) -> list[tuple[int, int]]:
    out = []
    for item in filter(None, text.split(",")):
        a, sep, b = item.partition("-")
        if not sep:
            raise UsageError(f"{where}: edge {item!r} should look like i-j")
        try:
            out.append((int(a), int(b)))
        except ValueError as exc:
            raise UsageError(f"{where}: edge {item!r} should look like i-j") from exc
    return out


def parse_pattern(text: str, where: str = "pattern") -> homind.Pattern:
    if text in homind.NAMED_PATTERNS:
        return homind.NAMED_PATTERNS[text]
    if text.startswith("edges:"):
        return homind.Pattern.from_pairs(_pairs(text[6:], where))
    obj = _read_json_arg(text, where)
    if obj is not None:
        return pattern_from_json(obj, where)
    raise UsageError(f"{where}: cannot parse pattern {text!r}")


def parse_weight(text: str, where: str = "weight") -> metrics.WeightFn:
    if text.startswith("geom"):
        a = parse_rat(text[4:], where)
        if a <= 1:
            raise UsageError(f"{where}: geometric base must exceed 1")
        return metrics.Geometric(a)
    obj = _read_json_arg(text, where)
    if obj is not None:
        return weight_from_json(obj, where)
    raise UsageError(f"{where}: cannot parse weight {text!r}")


def parse_fn(text: str, cfg: Config) -> calculus.GraphFn:
    """encode | zero | dist:GRAPH[:WEIGHT] | zeta:P | inj:PATTERN | ind:PATTERN | indicator:ABSENT/PRESENT"""
    kind, _, rest = text.partition(":")
    if kind == "encode" and not rest:
        return calculus.encode_fn()
    if kind == "zero" and not rest:
        return calculus.constant_fn(0)
    if kind == "dist":
        g0, weight = _dist_parts(rest, cfg)
        return calculus.distance_fn(g0, weight, text)
    if kind == "zeta":
        return calculus.zeta_fn(metrics.ZetaFn.padic(parse_rat(rest or "2", "--fn zeta base")))
    if kind in ("inj", "ind"):
        h = parse_pattern(rest, "--fn pattern")
        combo = homind.IndicatorCombo((homind.Term(1, h, kind),))
        return calculus.indicator_fn(combo, text)
    if kind == "indicator":
        absent, sep, present = rest.partition("/")
        if not sep:
            raise UsageError("--fn indicator: expected indicator:ABSENT/PRESENT label lists")
        return calculus.indicator_fn(homind.IndicatorFn(_ints(absent, "--fn"), _ints(present, "--fn")), text)
    raise UsageError(f"--fn: cannot parse function {text!r}")


def _dist_parts(rest: str, cfg: Config) -> tuple[Graph, metrics.WeightFn]:
    graph_text, weight = rest, cfg.weight
    head, sep, tail = rest.rpartition(":")
    if sep and tail.startswith("geom"):
        graph_text, weight = head, parse_weight(tail, "--fn weight")
    return parse_graph(graph_text, cfg, "--fn graph"), weight


def parse_twist(text: str | None) -> Permutation | metrics.TailShift | None:
    """``(1 2)(3 4 5)`` cycles, or ``shift:N0[@START]``."""
    if not text:
        return None
    if text.startswith("shift:"):
        n0, _, start = text[6:].partition("@")
        try:
            return metrics.TailShift(int(n0), int(start or 1))
        except ValueError as exc:
            raise UsageError(f"--twist: cannot parse {text!r}") from exc
    cycles = []
    for chunk in text.replace(")", "").split("("):
        if chunk.strip():
            try:
                cycles.append([int(x) for x in chunk.replace(",", " ").split()])
            except ValueError as exc:
                raise UsageError(f"--twist: cannot parse cycle ({chunk})") from exc
    try:
        return Permutation.from_cycles(cycles)
    except ValueError as exc:
        raise UsageError(f"--twist: {exc}") from exc


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def _emit(obj) -> str:
    return dumps(obj)


def cmd_graph(args, cfg: Config) -> str:
    if args.action == "label":
        i, j = args.operands
        return str(label(edge(int(i), int(j)), cfg.labeling))
    if args.action == "unlabel":
        (n,) = args.operands
        e = unlabel(int(n), cfg.labeling)
        return _emit([e.i, e.j])
    graphs = [parse_graph(t, cfg, f"operand {k + 1}") for k, t in enumerate(args.operands)]
    if args.action == "show":
        (g,) = graphs
        return _emit(graph_to_json(g))
    if args.action == "classify":
        (g,) = graphs
        return classify(g)
    if args.action in ("symdiff", "intersect"):
        op = sym_diff if args.action == "symdiff" else intersect
        out = graphs[0]
        for g in graphs[1:]:
            out = op(out, g)
        return _emit(graph_to_json(out))
    if args.action == "truncate":
        (g,) = graphs
        t = metrics.truncate(g, args.a, args.eps, cfg.depth)
        return _emit({"graph": graph_to_json(t.graph), "bound": t.bound, "residual": interval_to_json(t.residual, cfg.with_float)})
    raise UsageError(f"unknown graph action {args.action!r}")


def _operand_count(action: str) -> tuple[int, int]:
    return {
        "label": (2, 2),
        "unlabel": (1, 1),
        "show": (1, 1),
        "classify": (1, 1),
        "truncate": (1, 1),
        "symdiff": (2, 64),
        "intersect": (2, 64),
    }[action]


def _interval_line(x: metrics.DyadicInterval, with_float: bool) -> str:
    text = str(x)
    if with_float:
        text += f" ({float(x.mid)!r})"
    return text


def cmd_norm(args, cfg: Config) -> str:
    g = parse_graph(args.graph, cfg)
    return _interval_line(metrics.weak_norm(g, args.a, cfg.depth), cfg.with_float)


def cmd_dist(args, cfg: Config) -> str:
    g1, g2 = parse_graph(args.g1, cfg, "G1"), parse_graph(args.g2, cfg, "G2")
    return _interval_line(metrics.dist(g1, g2, cfg.weight, cfg.depth), cfg.with_float)


def cmd_hom(args, cfg: Config) -> str:
    if args.action in ("inj", "ind"):
        h = parse_pattern(args.pattern)
        g = parse_graph(args.graph, cfg)
        fn = homind.t_inj if args.action == "inj" else homind.t_ind
        return str(fn(h, g))
    if args.action == "expand":
        h = parse_pattern(args.pattern)
        return _emit(combo_to_json(homind.mobius_expand(h, args.direction)))
    if args.action == "interpolate":
        points = []
        for item in args.point:
            gtext, sep, value = item.rpartition("=")
            if not sep:
                raise UsageError(f"--point: expected GRAPH=VALUE, got {item!r}")
            points.append((parse_graph(gtext, cfg, "--point"), parse_rat(value, "--point value")))
        return _emit(combo_to_json(homind.interpolate(points)))
    raise UsageError(f"unknown hom action {args.action!r}")


def cmd_derive(args, cfg: Config) -> str:
    f = parse_fn(args.fn, cfg)
    g = parse_graph(args.at, cfg, "--at")
    twist = parse_twist(args.twist) if args.twist else None
    if twist is None:
        verdict = calculus.derivative(f, g, None, cfg.tol, cfg.max_depth, cfg.window)
    else:
        verdict = calculus.twisted_derivative(f, g, twist, None, cfg.tol, cfg.max_depth, cfg.window)
    out = verdict_to_json(verdict, cfg.with_float)
    if args.closed_form:
        if f.tag != "distance":
            raise UsageError("--closed-form applies to dist: functions only")
        g0, weight = _dist_parts(args.fn.partition(":")[2], cfg)
        d = calculus.distance_derivative(g0, weight, g)
        out["closed_form"] = {"value": rat(d.value), "case": d.case, "c_phi": rat(d.c)}
    if args.critical:
        rep = calculus.critical_point_check(f, g, None, cfg.tol, cfg.max_depth, cfg.window)
        out["critical"] = {
            "critical": rep.critical,
            "classification": rep.classification,
            "second": None if rep.second is None else interval_to_json(rep.second),
        }
    if not args.traces:
        out.pop("probes", None)
    return _emit(out)


def cmd_density(args, cfg: Config) -> str:
    if args.action == "trajectory":
        t = density.trajectory(parse_graph(args.graph, cfg), args.n)
        return _density_out(t, None, args, cfg)
    if args.action == "construct":
        c = density.construct_target(parse_rat(args.target, "--target"), args.n)
        return _density_out(c.trajectory, graph_to_json(c.graph) if args.emit_graph else None, args, cfg)
    if args.action == "oscillate":
        targets = [parse_rat(t, "--targets") for t in args.targets.split(",")]
        o = density.construct_oscillating(targets, args.rounds)
        if args.marks:
            Path(args.marks).write_text(dumps(marks_to_json(o.marks)) + "\n", encoding="utf-8")
        extra = {"marks": marks_to_json(o.marks)}
        if args.emit_graph:
            extra["graph"] = graph_to_json(o.graph)
        return _density_out(o.trajectory, extra, args, cfg)
    if args.action == "accumulate":
        r = density.accumulation_set(parse_graph(args.graph, cfg), args.n, args.window)
        return _emit({
            "lo": rat(r.lo),
            "hi": rat(r.hi),
            "clusters": [rat(c) for c in r.clusters],
            "window": r.window,
            "n": r.n,
        })
    if args.action == "hom":
        res = density.limiting_hom_density(parse_pattern(args.pattern), parse_graph(args.graph, cfg), args.n)
        return _emit({"H": pattern_to_json(res.pattern), "values": [[n, rat(v)] for n, v in res.values]})
    raise UsageError(f"unknown density action {args.action!r}")


def _density_out(t: density.DensityTrajectory, extra, args, cfg: Config) -> str:
    if args.csv or cfg.fmt == "csv":
        return trajectory_to_csv(t, cfg.with_float).rstrip("\n")
    body: dict = {"trajectory": [[p.n, p.edges, rat(p.density)] for p in t.points]}
    if isinstance(extra, dict) and "repr" in extra:
        body["graph"] = extra
    elif isinstance(extra, dict):
        body.update(extra)
    return _emit(body)


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def _rational(text: str) -> Fraction:
    try:
        return parse_rat(text)
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=_positive_int, help=f"evaluation depth (default ${DEPTH_ENV} or {metrics.DEFAULT_DEPTH})")
    common.add_argument("--float", dest="with_float", action="store_true", help="add decimal approximations")
    common.add_argument("--weight", default="geom2", help="weight: geomA or a weight JSON file")
    common.add_argument("--labeling-twist", default=None, help="finite relabelling as cycles, e.g. '(1 2)(3 4)'")

    p = argparse.ArgumentParser(prog="graphspace", description="Exact computations on countable labelled graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", parents=[common], help="graph construction and algebra")
    g.add_argument("action", choices=["show", "classify", "symdiff", "intersect", "truncate", "label", "unlabel"])
    g.add_argument("operands", nargs="+")
    g.add_argument("--a", type=_rational, default=Fraction(2))
    g.add_argument("--eps", type=_rational, default=Fraction(1, 8))

    n = sub.add_parser("norm", parents=[common], help="weak norm ||G||_a")
    n.add_argument("graph")
    n.add_argument("--a", type=_rational, default=Fraction(2))

    d = sub.add_parser("dist", parents=[common], help="weighted distance d_phi(G1, G2)")
    d.add_argument("g1")
    d.add_argument("g2")

    h = sub.add_parser("hom", parents=[common], help="homomorphism indicators")
    h.add_argument("action", choices=["inj", "ind", "expand", "interpolate"])
    h.add_argument("--pattern")
    h.add_argument("--graph")
    h.add_argument("--direction", choices=["ind_from_inj", "inj_from_ind"], default="ind_from_inj")
    h.add_argument("--point", action="append", default=[], help="GRAPH=VALUE (repeatable)")

    r = sub.add_parser("derive", parents=[common], help="derivative verdicts")
    r.add_argument("--fn", required=True, help="encode | zero | dist:G[:geomA] | zeta:P | inj:H | ind:H | indicator:A/P")
    r.add_argument("--at", required=True)
    r.add_argument("--twist", default=None, help="cycles '(1 2)' or shift:N0[@START]")
    r.add_argument("--tol", type=_rational, default=calculus.DEFAULT_TOL)
    r.add_argument("--window", type=_positive_int, default=calculus.DEFAULT_WINDOW)
    r.add_argument("--max-depth", type=_positive_int, default=calculus.DEFAULT_MAX_DEPTH)
    r.add_argument("--closed-form", action="store_true", help="also report the closed-form +-c_phi")
    r.add_argument("--critical", action="store_true", help="add the critical-point report")
    r.add_argument("--traces", action="store_true", help="include per-probe quotient traces")

    e = sub.add_parser("density", parents=[common], help="edge-density trajectories and constructions")
    e.add_argument("action", choices=["trajectory", "construct", "oscillate", "accumulate", "hom"])
    e.add_argument("--graph")
    e.add_argument("--pattern", default="K2")
    e.add_argument("--target")
    e.add_argument("--targets")
    e.add_argument("--rounds", type=_positive_int, default=3)
    e.add_argument("--n", type=_positive_int, default=30)
    e.add_argument("--window", type=_positive_int, default=10)
    e.add_argument("--csv", action="store_true")
    e.add_argument("--marks", help="write the marked indices sidecar JSON here")
    e.add_argument("--emit-graph", action="store_true")
    return p


_REQUIRED = {
    ("hom", "inj"): ("pattern", "graph"),
    ("hom", "ind"): ("pattern", "graph"),
    ("hom", "expand"): ("pattern",),
    ("hom", "interpolate"): ("point",),
    ("density", "trajectory"): ("graph",),
    ("density", "construct"): ("target",),
    ("density", "oscillate"): ("targets",),
    ("density", "accumulate"): ("graph",),
    ("density", "hom"): ("graph",),
}


def _config(args) -> Config:
    depth = args.depth
    if depth is None:
        env = os.environ.get(DEPTH_ENV)
        if env is not None:
            try:
                depth = _positive_int(env)
            except argparse.ArgumentTypeError as exc:
                raise UsageError(f"${DEPTH_ENV}: {exc}") from exc
    twist = parse_twist(args.labeling_twist)
    if isinstance(twist, metrics.TailShift):
        raise UsageError("--labeling-twist takes a finite permutation, not a shift")
    return Config(
        labeling=EdgeLabeling(twist) if twist is not None else CANONICAL,
        weight=parse_weight(args.weight, "--weight"),
        tol=getattr(args, "tol", calculus.DEFAULT_TOL),
        window=getattr(args, "window", calculus.DEFAULT_WINDOW) if args.command == "derive" else calculus.DEFAULT_WINDOW,
        max_depth=getattr(args, "max_depth", calculus.DEFAULT_MAX_DEPTH),
        depth=depth or metrics.DEFAULT_DEPTH,
        fmt="csv" if getattr(args, "csv", False) else "json",
        with_float=args.with_float,
    )


COMMANDS = {
    "graph": cmd_graph,
    "norm": cmd_norm,
    "dist": cmd_dist,
    "hom": cmd_hom,
    "derive": cmd_derive,
    "density": cmd_density,
}


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Run the CLI and return (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        if args.command == "graph":
            lo, hi = _operand_count(args.action)
            if not lo <= len(args.operands) <= hi:
                raise UsageError(f"graph {args.action} takes {lo}..{hi} operands, got {len(args.operands)}")
        action = getattr(args, "action", None)
        for name in _REQUIRED.get((args.command, action), ()):
            if not getattr(args, name):
                raise UsageError(f"{args.command} {action} requires --{name}")
        cfg = _config(args)
        out = COMMANDS[args.command](args, cfg)
    except (UsageError, FormatError) as exc:
        return 2, "", f"graphspace: error: {exc}\n"
    except GraphSpaceError as exc:
        return 1, "", dumps(exc.to_json()) + "\n"
    except ValueError as exc:
        return 1, "", dumps({"error": "invalid_argument", "message": str(exc)}) + "\n"
    return 0, out + "\n", ""


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
