import json
import subprocess
import sys
from fractions import Fraction

import pytest

from graphspace.cli import parse_graph, parse_twist, run
from graphspace.core import COMPLETE, EMPTY, Permutation, cofinite, finite, periodic
from graphspace.metrics import TailShift
from graphspace.serialize import graph_from_json, trajectory_from_csv

F = Fraction


def ok(*argv):
    code, out, err = run(list(argv))
    assert code == 0, err
    return out


class TestExamples:
    def test_norms(self):
        assert ok("norm", "finite:1,3") == "5/8 exact\n"
        assert ok("norm", "empty") == "0 exact\n"
        assert ok("norm", "cofinite:1") == "1/2 exact\n"

    def test_construct_csv(self):
        rows = trajectory_from_csv(ok("density", "construct", "--target", "1/2", "--n", "30", "--csv"))
        n, _, d = rows[-1]
        assert n == 30 and abs(d - F(1, 2)) < F(1, 435)

    def test_derive(self):
        out = json.loads(ok("derive", "--fn", "dist:empty:geom2", "--at", "finite:1"))
        assert out["status"] == "converged" and out["value"] == "1"

    def test_hom(self):
        assert ok("hom", "ind", "--pattern", "path3", "--graph", "triangle") == "0\n"
        assert ok("hom", "inj", "--pattern", "path3", "--graph", "triangle") == "1\n"


class TestCommands:
    def test_graph_ops(self):
        assert json.loads(ok("graph", "symdiff", "finite:1,2", "finite:2,3")) == {"repr": "finite", "labels": [1, 3]}
        assert json.loads(ok("graph", "intersect", "finite:1,2", "complete")) == {"repr": "finite", "labels": [1, 2]}
        assert ok("graph", "classify", "periodic:4:3") == "proper\n"
        assert ok("graph", "label", "3", "4") == "6\n"
        assert json.loads(ok("graph", "unlabel", "4")) == [1, 4]
        out = json.loads(ok("graph", "truncate", "complete", "--eps", "1/8"))
        assert out["bound"] == 4 and out["residual"]["lo"] == "1/16"

    def test_dist_and_float(self):
        assert ok("dist", "finite:1", "finite:2") == "3/4 exact\n"
        assert ok("dist", "finite:1", "finite:2", "--float") == "3/4 exact (0.75)\n"
        assert ok("dist", "empty", "finite:1", "--weight", "geom3") == "1/3 exact\n"

    def test_depth_env(self, monkeypatch):
        monkeypatch.setenv("GRAPHSPACE_DEPTH", "0")
        code, _, err = run(["norm", "empty"])
        assert code == 2 and "GRAPHSPACE_DEPTH" in err

    def test_hom_expand_and_interpolate(self):
        terms = json.loads(ok("hom", "expand", "--pattern", "path3"))
        assert [t["coef"] for t in terms] == ["1", "-1"]
        terms = json.loads(ok("hom", "interpolate", "--point", "finite:1=1", "--point", "empty=0"))
        assert terms == [{"H": {"edges": [[1, 2]]}, "coef": "1", "flavor": "inj"}]

    def test_derive_options(self):
        out = json.loads(ok("derive", "--fn", "dist:complete:geom2", "--at", "finite:1", "--closed-form", "--traces"))
        assert out["value"] == "-1" and out["closed_form"] == {"value": "-1", "case": "mixed", "c_phi": "1"}
        assert {p["name"] for p in out["probes"]} == {"tail-even@2", "tail-odd@3"}
        out = json.loads(ok("derive", "--fn", "encode", "--at", "periodic:2:2", "--twist", "shift:2"))
        assert out["value"] == "4" and out["flags"] == ["not_finitary"]
        out = json.loads(ok("derive", "--fn", "zeta:2", "--at", "periodic:3:2", "--critical"))
        assert out["value"] == "0" and out["critical"]["critical"] is True

    def test_density_commands(self, tmp_path):
        sidecar = tmp_path / "marks.json"
        out = json.loads(ok("density", "oscillate", "--targets", "1/4,3/4", "--rounds", "2", "--marks", str(sidecar)))
        marks = json.loads(sidecar.read_text())
        assert marks == out["marks"]
        assert [m["target"] for m in marks] == ["1/4", "3/4"]
        acc = json.loads(ok("density", "accumulate", "--graph", "complete", "--n", "20"))
        assert acc["lo"] == acc["hi"] == "1"
        hom = json.loads(ok("density", "hom", "--pattern", "K2", "--graph", "periodic:1:2", "--n", "6"))
        traj = json.loads(ok("density", "trajectory", "--graph", "periodic:1:2", "--n", "6"))
        assert [v for _, v in hom["values"]] == [d for _, _, d in traj["trajectory"]]


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["norm", "bogus:1"],
            ["norm", "finite:1,x"],
            ["graph", "show"],
            ["hom", "ind", "--pattern", "path3"],
            ["derive", "--fn", "nope", "--at", "finite:1"],
            ["norm", '{"repr": "finite", "labels": [0]}'],
            ["norm", "{broken"],
            ["frobnicate"],
        ],
    )
    def test_usage_errors_exit_two(self, argv, capsys):
        code, out, err = run(argv)
        assert code == 2 and out == ""

    @pytest.mark.parametrize(
        "argv, error",
        [
            (["derive", "--fn", "encode", "--at", "empty"], "endpoint_excluded"),
            (["derive", "--fn", "dist:empty:geom3/2", "--at", "finite:1", "--closed-form"], "c_limit_missing"),
            (["hom", "expand", "--pattern", "edges:1-2,1-3,1-4,1-5,1-6,1-7,1-8"], "too_many_supergraphs"),
        ],
    )
    def test_domain_errors_exit_one(self, argv, error):
        code, out, err = run(argv)
        assert code == 1 and out == ""
        assert json.loads(err)["error"] == error


def test_graph_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"repr": "cofinite", "missing": [1]}', encoding="utf-8")
    assert ok("norm", str(path)) == "1/2 exact\n"


def test_parsers():
    assert parse_graph("empty") == EMPTY and parse_graph("complete") == COMPLETE
    assert parse_graph("cofinite:2") == cofinite({2})
    assert parse_graph("periodic:5:2:1") == periodic({1}, 5, 2)
    assert parse_graph("edges:1-2,2-3") == finite({1, 3})
    assert parse_graph("triangle") == finite({1, 2, 3})
    assert parse_twist("(1 2)(3 4 5)") == Permutation.from_cycles([[1, 2], [3, 4, 5]])
    assert parse_twist("shift:1@4") == TailShift(1, 4)


def test_entry_point_subprocess():
    res = subprocess.run(
        [sys.executable, "-m", "graphspace.cli", "graph", "show", "periodic:5:2"],
        capture_output=True, text=True, check=True,
    )
    assert graph_from_json(json.loads(res.stdout)) == periodic((), 5, 2)
