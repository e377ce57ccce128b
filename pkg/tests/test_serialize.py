from fractions import Fraction

import pytest
from hypothesis import given

from graphspace.core import COMPLETE, EMPTY, EdgeLabeling, Permutation, finite, from_edges, periodic
from graphspace.density import construct_target
from graphspace.homind import NAMED_PATTERNS, mobius_expand
from graphspace.metrics import Geometric, Tabulated
from graphspace.serialize import (
    CSV_HEADER,
    FormatError,
    combo_from_json,
    combo_to_json,
    dumps,
    graph_from_json,
    graph_to_json,
    loads,
    parse_rat,
    pattern_from_json,
    pattern_to_json,
    trajectory_from_csv,
    trajectory_to_csv,
    weight_from_json,
    weight_to_json,
)
from strategies import graphs

F = Fraction


@given(graphs)
def test_graph_round_trip(g):
    assert graph_from_json(loads(dumps(graph_to_json(g)))) == g


def test_graph_forms():
    assert graph_to_json(finite({3, 1})) == {"repr": "finite", "labels": [1, 3]}
    assert graph_to_json(COMPLETE) == {"repr": "cofinite", "missing": []}
    assert graph_to_json(periodic({1}, 5, 2)) == {"repr": "periodic", "base": [1], "tail": {"start": 5, "stride": 2}}
    assert graph_from_json({"repr": "periodic", "base": [], "tail": {"start": 5, "stride": 2}}) == periodic((), 5, 2)


def test_edge_pair_form_uses_labelling():
    assert graph_from_json({"edges": [[1, 2], [2, 3]]}) == from_edges([(1, 2), (2, 3)])
    lab = EdgeLabeling(Permutation.from_cycles([[1, 2]]))
    assert graph_from_json({"edges": [[1, 2]]}, lab) == finite({2})


@pytest.mark.parametrize(
    "obj, field",
    [
        ({"repr": "finite", "labels": [0]}, "labels"),
        ({"repr": "finite", "labels": "1,2"}, "labels"),
        ({"repr": "blob"}, "repr"),
        ({"repr": "periodic", "base": []}, "tail"),
        ({"edges": [[1]]}, "edges"),
        ([1, 2], "graph"),
    ],
)
def test_graph_errors_name_the_field(obj, field):
    with pytest.raises(FormatError, match=field):
        graph_from_json(obj)


def test_weights():
    for phi in (Geometric(F(3, 2)), Tabulated((F(1, 3), F(1, 9)), F(1, 2))):
        assert weight_from_json(loads(dumps(weight_to_json(phi)))) == phi
    assert weight_to_json(Geometric(F(3, 2))) == {"kind": "geometric", "a": "3/2"}
    with pytest.raises(FormatError, match="ratio"):
        weight_from_json({"kind": "tabulated", "values": ["1/2"], "tail": "geometric-from", "ratio": 0.5})


def test_patterns_and_combos():
    h = NAMED_PATTERNS["path3"]
    assert pattern_to_json(h) == {"edges": [[1, 2], [2, 3]]}
    assert pattern_from_json(pattern_to_json(h)) == h
    combo = mobius_expand(h, "ind_from_inj")
    assert combo_from_json(loads(dumps(combo_to_json(combo)))) == combo


def test_rationals():
    assert parse_rat("3/4") == F(3, 4)
    with pytest.raises(FormatError):
        parse_rat(0.75)
    with pytest.raises(FormatError):
        parse_rat("1/0")


def test_csv_round_trip():
    t = construct_target(F(2, 5), 12).trajectory
    text = trajectory_to_csv(t)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert [(n, d) for n, _, d in trajectory_from_csv(text)] == [(p.n, p.density) for p in t.points]
    assert "density_float" in trajectory_to_csv(t, with_float=True)


def test_loads_reports_position():
    with pytest.raises(FormatError, match="line 2, column"):
        loads('{"repr":\n ]')


def test_empty_graph_json():
    assert graph_from_json(graph_to_json(EMPTY)) == EMPTY
