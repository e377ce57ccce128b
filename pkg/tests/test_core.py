import pytest
from hypothesis import given, strategies as st

from graphspace.core import (
    COMPLETE,
    EMPTY,
    Cofinite,
    EdgeLabeling,
    Finite,
    Oracle,
    Periodic,
    Permutation,
    classify,
    cofinite,
    contains,
    converged_at_depth,
    edge,
    finite,
    from_edges,
    intersect,
    label,
    periodic,
    sym_diff,
    unlabel,
)
from graphspace.errors import IncompatiblePeriodic, OracleTagMismatch
from oracles import colex_pairs, label_table
from strategies import graphs, periodic_graphs, same_stride_graphs

class TestLabelling:
    @pytest.mark.parametrize("pair, n", [((1, 2), 1), ((2, 3), 3), ((3, 4), 6)])
    def test_label_examples(self, pair, n):
        assert label(edge(*pair)) == n

    @pytest.mark.parametrize("n, pair", [(1, (1, 2)), (4, (1, 4)), (2, (1, 3))])
    def test_unlabel_examples(self, n, pair):
        assert tuple(unlabel(n)) == pair

    def test_matches_hand_enumeration(self):
        table = label_table(40)
        for (i, j), n in table.items():
            assert label(edge(i, j)) == n
            assert tuple(unlabel(n)) == (i, j)

    def test_round_trip_to_ten_thousand(self):
        assert all(label(unlabel(n)) == n for n in range(1, 10_001))

    def test_injective_up_to_150_vertices(self):
        labels = [label(edge(i, j)) for i, j in colex_pairs(150)]
        assert len(set(labels)) == len(labels)
        assert sorted(labels) == list(range(1, len(labels) + 1))

    def test_edge_rejects_loops(self):
        with pytest.raises(ValueError):
            edge(3, 3)

    def test_edge_is_unordered(self):
        assert edge(4, 2) == edge(2, 4)

    def test_twisted_labelling_round_trips(self):
        lab = EdgeLabeling(Permutation.from_cycles([[1, 5], [2, 3, 4]]))
        assert label(edge(1, 2), lab) == 5
        for n in range(1, 300):
            assert lab.label(lab.unlabel(n)) == n


class TestPermutation:
    def test_cycles_round_trip(self):
        p = Permutation.from_cycles([[1, 2, 3], [7, 9]])
        assert p(1) == 2 and p(3) == 1 and p(9) == 7 and p(4) == 4
        assert p.inverse(2) == 1
        assert p.support == frozenset({1, 2, 3, 7, 9})
        assert Permutation.from_cycles(p.cycles()) == p

    def test_overlapping_cycles_rejected(self):
        with pytest.raises(ValueError):
            Permutation.from_cycles([[1, 2], [2, 3]])


class TestMembership:
    def test_examples(self):
        assert contains(finite({1, 3}), unlabel(3)) == 1
        assert contains(cofinite({2}), unlabel(2)) == 0
        assert contains(periodic((), 5, 2), unlabel(7)) == 1

    def test_periodic_tail(self):
        g = periodic({1, 3}, 5, 2)
        assert [n for n in range(1, 14) if g.contains(n)] == [1, 3, 5, 7, 9, 11, 13]

    def test_stride_one_tail_is_cofinite(self):
        assert periodic({1}, 3, 1) == cofinite({2})

    def test_classification(self):
        assert classify(EMPTY) == "finite"
        assert classify(COMPLETE) == "cofinite"
        assert classify(periodic((), 1, 3)) == "proper"
        assert classify(Oracle(lambda n: n % 5 == 0, "proper")) == "proper"

    def test_oracle_tag_spot_check(self):
        with pytest.raises(OracleTagMismatch):
            Oracle(lambda n: True, "finite")
        with pytest.raises(OracleTagMismatch):
            Oracle(lambda n: False, "cofinite")

    def test_from_edges(self):
        assert from_edges([(1, 2), (2, 3), (1, 3)]) == finite({1, 2, 3})
        lab = EdgeLabeling(Permutation.from_cycles([[1, 4]]))
        assert from_edges([(1, 2)], lab) == finite({4})


class TestAlgebra:
    def test_examples(self):
        assert sym_diff(finite({1, 2}), finite({2, 3})) == finite({1, 3})
        assert sym_diff(finite({1}), cofinite({1})) == COMPLETE
        assert intersect(finite({1, 2}), finite({2, 3})) == finite({2})

    def test_normalized_classes(self):
        assert isinstance(sym_diff(finite({1}), finite({4})), Finite)
        assert isinstance(sym_diff(cofinite({1}), cofinite({4})), Finite)
        assert isinstance(sym_diff(finite({1}), cofinite({4})), Cofinite)
        assert isinstance(sym_diff(periodic((), 3, 2), finite({50})), Periodic)

    def test_incompatible_strides(self, monkeypatch):
        import graphspace.core as core

        monkeypatch.setattr(core, "MAX_PERIOD", 30)
        with pytest.raises(IncompatiblePeriodic):
            sym_diff(periodic((), 1, 7), periodic((), 1, 11))

    def test_oracle_operand_gives_oracle(self):
        o = Oracle(lambda n: n % 3 == 0, "proper")
        out = sym_diff(o, finite({3}))
        assert isinstance(out, Oracle)
        assert not out.contains(3) and out.contains(6)

    @given(graphs)
    def test_self_difference_is_empty(self, g):
        assert sym_diff(g, g) == EMPTY

    @given(graphs)
    def test_units(self, g):
        assert intersect(g, COMPLETE) == g
        assert intersect(g, EMPTY) == EMPTY
        assert intersect(g, g) == g
        assert sym_diff(g, EMPTY) == g

    @given(graphs, graphs)
    def test_commutative(self, g1, g2):
        assert sym_diff(g1, g2) == sym_diff(g2, g1)
        assert intersect(g1, g2) == intersect(g2, g1)

    @given(same_stride_graphs, same_stride_graphs, same_stride_graphs)
    def test_associative_and_distributive(self, a, b, c):
        assert sym_diff(sym_diff(a, b), c) == sym_diff(a, sym_diff(b, c))
        assert intersect(intersect(a, b), c) == intersect(a, intersect(b, c))
        assert intersect(a, sym_diff(b, c)) == sym_diff(intersect(a, b), intersect(a, c))

    @given(graphs, graphs)
    def test_labelwise(self, g1, g2):
        d, i = sym_diff(g1, g2), intersect(g1, g2)
        for n in range(1, 200):
            assert d.contains(n) == (g1.contains(n) != g2.contains(n))
            assert i.contains(n) == (g1.contains(n) and g2.contains(n))

    @given(st.frozensets(st.integers(1, 40), max_size=6), st.integers(1, 30), st.sampled_from([2, 3, 5]),
           st.frozensets(st.integers(1, 60), max_size=6))
    def test_periodic_plus_finite_stays_proper(self, base, start, stride, extra):
        g = sym_diff(periodic(base, start, stride), finite(extra))
        assert classify(g) == "proper"
        assert isinstance(g, Periodic)

    @given(periodic_graphs())
    def test_normalization_is_idempotent(self, g):
        if isinstance(g, Periodic):
            assert periodic(g.base, g.start, g.stride, g.residues) == g
        else:
            assert classify(g) in ("finite", "cofinite")


class TestConvergence:
    def test_constant_sequence(self):
        g = finite({1, 3, 9})
        ok, trace = converged_at_depth([g, g, g], {1, 2, 3})
        assert ok and trace == finite({1, 3})

    def test_alternating(self):
        ok, trace = converged_at_depth([EMPTY, finite({1})] * 4, {1})
        assert not ok and trace is None

    def test_growing_prefixes(self):
        seq = [finite(range(1, n + 1)) for n in range(1, 9)]
        ok, trace = converged_at_depth(seq, {1, 2})
        assert ok and trace == finite({1, 2})
