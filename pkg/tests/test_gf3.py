import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cobletheta import gf3

vectors = st.tuples(*[st.integers(0, 2)] * 5)
perms = st.permutations(list(range(1, 7))).map(tuple)


def test_counts():
    sr, srb = gf3.split_S()
    assert len(gf3.enumerate_S()) == 80
    assert (len(sr), len(srb)) == (20, 60)
    assert len(gf3.enumerate_T()) == 45
    assert len(gf3.enumerate_lines()) == 27
    assert len(gf3.enumerate_q2_classes()) == 36
    assert len(gf3.enumerate_R()) == 270
    assert len(gf3.isotropic_planes()) == 40
    assert len(gf3.enumerate_Q()) == 240


def test_S_is_closed_under_negation_and_isotropic():
    S = set(gf3.enumerate_S())
    assert all(gf3.neg(v) in S and gf3.q_value(v) == 0 for v in S)


def test_weight_three_vectors_are_isotropic():
    # brute force: q(v) = number of nonzero entries mod 3
    for v in gf3.all_vectors():
        assert gf3.q_value(v) == sum(1 for x in v if x) % 3


def test_lines_are_five_cliques_of_mutually_orthogonal_T_classes():
    for L in gf3.enumerate_lines():
        assert len(L) == 5
        assert all(gf3.dot(a, b) == 0 for a, b in itertools.combinations(L, 2))
    # every T class lies on exactly three lines (three lines per tritangent)
    counts = {}
    for L in gf3.enumerate_lines():
        for t in L:
            counts[t] = counts.get(t, 0) + 1
    assert set(counts.values()) == {3} and len(counts) == 45


def test_tritangent_dictionary_reproduces_lines_and_graph():
    d = gf3.tritangent_dictionary()
    assert len(d) == 45 and len(set(d.values())) == 45
    assert set(gf3.lines_from_dictionary().values()) == set(gf3.enumerate_lines())
    assert nx.is_isomorphic(gf3.line_intersection_graph(), gf3.dual_graph_std())
    g = gf3.dual_graph_std()
    assert g.number_of_nodes() == 27 and all(deg == 10 for _, deg in g.degree())


def test_disjointness_graph_is_the_complement():
    a, b = gf3.line_intersection_graph(), gf3.line_intersection_graph(disjoint=True)
    assert a.number_of_edges() + b.number_of_edges() == 27 * 26 // 2
    assert all(deg == 16 for _, deg in b.degree())


@given(vectors)
def test_label_round_trip(v):
    assert gf3.parse_label(gf3.label(v)) == v


def test_label_example():
    assert gf3.label((1, 1, 2, 0, 0)) == "+1+2-3"
    assert gf3.label((0, 0, 0, 0, 0)) == "0"


def test_reflection_rejects_wrong_norm():
    with pytest.raises(ValueError):
        gf3.reflection((1, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        gf3.reflection((1, 1, 1, 0, 0))


@given(st.sampled_from(gf3.enumerate_q2_classes()))
def test_reflections_are_orthogonal_involutions(v):
    R = gf3.reflection(v)
    assert gf3.is_orthogonal(R)
    assert np.array_equal(R @ R % 3, np.eye(5, dtype=np.int64))
    assert gf3.apply(v, R) == gf3.neg(v)


def test_group_order():
    assert len(gf3.group_closure(gf3.weyl_generators(), mod_center=True)) == 51840


def test_group_closure_of_nothing_is_trivial():
    assert len(gf3.group_closure([])) == 1


def test_group_preserves_S():
    S = set(gf3.enumerate_S())
    for g in gf3.weyl_generators():
        assert {gf3.apply(v, g) for v in S} == S


@settings(max_examples=60)
@given(perms, perms)
def test_s6_matrix_is_a_homomorphism(s, t):
    lhs = gf3.s6_matrix(gf3.compose_perm(s, t))
    assert np.array_equal(lhs, gf3.s6_matrix(s) @ gf3.s6_matrix(t) % 3)


def test_s6_matrix_on_generators():
    assert np.array_equal(gf3.s6_matrix((2, 1, 3, 4, 5, 6)), gf3.coordinate_swap(1, 2))
    assert np.array_equal(gf3.s6_matrix((1, 2, 3, 4, 6, 5)), gf3.reflection(gf3.R56))
    with pytest.raises(ValueError):
        gf3.s6_matrix((1, 1, 2, 3, 4, 5))


def test_isotropic_span_example():
    got = gf3.isotropic_span_of(((1, 1, 1, 1, 1), (1, 0, 0, 2, 0)))
    assert got == ((0, 1, 1, 0, 1), (2, 0, 0, 2, 2), (2, 0, 2, 2, 0), (2, 2, 0, 2, 0))


def test_isotropic_spans_are_pairwise_minus_one():
    for w in gf3.enumerate_R():
        vs = gf3.isotropic_span_of(w)
        assert all(gf3.dot(a, b) == 2 for a, b in itertools.combinations(vs, 2))
        assert all(gf3.dot(v, w[0]) == 0 == gf3.dot(v, w[1]) for v in vs)


def test_Q_pairs_meet_in_a_line():
    for P, Q in gf3.enumerate_Q()[:40]:
        a, b = gf3.plane_reps(P, Q)
        assert len(a) == len(b) == 3
        assert all(gf3.dot(v, w) != 0 for v in a for w in b)


def test_epsilon_flips_with_one_sign():
    P, Q = gf3.enumerate_Q()[7]
    a, b = gf3.plane_reps(P, Q)
    e = gf3.epsilon_sign(a, b)
    assert gf3.epsilon_sign([gf3.neg(a[0])] + a[1:], b) == -e
    assert gf3.epsilon_sign(a, [gf3.neg(b[2])] + b[:2]) == -e
