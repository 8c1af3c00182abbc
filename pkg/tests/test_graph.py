from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nodal_clifford.constructions import cycle, star_of_cycles, theta
from nodal_clifford.graph import (
    DualGraph,
    GraphError,
    bridge_forest,
    bridges,
    find_bridges,
    induced_subgraph,
    is_semistable,
    is_stable,
    leaf_count,
    new_graph,
    stabilize,
    subdivide,
    valence,
)
from nodal_clifford.multidegree import canonical_multidegree


def brute_bridges(g: DualGraph) -> set[int]:
    base = len(g.components)
    return {e for e in g.edges if len(g.without_edges([e]).components) > base}


def brute_two_edge_classes(g: DualGraph) -> set[frozenset[int]]:
    """Vertices u, w share a class iff they stay connected after deleting any single edge."""

    def comp_of(h: DualGraph) -> dict[int, int]:
        return {v: i for i, c in enumerate(h.components) for v in c}

    maps = [comp_of(g)] + [comp_of(g.without_edges([e])) for e in g.edges]
    classes: dict[tuple[int, ...], set[int]] = {}
    for v in g.vertices:
        classes.setdefault(tuple(m[v] for m in maps), set()).add(v)
    return {frozenset(c) for c in classes.values()}


@st.composite
def multigraphs(draw, max_v=6, max_e=9):
    n = draw(st.integers(1, max_v))
    weights = [draw(st.integers(0, 2)) for _ in range(n)]
    m = draw(st.integers(0, max_e))
    edges = [(draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))) for _ in range(m)]
    return new_graph(weights, edges)


# -- construction and basic invariants -------------------------------------------


def test_single_vertex_genus_zero():
    assert new_graph([0], []).genus == 0


def test_theta_genus_two():
    assert theta(3).genus == 2


def test_weighted_loop_genus_two():
    assert new_graph([1], [(0, 0)]).genus == 2


def test_negative_weight_rejected():
    with pytest.raises(GraphError):
        new_graph([-1], [])


def test_dangling_endpoint_rejected():
    with pytest.raises(GraphError):
        new_graph([0, 0], [(0, 2)])


def test_valence_examples():
    assert valence(theta(3), 0) == valence(theta(3), 1) == 3
    assert valence(cycle(1), 0) == 2
    assert valence(new_graph([0], []), 0) == 0
    with pytest.raises(GraphError):
        valence(theta(3), 7)


def test_canonical_multidegree_examples():
    assert canonical_multidegree(theta(3)).values_tuple == (1, 1)
    assert canonical_multidegree(new_graph([1], [(0, 0)])).values_tuple == (2,)
    assert canonical_multidegree(cycle(3)).values_tuple == (0, 0, 0)


def test_semistable_and_stable_examples():
    assert is_semistable(theta(3)) and is_stable(theta(3))
    pendant = new_graph([0, 1], [(0, 1)])
    assert not is_semistable(pendant)
    assert is_semistable(cycle(2)) and not is_stable(cycle(2))


def test_disconnected_genus_sums_components():
    g = new_graph([0, 0, 0, 0], [(0, 1), (0, 1), (0, 1), (2, 3), (2, 3), (2, 3)])
    assert g.genus == 4
    assert g.arithmetic_genus == 3


# -- bridges and the bridge forest ---------------------------------------------------


def test_bridge_examples():
    assert bridges(theta(3)) == frozenset()
    path = new_graph([0, 0, 0], [(0, 1), (1, 2)])
    assert bridges(path) == {0, 1}
    g = new_graph([0, 0, 0], [(0, 1), (0, 1), (1, 2)])
    assert bridges(g) == {2}


def test_loops_are_never_bridges():
    g = new_graph([0, 0], [(0, 0), (0, 1), (1, 1)])
    assert bridges(g) == {1}


def test_bridges_match_deletion_oracle_on_corpus(corpus):
    for g in corpus:
        assert set(find_bridges(g)) == brute_bridges(g)


@settings(max_examples=300, deadline=None)
@given(multigraphs())
def test_bridges_match_deletion_oracle_random(g):
    assert bridges(g) == brute_bridges(g)


@settings(max_examples=200, deadline=None)
@given(multigraphs())
def test_forest_members_are_two_edge_classes(g):
    bf = bridge_forest(g)
    assert {frozenset(ms) for ms in bf.members.values()} == brute_two_edge_classes(g)
    assert set(bf.forest.edges) == set(bridges(g))
    assert bf.forest.bridges == frozenset(bf.forest.edges)
    for v, f in bf.component_map.items():
        assert v in bf.members[f]


def test_bridge_forest_examples():
    assert len(bridge_forest(theta(3)).forest) == 1
    star = bridge_forest(star_of_cycles(3, 2)).forest
    assert len(star) == 4 and len(star.edges) == 3
    assert sorted(star.valence(v) for v in star.vertices) == [1, 1, 1, 3]
    tree = new_graph([0] * 4, [(0, 1), (1, 2), (1, 3)])
    assert len(bridge_forest(tree).forest.edges) == 3


def test_forest_weight_is_component_genus():
    bf = bridge_forest(star_of_cycles(3, 2))
    weights = sorted(bf.forest.weight(v) for v in bf.forest.vertices)
    assert weights == [0, 1, 1, 1]


def test_leaf_count_examples():
    assert leaf_count(bridge_forest(new_graph([0], []))) == 2
    assert leaf_count(bridge_forest(star_of_cycles(3, 2))) == 3
    assert leaf_count(new_graph([0, 0], [])) == 4


@settings(max_examples=200, deadline=None)
@given(multigraphs())
def test_two_leaves_for_connected_bridgeless(g):
    # the converse fails: a forest that is a path also has two leaves
    if g.is_connected and not g.bridges:
        assert leaf_count(g) == 2
    if g.is_connected and g.bridges:
        forest = bridge_forest(g).forest
        is_path = max(forest.valence(v) for v in forest.vertices) <= 2
        assert (leaf_count(g) == 2) == is_path


def test_two_leaves_with_a_bridge():
    g = new_graph([0] * 4, [(0, 1), (0, 1), (1, 2), (2, 3), (2, 3)])
    assert g.bridges == {2} and leaf_count(g) == 2


# -- subgraphs -----------------------------------------------------------------------


def test_induced_subgraph_examples():
    sub, k = induced_subgraph(theta(3), [0])
    assert len(sub) == 1 and not sub.edges and k == 3
    sub, k = induced_subgraph(star_of_cycles(3, 2), [1, 2])
    assert len(sub.edges) == 2 and k == 1
    g = theta(3)
    sub, k = induced_subgraph(g, g.vertices)
    assert sub == g and k == 0
    with pytest.raises(GraphError):
        induced_subgraph(g, [])


def test_canonical_sum_on_corpus(corpus):
    for g in corpus:
        assert sum(g.canonical_degree(v) for v in g.vertices) == 2 * g.genus - 2


# -- stabilization and subdivision -------------------------------------------------------


def test_stabilize_theta_is_identity():
    s, rec = stabilize(theta(3))
    assert s == theta(3) and not rec.steps


def test_stabilize_subdivided_theta():
    s, rec = stabilize(subdivide(theta(3), [0]))
    assert len(rec.steps) == 1
    assert len(s) == 2 and len(s.edges) == 3 and s.genus == 2 and s.is_stable


def test_stabilize_errors():
    with pytest.raises(GraphError):
        stabilize(cycle(4))
    with pytest.raises(GraphError):
        stabilize(new_graph([0, 2], [(0, 1)]))


def test_stabilize_preserves_genus_on_corpus(corpus):
    for g in corpus:
        if g.genus >= 2:
            s, rec = stabilize(g)
            assert s.is_stable and s.genus == g.genus
            assert set(rec.edge_map) == set(s.edges)
            assert set(s.edges) <= set(g.edges)


def test_subdivide_keeps_genus_and_ids():
    g = theta(3)
    s = subdivide(g)
    assert s.genus == g.genus and len(s) == 5 and len(s.edges) == 6
    assert set(g.edges) <= set(s.edges)
    assert all(s.valence(v) == 2 for v in s.vertices if v not in g.vertices)


def test_contraction_order_is_by_edge_id():
    s, rec = stabilize(subdivide(theta(3), [2, 0]))
    assert [st.contracted for st in rec.steps] == sorted(st.contracted for st in rec.steps)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_leaf_count_of_stars(n):
    assert leaf_count(star_of_cycles(n, 2)) == n


def test_isolated_vertices_make_single_vertex_trees():
    g = new_graph([0, 0, 0], [])
    assert leaf_count(g) == 6
    assert list(itertools.chain.from_iterable(bridge_forest(g).members.values())) == [0, 1, 2]
