from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nodal_clifford.constructions import cycle, example_stable_violation, star_of_cycles, theta
from nodal_clifford.graph import GraphError, new_graph
from nodal_clifford.multidegree import (
    STABILITY_VERTEX_CAP,
    Multidegree,
    classic_bound,
    clifford_bound,
    count_uniform,
    dhar,
    dhar_chain,
    enumerate_stable,
    enumerate_uniform,
    is_stable_multidegree,
    is_uniform,
    residual,
    subgraph_genus,
)


def md(g, *vals):
    return Multidegree(g, vals)


def test_multidegree_indexed_by_vertices():
    g = theta(3)
    with pytest.raises(GraphError):
        Multidegree(g, [1])
    with pytest.raises(GraphError):
        Multidegree(g, {0: 1, 5: 0})
    d = Multidegree(g, {0: -2, 1: 5})
    assert d.total == 3 and d[0] == -2


def test_uniform_examples():
    g = theta(3)
    assert is_uniform(g, md(g, 0, 1))
    assert not is_uniform(g, md(g, 2, 0))


def test_no_uniform_degrees_on_non_semistable_graph():
    g = new_graph([0, 1], [(0, 1)])
    assert list(enumerate_uniform(g)) == []
    for vals in itertools.product(range(-2, 3), repeat=2):
        assert not is_uniform(g, md(g, *vals))


def test_residual_examples():
    g = theta(3)
    assert residual(g, md(g, 0, 0)).values_tuple == (1, 1)


def test_residual_is_involution():
    rng = random.Random(5)
    for _ in range(200):
        g = theta(rng.randint(1, 5))
        d = md(g, rng.randint(-5, 5), rng.randint(-5, 5))
        assert residual(g, residual(g, d)) == d


def test_uniform_iff_residual_uniform_on_theta():
    g = theta(3)
    for vals in itertools.product(range(-1, 3), repeat=2):
        d = md(g, *vals)
        assert is_uniform(g, d) == is_uniform(g, residual(g, d))


def test_clifford_bound_examples():
    g = theta(4)
    assert clifford_bound(g, 3) == Fraction(3, 2) + 1
    s = star_of_cycles(3, 2)
    assert clifford_bound(s, 3) == 3
    two = new_graph([0] * 4, [(0, 1)] * 3 + [(2, 3)] * 3)
    assert clifford_bound(two, 0) == 2
    assert classic_bound(two, 0) == 2


def test_dhar_examples():
    g = theta(3)
    assert dhar(g, md(g, 0, 2), 0) == {0, 1}
    c = cycle(3)
    assert dhar(c, md(c, 0, 1, 1), 0) == {0}
    s = star_of_cycles(3, 2)
    big = {v: s.canonical_degree(v) + s.valence(v) for v in s.vertices}
    for v in s.vertices:
        assert dhar(s, big, v) == {v}


def test_dhar_zero_stays_outside():
    g = new_graph([0, 0], [(0, 1)])
    assert dhar(g, md(g, 0, 1), 0) == {0}
    assert dhar(g, md(g, 0, 0), 0) == {0, 1}


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_dhar_chain_monotone_and_restartable(data):
    n = data.draw(st.integers(1, 5))
    edges = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=8))
    g = new_graph([0] * n, edges)
    d = {v: data.draw(st.integers(-2, 3)) for v in g.vertices}
    v = data.draw(st.integers(0, n - 1))
    chain = dhar_chain(g, d, v)
    assert v in chain[0]
    assert len(chain) <= n
    assert all(a < b for a, b in zip(chain, chain[1:]))
    for H in chain:
        assert dhar_chain(g, d, v, start=H)[-1] == chain[-1]


def test_uniform_totals_in_range(corpus):
    for g in corpus[:400]:
        for d in enumerate_uniform(g):
            assert 0 <= d.total <= 2 * g.genus - 2


def test_enumerate_uniform_theta():
    ds = [d.values_tuple for d in enumerate_uniform(theta(3))]
    assert ds == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_uniform_count_matches_product(corpus):
    for g in corpus[:300]:
        n = 1
        for v in g.vertices:
            n *= 2 * g.weight(v) - 1 + g.valence(v)
        assert count_uniform(g) == n == sum(1 for _ in enumerate_uniform(g))


# -- stable multidegrees ---------------------------------------------------------------


def test_stable_examples():
    g = theta(3)
    assert is_stable_multidegree(g, md(g, 0, 1))
    assert not is_stable_multidegree(g, md(g, -1, 3))
    assert is_stable_multidegree(g, md(g, 1, 1))


def test_stable_errors():
    g = theta(3)
    with pytest.raises(GraphError):
        is_stable_multidegree(g, md(g, 0, 0))
    with pytest.raises(GraphError):
        is_stable_multidegree(cycle(2), md(cycle(2), 0, 0))


def test_stable_vertex_cap():
    n = STABILITY_VERTEX_CAP + 1
    g = new_graph([1] * n, [(i, (i + 1) % n) for i in range(n)])
    with pytest.raises(GraphError, match="capped"):
        is_stable_multidegree(g, Multidegree(g, [1] * n))


def test_enumerate_stable_theta():
    assert [d.values_tuple for d in enumerate_stable(theta(3), 1)] == [(0, 1), (1, 0)]


def test_enumerate_stable_matches_filter():
    g = new_graph([0, 0, 1], [(0, 1), (0, 1), (1, 2), (0, 2)])
    assert g.is_stable
    for total in (g.genus - 1, g.genus):
        expect = []
        for vals in itertools.product(range(-3, total + 4), repeat=3):
            if sum(vals) == total and is_stable_multidegree(g, md(g, *vals)):
                expect.append(vals)
        assert [d.values_tuple for d in enumerate_stable(g, total)] == expect


def test_subgraph_genus_sums_components():
    g = new_graph([0, 0, 0, 1], [(0, 1), (0, 1), (2, 3), (1, 2), (3, 3)])
    assert subgraph_genus(g, [0, 1, 3]) == 1 + 2


def test_stable_degree_g_minus_one_is_uniform(corpus):
    checked = 0
    for g in corpus:
        if g.is_stable:
            for d in enumerate_stable(g, g.genus - 1):
                assert is_uniform(g, d)
                checked += 1
    assert checked > 0


def test_stable_degree_g_uniform_with_positive_weights(corpus):
    for g in corpus[:300]:
        w = new_graph([1] * len(g), [g.ends(e) for e in g.edges])
        assert w.is_stable
        for total in (w.genus - 1, w.genus):
            for d in enumerate_stable(w, total):
                assert is_uniform(w, d)


def test_stable_degree_g_need_not_be_uniform_with_rational_components():
    g = theta(3)
    assert not all(is_uniform(g, d) for d in enumerate_stable(g, g.genus))


def test_example_stable_violation_combinatorics():
    g, d = example_stable_violation()
    assert g.is_stable and not g.bridges
    assert d.total == 15 and g.genus == 15
    assert is_stable_multidegree(g, d)
    assert not is_uniform(g, d)
    assert classic_bound(g, d) == Fraction(17, 2)
