"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import random
import time
from fractions import Fraction

from conftest import record_acceptance

from nodal_clifford.constructions import (
    example_basic,
    example_stable_violation,
    example_stable_violation_surrogate,
    extremal_bundle,
    star_of_cycles,
    with_random_coords,
)
from nodal_clifford.curves import (
    GluedLineBundle,
    canonical_bundle,
    h0,
    partial_normalization,
    random_gluing,
    standard_model,
)
from nodal_clifford.graph import DualGraph, leaf_count
from nodal_clifford.harness import (
    check_dhar_restriction,
    check_dhar_uniform,
    check_edge_removal,
    check_leaf_splitting,
    check_normalization,
    check_riemann_roch,
    check_stabilization_leaves,
    check_stable_uniform,
    random_bundle,
    verify_clifford,
    verify_generic,
)
from nodal_clifford.multidegree import (
    classic_bound,
    clifford_bound,
    enumerate_uniform,
    is_stable_multidegree,
    is_uniform,
)
from test_graph import brute_bridges


def _proper_subsets(vs):
    n = len(vs)
    for mask in range(1, (1 << n) - 1):
        yield [vs[i] for i in range(n) if mask >> i & 1]


def test_criterion_1_main_inequality(full_corpus):
    start = time.perf_counter()
    exceed = []
    missing_sharp = []
    entries = 0
    for i, (name, g) in enumerate(full_corpus):
        rep = verify_clifford(with_random_coords(g, i), samples=50, seed=i)
        entries += len(rep.entries)
        exceed += [(name, e.multidegree.values_tuple) for e in rep.exceedances]
        if rep.leaves >= 3 and not rep.sharp_entries:
            missing_sharp.append(name)
    elapsed = time.perf_counter() - start
    ok = not exceed and not missing_sharp
    record_acceptance(
        1,
        ok,
        f"{len(full_corpus)} graphs, {entries} multidegrees x >=55 gluings, "
        f"{len(exceed)} exceedances, {len(missing_sharp)} #l>=3 graphs without a sharp hit, {elapsed:.0f}s",
    )
    assert ok, (exceed[:5], missing_sharp[:5])


def test_criterion_2_sharpness(full_corpus):
    bad = []
    by_leaves: dict[int, int] = {}
    for i, (name, g) in enumerate(full_corpus):
        b = extremal_bundle(with_random_coords(g, i))
        if not (is_uniform(g, b.degree) and h0(b) == clifford_bound(g, b.degree)):
            bad.append(name)
        by_leaves[leaf_count(g)] = by_leaves.get(leaf_count(g), 0) + 1
    ok = not bad and all(by_leaves.get(n, 0) > 0 for n in (3, 4, 5))
    record_acceptance(2, ok, f"equality on {sum(by_leaves.values())} models, leaf counts {dict(sorted(by_leaves.items()))}, {len(bad)} misses")
    assert ok, bad[:5]


def test_criterion_3_classic_violation():
    m, b = example_basic()
    x = h0(b)
    ok = x == 3 and b.total == 3 and is_uniform(m.graph, b.degree) and x > Fraction(b.total, 2) + 1
    record_acceptance(3, ok, f"h0 = {x}, total {b.total}, uniform {is_uniform(m.graph, b.degree)}, classic bound 5/2")
    assert ok


def test_criterion_4_generic_behaviour():
    rep = verify_generic(standard_model(star_of_cycles(3, 2)), trials=200, seed=0)
    ext = rep.extra["extremal"]
    ok = rep.passed and ext["violates_classic"]
    record_acceptance(
        4,
        ok,
        f"{len(rep.entries)} multidegrees x 200 trials, {len(rep.exceedances)} classic violations; "
        f"extremal h0 {ext['h0']} > {ext['classic_bound']}",
    )
    assert ok


def test_criterion_5_riemann_roch(full_corpus):
    rng = random.Random(5)
    graphs = [g for _, g in full_corpus]
    n = 0
    bad = 0
    while n < 1200:
        g = rng.choice(graphs)
        b = random_bundle(with_random_coords(g, rng.randrange(10**9)), rng, slack=2)
        n += 1
        bad += not check_riemann_roch(b)
    record_acceptance(5, bad == 0, f"{n} random bundles, {bad} failures of h0(L) - h0(omega/L) = d - g + 1")
    assert bad == 0


def test_criterion_6_canonical(full_corpus):
    bad = [name for i, (name, g) in enumerate(full_corpus) if h0(canonical_bundle(with_random_coords(g, i))) != g.genus]
    record_acceptance(6, not bad, f"{len(full_corpus)} models, {len(bad)} with h0(omega) != g")
    assert not bad


def test_criterion_7_graph_lemmas(full_corpus):
    counts = {"splitting": 0, "edge_removal": 0, "stabilization": 0, "bridges": 0}
    bad = []
    for name, g in full_corpus:
        for S in _proper_subsets(list(g.vertices)):
            a, b = check_leaf_splitting(g, S)
            counts["splitting"] += 1
            if not (a and b):
                bad.append((name, "splitting", S))
        if not g.bridges:
            for e in g.edges:
                counts["edge_removal"] += 1
                if not check_edge_removal(g, e):
                    bad.append((name, "edge_removal", e))
        if g.genus >= 2:
            counts["stabilization"] += 1
            if not check_stabilization_leaves(g):
                bad.append((name, "stabilization", None))
        counts["bridges"] += 1
        if set(g.bridges) != brute_bridges(g):
            bad.append((name, "bridges", None))
    record_acceptance(7, not bad, f"checks {counts}, {len(bad)} failures")
    assert not bad, bad[:5]


def test_criterion_8_dhar(corpus):
    rng = random.Random(8)
    uniform_checks = 0
    restriction_checks = 0
    bad = []
    for i, g in enumerate(corpus):
        m = with_random_coords(g, i)
        for d in enumerate_uniform(g):
            b = None
            for v in g.vertices:
                uniform_checks += 1
                if not check_dhar_uniform(g, d, v):
                    bad.append((i, d.values_tuple, v, "uniform"))
                if b is None:
                    b = GluedLineBundle(m, d, random_gluing(g, rng))
                restriction_checks += 1
                if not check_dhar_restriction(b, v):
                    bad.append((i, d.values_tuple, v, "restriction"))
    record_acceptance(8, not bad, f"{uniform_checks} (d, v) complement checks, {restriction_checks} restriction checks, {len(bad)} failures")
    assert not bad, bad[:5]


def test_criterion_9_stable_multidegrees(corpus):
    stable_count = 0
    bad = []
    for g in corpus:
        if not g.is_stable:
            continue
        n, fails = check_stable_uniform(g, g.genus - 1)
        stable_count += n
        bad += fails
        weighted = DualGraph({v: 1 for v in g.vertices}, g.edge_map)
        n, fails = check_stable_uniform(weighted, weighted.genus)
        stable_count += n
        bad += fails
    g, d = example_stable_violation()
    bound = classic_bound(g, d)
    example_ok = is_stable_multidegree(g, d) and not is_uniform(g, d) and bound == Fraction(17, 2)
    sb = example_stable_violation_surrogate()
    x = h0(sb)
    surrogate_ok = x > classic_bound(sb.graph, sb.degree)
    ok = not bad and stable_count > 0 and example_ok and surrogate_ok
    record_acceptance(
        9,
        ok,
        f"{stable_count} stable multidegrees all uniform ({len(bad)} not); reconstruction stable with bound {bound} vs 9; "
        f"weight-0 surrogate h0 = {x} > {classic_bound(sb.graph, sb.degree)}",
    )
    assert ok


def test_criterion_10_neutral_pair_sandwich(corpus):
    rng = random.Random(10)
    cases = 0
    equal = 0
    bad = []
    graphs = [g for g in corpus if g.edges][::25]
    for i, g in enumerate(graphs):
        m = with_random_coords(g, i)
        bundles = [random_bundle(m, rng) for _ in range(2)] + [canonical_bundle(m)]
        for b in bundles:
            for e in g.edges:
                sandwich, neutral_ok = check_normalization(b, e)
                cases += 1
                if h0(b) == h0(partial_normalization(b, e)):
                    equal += 1
                if not (sandwich and neutral_ok):
                    bad.append((i, e))
    ok = not bad and cases >= 20 and 0 < equal < cases
    record_acceptance(10, ok, f"{cases} (bundle, node) cases ({equal} with equality), {len(bad)} failures")
    assert ok, bad[:5]
