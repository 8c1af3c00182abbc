"""Graph families, curve models and the explicit extremal and counterexample bundles."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .curves import (
    CurveError,
    GluedLineBundle,
    RationalCurveModel,
    canonical_bundle,
    ones_gluing,
    standard_model,
    twist_point,
)
from .graph import DualGraph, GraphError, leaf_count, new_graph, subdivide
from .multidegree import Multidegree


# -- families -----------------------------------------------------------------------


def cycle(n: int) -> DualGraph:
    """``n`` weight-0 vertices in a cycle; ``cycle(1)`` is a loop, ``cycle(2)`` a double edge."""
    if n < 1:
        raise GraphError("cycle needs n >= 1")
    return new_graph([0] * n, [(i, (i + 1) % n) for i in range(n)])


def theta(k: int) -> DualGraph:
    """Two weight-0 vertices joined by ``k`` parallel edges (genus ``k - 1``)."""
    if k < 1:
        raise GraphError("theta needs k >= 1")
    return new_graph([0, 0], [(0, 1)] * k)


def star_of_cycles(leaves: int, cycle_len: int = 2) -> DualGraph:
    """A weight-0 centre joined by one bridge to one vertex of each of ``leaves`` cycles.

    Vertex 0 is the centre; each cycle occupies the next ``cycle_len`` ids and
    its first vertex carries the bridge.
    """
    if leaves < 1 or cycle_len < 1:
        raise GraphError("star_of_cycles needs leaves >= 1 and cycle_len >= 1")
    weights = [0]
    edges = []
    for _ in range(leaves):
        base = len(weights)
        weights.extend([0] * cycle_len)
        edges.append((0, base))
        for j in range(cycle_len):
            edges.append((base + j, base + (j + 1) % cycle_len))
    return new_graph(weights, edges)


def subdivided(g: DualGraph, es: list[int] | None = None) -> DualGraph:
    return subdivide(g, es)


def subdivide_model(m: RationalCurveModel, es: list[int] | None = None) -> RationalCurveModel:
    """Subdivide edges of a model, keeping every existing node coordinate.

    The new component gets coordinate 0 towards the old first end and 1
    towards the old second end.
    """
    g = m.graph
    es = list(g.edges if es is None else es)
    sub = subdivide(g, es)
    coords = dict(m.coords)
    fresh = sorted(set(sub.edges) - set(g.edges))
    for e, f in zip(es, fresh):
        coords[(f, 1)] = coords[(e, 1)]
        coords[(e, 1)] = Fraction(0)
        coords[(f, 0)] = Fraction(1)
    return RationalCurveModel(sub, coords)


def weight_zero_surrogate(g: DualGraph) -> DualGraph:
    """Replace each vertex of weight ``h > 0`` by a weight-0 vertex with ``h`` pendant 2-cycles.

    Genus, canonical degrees of surviving vertices and the bridge structure
    are preserved; each 2-cycle stands in for a genus-1 component.
    """
    weights = {v: 0 for v in g.vertices}
    edges = g.edge_map
    nv = max(g.vertices, default=-1) + 1
    ne = max(g.edges, default=-1) + 1
    for v in g.vertices:
        for _ in range(g.weight(v)):
            weights[nv] = 0
            edges[ne] = (v, nv)
            edges[ne + 1] = (v, nv)
            nv += 1
            ne += 2
    return DualGraph(weights, edges)


def random_semistable(n_vertices: int, n_edges: int, seed: int, max_attempts: int = 100_000) -> tuple[DualGraph, int]:
    """A random connected semistable weight-0 multigraph and the number of draws it took."""
    if n_vertices < 1:
        raise GraphError("need at least one vertex")
    if n_edges < n_vertices:
        raise GraphError(f"{n_vertices} vertices cannot be connected semistable with {n_edges} < {n_vertices} edges")
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        edges = [(rng.randrange(n_vertices), rng.randrange(n_vertices)) for _ in range(n_edges)]
        g = new_graph([0] * n_vertices, [tuple(sorted(p)) for p in edges])
        if g.is_connected and g.is_semistable:
            return g, attempt
    raise GraphError(f"no connected semistable draw in {max_attempts} attempts")


def with_random_coords(g: DualGraph, seed: int, bound: int = 50) -> RationalCurveModel:
    """Distinct random rational node coordinates on each component."""
    rng = random.Random(seed)
    coords = {}
    for v in g.vertices:
        used: set[Fraction] = set()
        for p in g.endpoints_at(v):
            while True:
                c = Fraction(rng.randint(-bound, bound), rng.randint(1, 7))
                if c not in used:
                    break
            used.add(c)
            coords[p] = c
    return RationalCurveModel(g, coords)


@dataclass(frozen=True)
class CorpusSpec:
    """A named, seeded family member; equal specs give identical graphs."""

    family: str
    params: tuple[int, ...] = ()
    seed: int = 0

    def build(self) -> DualGraph:
        f = self.family
        if f == "cycle":
            return cycle(*self.params)
        if f == "theta":
            return theta(*self.params)
        if f == "star_of_cycles":
            return star_of_cycles(*self.params)
        if f == "random_semistable":
            return random_semistable(*self.params, seed=self.seed)[0]
        raise GraphError(f"unknown family {f!r}")

    @property
    def name(self) -> str:
        return f"{self.family}({','.join(map(str, self.params))})"


# -- extremal bundles -------------------------------------------------------------


def _assemble(m: RationalCurveModel, pieces: list[GluedLineBundle]) -> GluedLineBundle:
    """Glue bundles on disjoint submodels, with ``(1, 1)`` on all remaining edges."""
    degree = {v: 0 for v in m.graph.vertices}
    glue = ones_gluing(m.graph)
    for b in pieces:
        degree.update(b.degree.as_dict())
        glue.update(b.gluing)
    return GluedLineBundle(m, degree, glue)


def leaf_components(g: DualGraph) -> list[tuple[tuple[int, ...], int]]:
    """For a connected graph: each leaf 2-edge-connected component and its attaching bridge."""
    bf = g.bridge_forest
    out = []
    for leaf in bf.leaves():
        (bridge,) = bf.forest.incident(leaf)
        out.append((bf.members[leaf], bridge))
    return out


def extremal_bundle(m: RationalCurveModel) -> GluedLineBundle:
    """A uniform bundle attaining ``h0 = total/2 + #leaves/2``.

    With two leaves (bridgeless case) this is the dualizing sheaf. Otherwise
    each leaf component ``Y_i`` carries its own dualizing sheaf twisted up at
    the attaching node ``p_i``; since ``p_i`` is a base point there, all
    sections vanish on the rest of the curve, which carries the structure
    sheaf.
    """
    g = m.graph
    if not g.is_connected:
        raise CurveError("extremal_bundle needs a connected model")
    if not g.is_semistable:
        raise CurveError("extremal_bundle needs a semistable model")
    if leaf_count(g.bridge_forest) == 2:
        return canonical_bundle(m)
    pieces = []
    for members, bridge in leaf_components(g):
        sub = m.submodel(members)
        u, w = g.ends(bridge)
        side = 0 if u in members else 1
        v = u if side == 0 else w
        pieces.append(twist_point(canonical_bundle(sub), v, m.coords[(bridge, side)], +1))
    return _assemble(m, pieces)


# -- worked examples ------------------------------------------------------------


def example_basic() -> tuple[RationalCurveModel, GluedLineBundle]:
    """Rational centre with three genus-1 tails (each a 2-cycle), total degree 3, ``h0 = 3``.

    Each tail carries the structure sheaf twisted up at its attaching node,
    so that node is a base point and sections vanish on the centre.
    """
    g = star_of_cycles(3, 2)
    m = standard_model(g)
    pieces = []
    for members, bridge in leaf_components(g):
        sub = m.submodel(members)
        u, w = g.ends(bridge)
        side = 0 if u in members else 1
        v = u if side == 0 else w
        o = GluedLineBundle(sub, {x: 0 for x in members}, ones_gluing(sub.graph))
        pieces.append(twist_point(o, v, m.coords[(bridge, side)], +1))
    return m, _assemble(m, pieces)


def example_stable_violation() -> tuple[DualGraph, Multidegree]:
    """A stable bridgeless graph with a stable multidegree of total 15 beating ``d/2 + 1``.

    Vertex 0 is a 9-valent rational centre; vertices 1..9 have weight 1 and
    valence 2, each with one edge to the centre; vertices 10, 11, 12 are
    rational and trivalent, each joined to three of the weight-1 vertices.
    Genus 15; degrees 0 at the centre, 1 on the weight-1 vertices, 2 on the
    trivalent ones.
    """
    weights = [0] + [1] * 9 + [0, 0, 0]
    edges = [(0, i) for i in range(1, 10)]
    edges += [(i, 10 + (i - 1) // 3) for i in range(1, 10)]
    g = new_graph(weights, edges)
    d = Multidegree(g, [0] + [1] * 9 + [2, 2, 2])
    return g, d


def example_stable_violation_surrogate() -> GluedLineBundle:
    """Weight-0 model of :func:`example_stable_violation` with ``L|_{X_i} = O(p_i)`` analogues."""
    g0, d0 = example_stable_violation()
    g = weight_zero_surrogate(g0)
    m = standard_model(g)
    degree = {v: (d0[v] if v in g0.vertices else 0) for v in g.vertices}
    base = {v: degree[v] - (1 if v in range(1, 10) else 0) for v in g.vertices}
    b = GluedLineBundle(m, base, ones_gluing(g))
    for i in range(1, 10):
        (e,) = [e for e in g.incident(i) if g.other_end(e, i) == 0]
        b = _twist_at_node(b, e, 0 if g.ends(e)[0] == i else 1)
    return b


def _twist_at_node(b: GluedLineBundle, e: int, side: int) -> GluedLineBundle:
    """``L(p)`` at the branch of node ``e`` on the given side, gluing of ``e`` untouched.

    Equivalent to twisting the normalization at the branch point and
    re-gluing ``e`` with its original pair.
    """
    m = b.model
    v = m.graph.ends(e)[side]
    p = m.coords[(e, side)]
    glue = dict(b.gluing)
    for (f, s), a in m.points(v):
        if (f, s) == (e, side):
            continue
        pair = list(glue[f])
        pair[s] = pair[s] / (a - p)
        glue[f] = (pair[0], pair[1])
    return GluedLineBundle(m, b.degree.with_values({v: b.degree[v] + 1}), glue)
