"""Weighted multigraphs with loops: the dual graphs of nodal curves.

Vertices and edges carry stable nonnegative integer ids. A vertex weight is
the geometric genus of the corresponding component. Loops count twice
towards valence and are never bridges.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property


class GraphError(ValueError):
    """Invalid graph data or a violated precondition on a graph."""


class DualGraph:
    """An immutable weighted multigraph with loops and parallel edges."""

    def __init__(self, weights: Mapping[int, int], edges: Mapping[int, tuple[int, int]]):
        w = {}
        for v, g in weights.items():
            if not isinstance(v, int) or v < 0:
                raise GraphError(f"vertex id must be a nonnegative integer, got {v!r}")
            if not isinstance(g, int) or g < 0:
                raise GraphError(f"vertex {v} has negative weight {g}")
            w[v] = g
        e = {}
        for eid, (a, b) in edges.items():
            if not isinstance(eid, int) or eid < 0:
                raise GraphError(f"edge id must be a nonnegative integer, got {eid!r}")
            if a not in w or b not in w:
                raise GraphError(f"edge {eid} has a dangling endpoint ({a}, {b})")
            e[eid] = (a, b)
        self._weights = dict(sorted(w.items()))
        self._edges = dict(sorted(e.items()))
        inc: dict[int, list[int]] = {v: [] for v in self._weights}
        for eid, (a, b) in self._edges.items():
            inc[a].append(eid)
            if b != a:
                inc[b].append(eid)
        self._incident = {v: tuple(es) for v, es in inc.items()}

    # -- basic access -----------------------------------------------------

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self._weights)

    @cached_property
    def vertex_index(self) -> dict[int, int]:
        """Position of each vertex in :attr:`vertices`."""
        return {v: i for i, v in enumerate(self._weights)}

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return tuple(self._edges)

    @property
    def weights(self) -> dict[int, int]:
        return dict(self._weights)

    @property
    def edge_map(self) -> dict[int, tuple[int, int]]:
        return dict(self._edges)

    def weight(self, v: int) -> int:
        self._check_vertex(v)
        return self._weights[v]

    def ends(self, e: int) -> tuple[int, int]:
        try:
            return self._edges[e]
        except KeyError:
            raise GraphError(f"unknown edge {e}") from None

    def is_loop(self, e: int) -> bool:
        a, b = self.ends(e)
        return a == b

    def incident(self, v: int) -> tuple[int, ...]:
        """Edge ids at ``v``, loops listed once."""
        self._check_vertex(v)
        return self._incident[v]

    def endpoints_at(self, v: int) -> list[tuple[int, int]]:
        """``(edge, side)`` pairs sitting on ``v``; a loop contributes both sides."""
        out = []
        for e in self.incident(v):
            a, b = self._edges[e]
            if a == v:
                out.append((e, 0))
            if b == v:
                out.append((e, 1))
        return out

    def other_end(self, e: int, v: int) -> int:
        a, b = self.ends(e)
        if v == a:
            return b
        if v == b:
            return a
        raise GraphError(f"vertex {v} is not an endpoint of edge {e}")

    def valence(self, v: int) -> int:
        self._check_vertex(v)
        return sum(2 if self._edges[e][0] == self._edges[e][1] else 1 for e in self._incident[v])

    def loops_at(self, v: int) -> int:
        return sum(1 for e in self.incident(v) if self.is_loop(e))

    def _check_vertex(self, v: int) -> None:
        if v not in self._weights:
            raise GraphError(f"unknown vertex {v}")

    def __len__(self) -> int:
        return len(self._weights)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DualGraph):
            return NotImplemented
        return self._weights == other._weights and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((tuple(self._weights.items()), tuple(self._edges.items())))

    def __repr__(self) -> str:
        return f"DualGraph(|V|={len(self._weights)}, |E|={len(self._edges)}, genus={self.genus})"

    # -- connectivity ------------------------------------------------------

    @cached_property
    def components(self) -> tuple[frozenset[int], ...]:
        """Connected components as vertex sets, ordered by smallest vertex."""
        seen: set[int] = set()
        comps = []
        for s in self._weights:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for e in self._incident[x]:
                    y = self.other_end(e, x)
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return tuple(comps)

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    def edges_within(self, S: Iterable[int]) -> list[int]:
        S = set(S)
        return [e for e, (a, b) in self._edges.items() if a in S and b in S]

    # -- genus ----------------------------------------------------------------

    def _component_genus(self, comp: frozenset[int]) -> int:
        ne = len(self.edges_within(comp))
        return 1 - len(comp) + ne + sum(self._weights[v] for v in comp)

    @cached_property
    def genus(self) -> int:
        """Sum over connected components of ``1 - |V| + |E| + sum g_v``."""
        return sum(self._component_genus(c) for c in self.components)

    @property
    def arithmetic_genus(self) -> int:
        """``1 - chi + sum g_v``; equals :attr:`genus` for connected graphs."""
        return 1 - len(self._weights) + len(self._edges) + sum(self._weights.values())

    # -- curve classes --------------------------------------------------------

    def canonical_degree(self, v: int) -> int:
        return 2 * self.weight(v) - 2 + self.valence(v)

    @property
    def is_semistable(self) -> bool:
        return all(self.canonical_degree(v) >= 0 for v in self._weights)

    @property
    def is_stable(self) -> bool:
        return all(self.canonical_degree(v) > 0 for v in self._weights)

    def exceptional_vertices(self) -> list[int]:
        """Weight-0 vertices of valence 2."""
        return [v for v in self._weights if self._weights[v] == 0 and self.valence(v) == 2]

    # -- derived graphs -------------------------------------------------------

    def without_edges(self, es: Iterable[int]) -> DualGraph:
        drop = set(es)
        for e in drop:
            self.ends(e)
        return DualGraph(self._weights, {e: ab for e, ab in self._edges.items() if e not in drop})

    def induced(self, S: Iterable[int]) -> DualGraph:
        S = set(S)
        for v in S:
            self._check_vertex(v)
        return DualGraph(
            {v: g for v, g in self._weights.items() if v in S},
            {e: ab for e, ab in self._edges.items() if ab[0] in S and ab[1] in S},
        )

    def boundary_edges(self, S: Iterable[int]) -> list[int]:
        """Edges with exactly one endpoint in ``S``."""
        S = set(S)
        return [e for e, (a, b) in self._edges.items() if (a in S) != (b in S)]

    @cached_property
    def bridges(self) -> frozenset[int]:
        return frozenset(find_bridges(self))

    @cached_property
    def bridge_forest(self) -> BridgeForest:
        return _bridge_forest(self)

    @property
    def leaf_count(self) -> int:
        return leaf_count(self.bridge_forest)


def new_graph(
    weights: Mapping[int, int] | Iterable[int],
    edges: Iterable[tuple[int, int]] | Mapping[int, tuple[int, int]],
) -> DualGraph:
    """Build a graph; a weight list means vertices ``0..n-1``, an edge list ids ``0..m-1``."""
    if not isinstance(weights, Mapping):
        weights = dict(enumerate(weights))
    if not isinstance(edges, Mapping):
        edges = dict(enumerate(tuple(p) for p in edges))
    return DualGraph(weights, edges)


def valence(g: DualGraph, v: int) -> int:
    return g.valence(v)


def is_semistable(g: DualGraph) -> bool:
    return g.is_semistable


def is_stable(g: DualGraph) -> bool:
    return g.is_stable


# -- bridges ------------------------------------------------------------------


def find_bridges(g: DualGraph) -> list[int]:
    """Bridge edge ids by iterative low-link depth-first search.

    The tree edge is skipped by id, not by parent vertex, so a parallel copy
    of a tree edge counts as a back edge.
    """
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    out = []
    t = 0
    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = t
        t += 1
        # (vertex, edge used to enter, iterator over incident edges)
        stack = [(root, -1, iter(g.incident(root)))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for e in it:
                if e == via or g.is_loop(e):
                    continue
                w = g.other_end(e, v)
                if w in disc:
                    if disc[w] < low[v]:
                        low[v] = disc[w]
                else:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, e, iter(g.incident(w))))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                if low[v] < low[p]:
                    low[p] = low[v]
                if low[v] > disc[p]:
                    out.append(via)
    return sorted(out)


def bridges(g: DualGraph) -> frozenset[int]:
    return g.bridges


# -- forest of 2-edge-connected components ------------------------------------


@dataclass(frozen=True)
class BridgeForest:
    """Contraction of all non-bridge edges.

    ``forest`` has one vertex per 2-edge-connected component (weighted by
    that component's genus) and keeps the bridge ids as its edge ids.
    """

    forest: DualGraph
    component_map: dict[int, int]
    members: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def leaves(self) -> list[int]:
        return [v for v in self.forest.vertices if self.forest.valence(v) == 1]


def _bridge_forest(g: DualGraph) -> BridgeForest:
    br = g.bridges
    h = g.without_edges(br)
    members = {i: tuple(sorted(c)) for i, c in enumerate(h.components)}
    cmap = {v: i for i, vs in members.items() for v in vs}
    weights = {i: h._component_genus(frozenset(vs)) for i, vs in members.items()}
    edges = {e: (cmap[g.ends(e)[0]], cmap[g.ends(e)[1]]) for e in sorted(br)}
    return BridgeForest(DualGraph(weights, edges), cmap, members)


def bridge_forest(g: DualGraph) -> BridgeForest:
    return g.bridge_forest


def leaf_count(f: BridgeForest | DualGraph) -> int:
    """Leaves summed over trees; a single-vertex tree counts 2.

    A :class:`DualGraph` argument is replaced by its bridge forest first.
    """
    forest = f.forest if isinstance(f, BridgeForest) else f.bridge_forest.forest
    total = 0
    for comp in forest.components:
        if len(comp) == 1:
            total += 2
        else:
            total += sum(1 for v in comp if forest.valence(v) == 1)
    return total


def induced_subgraph(g: DualGraph, S: Iterable[int]) -> tuple[DualGraph, int]:
    """Induced subgraph on ``S`` and the number of edges leaving it."""
    S = set(S)
    if not S:
        raise GraphError("induced subgraph of an empty vertex set")
    return g.induced(S), len(g.boundary_edges(S))


# -- stabilization ------------------------------------------------------------


@dataclass(frozen=True)
class ContractionStep:
    vertex: int  # exceptional vertex removed
    contracted: int  # edge collapsed into the neighbour
    surviving: int  # other edge at ``vertex``; now ends at ``target``
    target: int  # neighbour across ``contracted``


@dataclass(frozen=True)
class ContractionRecord:
    steps: tuple[ContractionStep, ...]
    edge_map: dict[int, int]  # surviving edge of the result -> edge of the source

    @property
    def contracted_edges(self) -> list[int]:
        return [s.contracted for s in self.steps]


def stabilize(g: DualGraph) -> tuple[DualGraph, ContractionRecord]:
    """Contract edges at exceptional vertices until the graph is stable.

    One edge per step, always the smallest edge id adjacent to an exceptional
    vertex. Surviving edges keep their ids.
    """
    if not g.is_connected:
        raise GraphError("stabilize needs a connected graph")
    if not g.is_semistable:
        raise GraphError("stabilize needs a semistable graph")
    if g.genus < 2:
        raise GraphError(f"stabilize needs genus >= 2, got {g.genus}")
    weights = dict(g._weights)
    edges = dict(g._edges)
    steps = []
    while True:
        cur = DualGraph(weights, edges)
        exc = set(cur.exceptional_vertices())
        if not exc:
            break
        e = min(e for e, (a, b) in edges.items() if a in exc or b in exc)
        a, b = edges[e]
        v = min(x for x in (a, b) if x in exc)
        x = b if v == a else a
        (other,) = [f for f in cur.incident(v) if f != e]
        p, q = edges[other]
        edges[other] = (x if p == v else p, x if q == v else q)
        del edges[e]
        del weights[v]
        steps.append(ContractionStep(v, e, other, x))
    result = DualGraph(weights, edges)
    return result, ContractionRecord(tuple(steps), {e: e for e in result.edges})


def subdivide(g: DualGraph, es: Iterable[int] | None = None) -> DualGraph:
    """Insert a weight-0 vertex in the middle of each listed edge (default: all).

    Edge ``e = (a, b)`` becomes ``(a, new)`` keeping id ``e`` and ``(new, b)``
    with a fresh id.
    """
    es = list(g.edges if es is None else es)
    weights = dict(g._weights)
    edges = dict(g._edges)
    nv = max(weights, default=-1) + 1
    ne = max(edges, default=-1) + 1
    for e in es:
        a, b = edges[e]
        weights[nv] = 0
        edges[e] = (a, nv)
        edges[ne] = (nv, b)
        nv += 1
        ne += 1
    return DualGraph(weights, edges)
