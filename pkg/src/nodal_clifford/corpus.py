"""Exhaustive small corpora of dual graphs, up to isomorphism."""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from functools import lru_cache

from .constructions import star_of_cycles, theta
from .graph import DualGraph, new_graph

EdgeList = tuple[tuple[int, int], ...]


def _connected(n: int, edges: EdgeList) -> bool:
    adj = [0] * n
    for a, b in edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    seen = 1
    frontier = 1
    full = (1 << n) - 1
    while frontier:
        nxt = 0
        for i in range(n):
            if frontier >> i & 1:
                nxt |= adj[i]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == full


def _class_perms(classes: list[list[int]]) -> Iterator[list[int]]:
    """Relabelings that keep each class of vertices in its block of positions."""
    for choice in itertools.product(*(itertools.permutations(c) for c in classes)):
        perm = {}
        pos = 0
        for block in choice:
            for v in block:
                perm[v] = pos
                pos += 1
        yield [perm[v] for v in range(len(perm))]


def canonical_form(n: int, edges: EdgeList) -> EdgeList:
    """Lexicographically least relabeled edge list among invariant-respecting relabelings."""
    val = [0] * n
    loops = [0] * n
    for a, b in edges:
        val[a] += 1
        val[b] += 1
        if a == b:
            loops[a] += 1
    nbr: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        if a != b:
            nbr[a].append(val[b])
            nbr[b].append(val[a])
    inv = [(-val[v], -loops[v], tuple(sorted(nbr[v], reverse=True))) for v in range(n)]
    order = sorted(range(n), key=lambda v: inv[v])
    classes = [list(grp) for _, grp in itertools.groupby(order, key=lambda v: inv[v])]
    best = None
    for perm in _class_perms(classes):
        cand = tuple(sorted((min(perm[a], perm[b]), max(perm[a], perm[b])) for a, b in edges))
        if best is None or cand < best:
            best = cand
    return best  # type: ignore[return-value]


@lru_cache(maxsize=None)
def _connected_semistable_forms(n: int, max_edges: int) -> tuple[EdgeList, ...]:
    types = [(i, j) for i in range(n) for j in range(i, n)]
    seen = set()
    out = []
    for m in range(max(1, n), max_edges + 1):
        for combo in itertools.combinations_with_replacement(types, m):
            val = [0] * n
            for a, b in combo:
                val[a] += 1
                val[b] += 1
            # some relabeling has non-increasing valences; keep only those
            if any(val[i] < val[i + 1] for i in range(n - 1)) or val[n - 1] < 2:
                continue
            if not _connected(n, combo):
                continue
            key = canonical_form(n, combo)
            if key not in seen:
                seen.add(key)
                out.append(key)
    return tuple(out)


def exhaustive_corpus(max_vertices: int = 5, max_edges: int = 8) -> list[DualGraph]:
    """All connected semistable weight-0 multigraphs (loops allowed) up to isomorphism.

    Ordered by vertex count, then edge count, then canonical edge list.
    """
    graphs = []
    for n in range(1, max_vertices + 1):
        forms = sorted(_connected_semistable_forms(n, max_edges), key=lambda f: (len(f), f))
        graphs.extend(new_graph([0] * n, f) for f in forms)
    return graphs


def named_families() -> list[tuple[str, DualGraph]]:
    """``theta(k)`` for ``k = 2..5`` and ``star_of_cycles(l, 2)`` for ``l = 2..5``."""
    fams = [(f"theta({k})", theta(k)) for k in range(2, 6)]
    fams += [(f"star_of_cycles({l},2)", star_of_cycles(l, 2)) for l in range(2, 6)]
    return fams


def default_corpus(max_vertices: int = 5, max_edges: int = 8) -> list[tuple[str, DualGraph]]:
    named = named_families()
    exhaustive = [(f"exhaustive[{i}]", g) for i, g in enumerate(exhaustive_corpus(max_vertices, max_edges))]
    return exhaustive + named


def graph_label(g: DualGraph) -> str:
    """Compact one-line description, e.g. ``V=2 E=[(0,1),(0,1),(0,1)] w=[0,0]``."""
    es = ",".join(f"({a},{b})" for a, b in (g.ends(e) for e in g.edges))
    ws = ",".join(str(g.weight(v)) for v in g.vertices)
    return f"V={len(g)} E=[{es}] w=[{ws}]"
