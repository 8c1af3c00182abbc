"""Multidegrees on dual graphs.

A multidegree assigns an integer (possibly negative) to every vertex. This
module holds the uniform range between the structure sheaf and the dualizing
sheaf, the residual, the leaf-count bound on ``h0``, Dhar subgraphs and the
stability condition for totals ``g - 1`` and ``g``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction

from .graph import DualGraph, GraphError, leaf_count

STABILITY_VERTEX_CAP = 14


class Multidegree(Mapping[int, int]):
    """Immutable vertex -> integer map tied to a graph's vertex set."""

    __slots__ = ("graph", "_values")

    def __init__(self, graph: DualGraph, values: Mapping[int, int] | Iterable[int]):
        if isinstance(values, Mapping):
            if set(values) != set(graph.vertices):
                missing = set(graph.vertices) - set(values)
                extra = set(values) - set(graph.vertices)
                raise GraphError(f"multidegree vertices mismatch (missing {sorted(missing)}, extra {sorted(extra)})")
            vals = tuple(int(values[v]) for v in graph.vertices)
        else:
            vals = tuple(int(x) for x in values)
            if len(vals) != len(graph):
                raise GraphError(f"multidegree has {len(vals)} entries for {len(graph)} vertices")
        self.graph = graph
        self._values = vals

    def __getitem__(self, v: int) -> int:
        try:
            return self._values[self.graph.vertex_index[v]]
        except KeyError:
            raise KeyError(v) from None

    def __iter__(self) -> Iterator[int]:
        return iter(self.graph.vertices)

    def __len__(self) -> int:
        return len(self._values)

    @property
    def values_tuple(self) -> tuple[int, ...]:
        return self._values

    @property
    def total(self) -> int:
        return sum(self._values)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.graph.vertices, self._values))

    def restrict(self, S: Iterable[int]) -> Multidegree:
        S = set(S)
        sub = self.graph.induced(S)
        return Multidegree(sub, {v: self[v] for v in sub.vertices})

    def with_values(self, changes: Mapping[int, int]) -> Multidegree:
        d = self.as_dict()
        d.update(changes)
        return Multidegree(self.graph, d)

    def __add__(self, other: Multidegree) -> Multidegree:
        return Multidegree(self.graph, [a + b for a, b in zip(self._values, other._values)])

    def __sub__(self, other: Multidegree) -> Multidegree:
        return Multidegree(self.graph, [a - b for a, b in zip(self._values, other._values)])

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multidegree):
            return self.graph == other.graph and self._values == other._values
        return super().__eq__(other)

    def __hash__(self) -> int:
        return hash(self._values)

    def __repr__(self) -> str:
        body = " ".join(f"{v}:{x}" for v, x in zip(self.graph.vertices, self._values))
        return f"Multidegree({body})"


def canonical_multidegree(g: DualGraph) -> Multidegree:
    """Degree of the dualizing sheaf: ``2 g_v - 2 + val(v)``."""
    return Multidegree(g, [g.canonical_degree(v) for v in g.vertices])


def zero_multidegree(g: DualGraph) -> Multidegree:
    return Multidegree(g, [0] * len(g))


def is_uniform(g: DualGraph, d: Multidegree) -> bool:
    return all(0 <= d[v] <= g.canonical_degree(v) for v in g.vertices)


def residual(g: DualGraph, d: Multidegree) -> Multidegree:
    return canonical_multidegree(g) - d


def clifford_bound(g: DualGraph, d: Multidegree | int) -> Fraction:
    """``total/2 + #leaves/2`` as an exact rational."""
    total = d if isinstance(d, int) else d.total
    return Fraction(total, 2) + Fraction(leaf_count(g.bridge_forest), 2)


def classic_bound(g: DualGraph, d: Multidegree | int) -> Fraction:
    """``total/2 + 1`` per connected component."""
    total = d if isinstance(d, int) else d.total
    return Fraction(total, 2) + len(g.components)


# -- Dhar subgraphs ------------------------------------------------------------


def _edges_into(g: DualGraph, w: int, H: set[int]) -> int:
    return sum(1 for e in g.incident(w) if not g.is_loop(e) and g.other_end(e, w) in H)


def dhar_chain(g: DualGraph, d: Mapping[int, int], v: int, start: Iterable[int] | None = None) -> list[frozenset[int]]:
    """The increasing sequence ``H_0 = {v} ⊂ H_1 ⊂ ... ⊂ H_n``.

    A vertex outside ``H_i`` joins when its degree minus the number of its
    edges into ``H_i`` is strictly negative; the reduction is always taken
    from the original ``d``.
    """
    g.weight(v)
    H = set(start) if start is not None else {v}
    H.add(v)
    chain = [frozenset(H)]
    while True:
        frontier = {g.other_end(e, x) for x in H for e in g.incident(x)} - H
        burnt = {w for w in frontier if d[w] - _edges_into(g, w, H) < 0}
        if not burnt:
            return chain
        H |= burnt
        chain.append(frozenset(H))


def dhar(g: DualGraph, d: Mapping[int, int], v: int) -> frozenset[int]:
    return dhar_chain(g, d, v)[-1]


# -- stable multidegrees -------------------------------------------------------


def subgraph_genus(g: DualGraph, S: Iterable[int]) -> int:
    """Genus of the induced subgraph, summed over its connected components."""
    return g.induced(S).genus


def _check_stability_input(g: DualGraph, total: int) -> None:
    if not g.is_stable:
        raise GraphError("stable multidegrees are defined on stable graphs only")
    if total not in (g.genus - 1, g.genus):
        raise GraphError(f"total degree {total} outside {{g-1, g}} = {{{g.genus - 1}, {g.genus}}}")
    if len(g) > STABILITY_VERTEX_CAP:
        raise GraphError(f"stability check is brute force; capped at {STABILITY_VERTEX_CAP} vertices, got {len(g)}")


def _subset_genera(g: DualGraph) -> list[tuple[tuple[int, ...], int]]:
    """Every nonempty proper vertex subset with the genus of its induced subgraph."""
    vs = g.vertices
    n = len(vs)
    idx = {v: i for i, v in enumerate(vs)}
    ends = [(1 << idx[a]) | (1 << idx[b]) for a, b in (g.ends(e) for e in g.edges)]
    weights = [g.weight(v) for v in vs]
    out = []
    for mask in range(1, (1 << n) - 1):
        inner = [em for em in ends if em & mask == em]
        # components of the induced subgraph by repeated merging of edge masks
        comps: list[int] = []
        for i in range(n):
            if mask >> i & 1:
                comps.append(1 << i)
        for em in inner:
            hit = [c for c in comps if c & em]
            if len(hit) > 1:
                merged = 0
                for c in hit:
                    merged |= c
                comps = [c for c in comps if not c & em] + [merged]
        wsum = sum(weights[i] for i in range(n) if mask >> i & 1)
        genus = len(inner) - bin(mask).count("1") + len(comps) + wsum
        out.append((tuple(vs[i] for i in range(n) if mask >> i & 1), genus))
    return out


def is_stable_multidegree(g: DualGraph, d: Multidegree) -> bool:
    """Every nonempty proper vertex subset ``Y`` has degree sum at least ``g(Y)``."""
    _check_stability_input(g, d.total)
    return all(sum(d[v] for v in S) >= gy for S, gy in _subset_genera(g))


# -- enumeration -----------------------------------------------------------------


def enumerate_uniform(g: DualGraph) -> Iterator[Multidegree]:
    """All uniform multidegrees in lexicographic order (empty if not semistable)."""
    if not g.is_semistable:
        return
    ranges = [range(g.canonical_degree(v) + 1) for v in g.vertices]
    for vals in itertools.product(*ranges):
        yield Multidegree(g, vals)


def count_uniform(g: DualGraph) -> int:
    if not g.is_semistable:
        return 0
    n = 1
    for v in g.vertices:
        n *= g.canonical_degree(v) + 1
    return n


def enumerate_stable(g: DualGraph, total: int) -> Iterator[Multidegree]:
    """All stable multidegrees of the given total in lexicographic order."""
    _check_stability_input(g, total)
    subsets = _subset_genera(g)
    vs = g.vertices
    lo = [subgraph_genus(g, [v]) for v in vs]
    hi = [total - subgraph_genus(g, [w for w in vs if w != v]) for v in vs]
    n = len(vs)
    suffix_lo = [0] * (n + 1)
    suffix_hi = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_lo[i] = suffix_lo[i + 1] + lo[i]
        suffix_hi[i] = suffix_hi[i + 1] + hi[i]

    def rec(i: int, left: int, acc: list[int]) -> Iterator[list[int]]:
        if i == n:
            if left == 0:
                yield acc
            return
        for x in range(lo[i], hi[i] + 1):
            rest = left - x
            if suffix_lo[i + 1] <= rest <= suffix_hi[i + 1]:
                acc.append(x)
                yield from rec(i + 1, rest, acc)
                acc.pop()

    index = {v: i for i, v in enumerate(vs)}
    for vals in rec(0, total, []):
        if all(sum(vals[index[v]] for v in S) >= gy for S, gy in subsets):
            yield Multidegree(g, vals)
