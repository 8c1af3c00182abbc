"""Nodal curves whose components are all projective lines, and line bundles on them.

Every component ``X_v`` is a copy of P^1 with an affine coordinate ``z``. An
edge ``e = (u, w)`` is a node gluing the point ``coords[(e, 0)]`` on ``X_u``
to ``coords[(e, 1)]`` on ``X_w``.

A line bundle has degree ``d_v`` on ``X_v``; its sections there are
polynomials of degree at most ``d_v`` (none if ``d_v < 0``), and evaluation
at a finite point trivialises the fibre. The bundle is glued at each node by
a pair ``(c0, c1)`` of nonzero scalars: a global section is a tuple of
polynomials with ``c0 * s_u(a) == c1 * s_w(b)`` at every edge. Pairs rather
than ratios keep tensor operations local.

All arithmetic is exact over the rationals. The dimension of a rational
linear system does not change under field extension, so ``h0`` here equals
``h0`` over an algebraically closed field of characteristic zero.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Callable, Iterable, Mapping
from fractions import Fraction
from functools import cached_property, lru_cache

from .graph import ContractionRecord, DualGraph, GraphError, stabilize
from .linalg import integer_rank, nullspace
from .multidegree import Multidegree, canonical_multidegree, zero_multidegree

Endpoint = tuple[int, int]  # (edge id, side 0|1)
Gluing = Mapping[int, tuple[Fraction, Fraction]]


class CurveError(ValueError):
    """Invalid curve model or bundle, or a violated precondition."""


def _q(x: object) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)  # type: ignore[arg-type]


class RationalCurveModel:
    """A dual graph with all weights 0 plus node coordinates on each component."""

    def __init__(self, graph: DualGraph, coords: Mapping[Endpoint, Fraction | int]):
        if any(graph.weight(v) != 0 for v in graph.vertices):
            raise CurveError("rational curve models need all vertex weights 0")
        cs: dict[Endpoint, Fraction] = {}
        for e in graph.edges:
            for side in (0, 1):
                if (e, side) not in coords:
                    raise CurveError(f"missing coordinate for edge {e} side {side}")
                cs[(e, side)] = _q(coords[(e, side)])
        extra = set(coords) - set(cs)
        if extra:
            raise CurveError(f"coordinates given for unknown endpoints {sorted(extra)}")
        self.graph = graph
        self.coords = cs
        for v in graph.vertices:
            pts = [cs[p] for p in graph.endpoints_at(v)]
            if len(set(pts)) != len(pts):
                raise CurveError(f"node coordinates on component {v} are not distinct: {pts}")

    def points(self, v: int) -> list[tuple[Endpoint, Fraction]]:
        """Node points on ``X_v`` in (edge id, side) order."""
        return [(p, self.coords[p]) for p in self.graph.endpoints_at(v)]

    def node_coordinates(self, v: int) -> list[Fraction]:
        return [c for _, c in self.points(v)]

    def fresh_points(self, v: int, k: int) -> list[Fraction]:
        """``k`` integers above every node coordinate on ``X_v``."""
        cs = self.node_coordinates(v)
        start = int(max(cs)) + 1 if cs else 0
        return [Fraction(start + i) for i in range(k)]

    def submodel(self, S: Iterable[int]) -> RationalCurveModel:
        sub = self.graph.induced(S)
        return RationalCurveModel(sub, {(e, s): self.coords[(e, s)] for e in sub.edges for s in (0, 1)})

    def without_edges(self, es: Iterable[int]) -> RationalCurveModel:
        sub = self.graph.without_edges(es)
        return RationalCurveModel(sub, {(e, s): self.coords[(e, s)] for e in sub.edges for s in (0, 1)})

    @cached_property
    def canonical_gluing(self) -> dict[int, tuple[Fraction, Fraction]]:
        """Residue functionals of ``P(z) dz / prod(z - a_i)`` at each branch.

        The residue at ``a_i`` is ``P(a_i) / prod_{j != i}(a_i - a_j)``; the
        residues at the two branches of a node sum to zero.
        """
        scale: dict[Endpoint, Fraction] = {}
        for v in self.graph.vertices:
            pts = self.points(v)
            for p, a in pts:
                prod = Fraction(1)
                for q, b in pts:
                    if q != p:
                        prod *= a - b
                scale[p] = 1 / prod
        return {e: (scale[(e, 0)], -scale[(e, 1)]) for e in self.graph.edges}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalCurveModel):
            return NotImplemented
        return self.graph == other.graph and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.graph, tuple(sorted(self.coords.items()))))

    def __repr__(self) -> str:
        return f"RationalCurveModel({self.graph!r})"


def standard_model(g: DualGraph) -> RationalCurveModel:
    """Coordinates ``0, 1, 2, ...`` on each component in (edge id, side) order."""
    coords = {}
    for v in g.vertices:
        for i, p in enumerate(g.endpoints_at(v)):
            coords[p] = Fraction(i)
    return RationalCurveModel(g, coords)


class GluedLineBundle:
    """Multidegree plus a nonzero scalar pair per edge on a rational curve model."""

    def __init__(self, model: RationalCurveModel, degree: Multidegree | Mapping[int, int], gluing: Gluing):
        if not isinstance(degree, Multidegree) or degree.graph != model.graph:
            degree = Multidegree(model.graph, degree if not isinstance(degree, Multidegree) else degree.as_dict())
        glue: dict[int, tuple[Fraction, Fraction]] = {}
        for e in model.graph.edges:
            if e not in gluing:
                raise CurveError(f"missing gluing for edge {e}")
            c0, c1 = gluing[e]
            c0, c1 = _q(c0), _q(c1)
            if c0 == 0 or c1 == 0:
                raise CurveError(f"gluing scalars on edge {e} must be nonzero")
            glue[e] = (c0, c1)
        self.model = model
        self.degree = degree
        self.gluing = glue

    @property
    def graph(self) -> DualGraph:
        return self.model.graph

    @property
    def total(self) -> int:
        return self.degree.total

    def with_gluing(self, changes: Gluing) -> GluedLineBundle:
        glue = dict(self.gluing)
        glue.update(changes)
        return GluedLineBundle(self.model, self.degree, glue)

    def __repr__(self) -> str:
        return f"GluedLineBundle({self.degree!r})"


# -- the section space -----------------------------------------------------------


def _block_layout(b: GluedLineBundle) -> tuple[dict[int, int], int]:
    offsets = {}
    n = 0
    for v in b.graph.vertices:
        dv = b.degree[v]
        if dv >= 0:
            offsets[v] = n
            n += dv + 1
    return offsets, n


def _scaled_evaluation(c: Fraction, a: Fraction, deg: int) -> tuple[list[int], int]:
    """Integers ``m * c * a**k`` for ``k = 0..deg`` and the scale ``m``."""
    p, q = c.numerator, c.denominator
    r, s = a.numerator, a.denominator
    # c * a^k * q * s^deg = p * r^k * s^(deg-k)
    out = [0] * (deg + 1)
    rk = 1
    spow = [1] * (deg + 1)
    for k in range(1, deg + 1):
        spow[k] = spow[k - 1] * s
    for k in range(deg + 1):
        out[k] = p * rk * spow[deg - k]
        rk *= r
    return out, q * spow[deg]


def constraint_rows(b: GluedLineBundle) -> tuple[list[list[int]], int, dict[int, int]]:
    """Integer rows whose right kernel is ``H^0(X, L)``.

    Columns are monomial coefficients, ``d_v + 1`` per component with
    ``d_v >= 0``; one row per edge. Each row is a rational multiple of the
    evaluation identity ``c0 * s_u(a) - c1 * s_w(b) = 0``.
    """
    offsets, ncols = _block_layout(b)
    g = b.graph
    coords = b.model.coords
    rows = []
    for e in g.edges:
        u, w = g.ends(e)
        c0, c1 = b.gluing[e]
        left = right = None
        if u in offsets:
            left = _scaled_evaluation(c0, coords[(e, 0)], b.degree[u])
        if w in offsets:
            right = _scaled_evaluation(c1, coords[(e, 1)], b.degree[w])
        if left is None and right is None:
            continue
        row = [0] * ncols
        if left is not None and right is not None:
            lv, lm = left
            rv, rm = right
            o = offsets[u]
            for k, x in enumerate(lv):
                row[o + k] += x * rm
            o = offsets[w]
            for k, x in enumerate(rv):
                row[o + k] -= x * lm
        elif left is not None:
            o = offsets[u]
            for k, x in enumerate(left[0]):
                row[o + k] = x
        else:
            o = offsets[w]
            for k, x in enumerate(right[0]):  # type: ignore[index]
                row[o + k] = -x
        rows.append(row)
    return rows, ncols, offsets


def h0(b: GluedLineBundle) -> int:
    """Dimension of the space of global sections."""
    rows, ncols, _ = constraint_rows(b)
    if ncols == 0:
        return 0
    rows = [r for r in rows if any(r)]
    return ncols - integer_rank(rows, ncols)


def sections(b: GluedLineBundle) -> list[dict[int, tuple[Fraction, ...]]]:
    """A basis of global sections; each maps a component to its coefficient tuple."""
    rows, ncols, offsets = constraint_rows(b)
    basis = nullspace(rows, ncols)
    out = []
    for vec in basis:
        sec = {}
        for v in b.graph.vertices:
            if v in offsets:
                o = offsets[v]
                sec[v] = tuple(vec[o : o + b.degree[v] + 1])
            else:
                sec[v] = ()
        out.append(sec)
    return out


def vanishes_on(b: GluedLineBundle, S: Iterable[int]) -> bool:
    """Whether every global section is identically zero on the components ``S``."""
    S = set(S)
    return all(all(x == 0 for v in S for x in sec[v]) for sec in sections(b))


def evaluate(poly: tuple[Fraction, ...], z: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * z + c
    return acc


# -- standard bundles ------------------------------------------------------------


def ones_gluing(g: DualGraph) -> dict[int, tuple[Fraction, Fraction]]:
    one = Fraction(1)
    return {e: (one, one) for e in g.edges}


def structure_sheaf(m: RationalCurveModel) -> GluedLineBundle:
    return GluedLineBundle(m, zero_multidegree(m.graph), ones_gluing(m.graph))


def trivially_glued(m: RationalCurveModel, d: Multidegree | Mapping[int, int]) -> GluedLineBundle:
    """Degree ``d`` with every gluing pair ``(1, 1)``."""
    return GluedLineBundle(m, d, ones_gluing(m.graph))


def canonical_bundle(m: RationalCurveModel) -> GluedLineBundle:
    """The dualizing sheaf, glued by residues."""
    g = m.graph
    for v in g.vertices:
        if g.valence(v) < 2:
            raise CurveError(f"component {v} has valence {g.valence(v)} < 2; model not semistable")
    return GluedLineBundle(m, canonical_multidegree(g), m.canonical_gluing)


def canonically_glued(m: RationalCurveModel, d: Multidegree | Mapping[int, int]) -> GluedLineBundle:
    """Degree ``d`` with the gluing of the dualizing sheaf."""
    return GluedLineBundle(m, d, m.canonical_gluing)


def residual_bundle(b: GluedLineBundle) -> GluedLineBundle:
    """``omega_X`` tensor the inverse of ``b``."""
    m = b.model
    k = m.canonical_gluing
    d = canonical_multidegree(m.graph) - b.degree
    glue = {e: (k[e][0] / b.gluing[e][0], k[e][1] / b.gluing[e][1]) for e in m.graph.edges}
    return GluedLineBundle(m, d, glue)


def tensor(b1: GluedLineBundle, b2: GluedLineBundle) -> GluedLineBundle:
    if b1.model != b2.model:
        raise CurveError("tensor product of bundles on different models")
    glue = {e: (b1.gluing[e][0] * b2.gluing[e][0], b1.gluing[e][1] * b2.gluing[e][1]) for e in b1.graph.edges}
    return GluedLineBundle(b1.model, b1.degree + b2.degree, glue)


# -- twists ------------------------------------------------------------------------


def twist_point(b: GluedLineBundle, v: int, p: Fraction | int, sign: int) -> GluedLineBundle:
    """``L(-p)`` for ``sign = -1`` and ``L(p)`` for ``sign = +1`` at a smooth point of ``X_v``.

    Sections of ``L(-p)`` on ``X_v`` are ``(z - p) * t(z)``; the factor
    ``(a - p)`` at each node point ``a`` moves into the gluing scalar.
    """
    if sign not in (1, -1):
        raise CurveError(f"sign must be +1 or -1, got {sign}")
    p = _q(p)
    g = b.graph
    g.weight(v)
    pts = b.model.points(v)
    if any(a == p for _, a in pts):
        raise CurveError(f"point {p} collides with a node coordinate on component {v}")
    glue = dict(b.gluing)
    for (e, side), a in pts:
        pair = list(glue[e])
        pair[side] = pair[side] * (a - p) if sign < 0 else pair[side] / (a - p)
        glue[e] = (pair[0], pair[1])
    return GluedLineBundle(b.model, b.degree.with_values({v: b.degree[v] + sign}), glue)


def twist_points(b: GluedLineBundle, points: Iterable[tuple[int, Fraction | int]], sign: int) -> GluedLineBundle:
    for v, p in points:
        b = twist_point(b, v, p, sign)
    return b


def is_base_point(b: GluedLineBundle, v: int, p: Fraction | int) -> bool:
    return h0(b) == h0(twist_point(b, v, p, -1))


def is_neutral_pair(b: GluedLineBundle, p1: tuple[int, Fraction], p2: tuple[int, Fraction]) -> bool:
    """``h0(L(-p1)) == h0(L(-p2)) == h0(L(-p1-p2))``."""
    l1 = twist_point(b, p1[0], p1[1], -1)
    l2 = twist_point(b, p2[0], p2[1], -1)
    l12 = twist_point(l1, p2[0], p2[1], -1)
    return h0(l1) == h0(l2) == h0(l12)


# -- normalization and subcurves ---------------------------------------------------


def partial_normalization(b: GluedLineBundle, e: int) -> GluedLineBundle:
    """Pull-back to the curve with node ``e`` separated; degrees unchanged."""
    b.graph.ends(e)
    m = b.model.without_edges([e])
    return GluedLineBundle(m, Multidegree(m.graph, b.degree.as_dict()), {f: c for f, c in b.gluing.items() if f != e})


def branch_points(b: GluedLineBundle, e: int) -> tuple[tuple[int, Fraction], tuple[int, Fraction]]:
    """The two preimages ``(component, coordinate)`` of node ``e``."""
    u, w = b.graph.ends(e)
    return (u, b.model.coords[(e, 0)]), (w, b.model.coords[(e, 1)])


def neutral_gluing(b: GluedLineBundle, e: int) -> Fraction | None:
    """The gluing ratio ``c1/c0`` on ``e`` at which ``h0`` does not drop under normalization.

    Returns ``None`` when every ratio works (both branch points are base points
    of the normalized bundle) or none does (they are not a neutral pair, or
    the normalized bundle has no sections). Otherwise evaluation at the two
    branch points are proportional nonzero functionals ``ev2 = lam * ev1``,
    and the unique ratio is ``1 / lam``.
    """
    nb = partial_normalization(b, e)
    (u, a), (w, c) = branch_points(b, e)
    basis = sections(nb)
    if not basis:
        return None
    ev1 = [evaluate(s[u], a) if nb.degree[u] >= 0 else Fraction(0) for s in basis]
    ev2 = [evaluate(s[w], c) if nb.degree[w] >= 0 else Fraction(0) for s in basis]
    if not any(ev1) and not any(ev2):
        return None
    if not any(ev1) or not any(ev2):
        return None
    i = next(i for i, x in enumerate(ev1) if x != 0)
    lam = ev2[i] / ev1[i]
    if any(y != lam * x for x, y in zip(ev1, ev2)):
        return None
    # c0 * s_u(a) = c1 * s_w(c) with c0 = 1 holds for all sections iff c1 = 1/lam
    return 1 / lam


def restrict_subcurve(b: GluedLineBundle, S: Iterable[int]) -> tuple[GluedLineBundle, GluedLineBundle]:
    """``L|_Y`` and ``L|_{Y^c}(-Y ∩ Y^c)`` for the subcurve ``Y`` with components ``S``."""
    g = b.graph
    S = set(S)
    if not S or S >= set(g.vertices):
        raise CurveError("restriction needs a proper nonempty set of components")
    rest = [v for v in g.vertices if v not in S]

    def piece(vs: Iterable[int]) -> GluedLineBundle:
        m = b.model.submodel(vs)
        return GluedLineBundle(m, {v: b.degree[v] for v in m.graph.vertices}, {e: b.gluing[e] for e in m.graph.edges})

    on_y = piece(S)
    on_c = piece(rest)
    for e in g.boundary_edges(S):
        u, w = g.ends(e)
        side = 0 if u not in S else 1
        v = u if side == 0 else w
        on_c = twist_point(on_c, v, b.model.coords[(e, side)], -1)
    return on_y, on_c


# -- stabilization ----------------------------------------------------------------


def _apply_contractions(
    model: RationalCurveModel, record: ContractionRecord, gluing: Gluing | None = None
) -> tuple[dict[int, tuple[int, int]], dict[Endpoint, Fraction], dict[int, tuple[Fraction, Fraction]] | None]:
    edges = model.graph.edge_map
    coords = dict(model.coords)
    glue = dict(gluing) if gluing is not None else None
    for st in record.steps:
        v, e, f, x = st.vertex, st.contracted, st.surviving, st.target
        a, _ = edges[e]
        side_x_e = 0 if a == x else 1
        side_v_f = 0 if edges[f][0] == v else 1
        coords[(f, side_v_f)] = coords[(e, side_x_e)]
        if glue is not None:
            c_x = glue[e][side_x_e]
            c_v1 = glue[e][1 - side_x_e]
            c_v2 = glue[f][side_v_f]
            c_y = glue[f][1 - side_v_f]
            pair = [Fraction(0), Fraction(0)]
            pair[side_v_f] = c_x * c_v2
            pair[1 - side_v_f] = c_v1 * c_y
            glue[f] = (pair[0], pair[1])
            del glue[e]
        p, q = edges[f]
        edges[f] = (x if p == v else p, x if q == v else q)
        del edges[e]
        del coords[(e, 0)], coords[(e, 1)]
    return edges, coords, glue


def stabilize_model(m: RationalCurveModel) -> tuple[RationalCurveModel, ContractionRecord]:
    stable, record = stabilize(m.graph)
    _, coords, _ = _apply_contractions(m, record)
    return RationalCurveModel(stable, coords), record


def stabilize_bundle(b: GluedLineBundle) -> GluedLineBundle:
    """Push-forward along the contraction of exceptional components.

    On a contracted component of degree 0 the section is a constant fixed by
    either node constraint, so the two gluing pairs compose into one.
    """
    try:
        stable, record = stabilize(b.graph)
    except GraphError as exc:
        raise CurveError(str(exc)) from exc
    for st in record.steps:
        if b.degree[st.vertex] != 0:
            raise CurveError(f"degree {b.degree[st.vertex]} on exceptional component {st.vertex}; must be 0")
    _, coords, glue = _apply_contractions(b.model, record, b.gluing)
    m = RationalCurveModel(stable, coords)
    return GluedLineBundle(m, {v: b.degree[v] for v in stable.vertices}, glue)  # type: ignore[arg-type]


# -- gauge -------------------------------------------------------------------------


@lru_cache(maxsize=256)
def spanning_forest(g: DualGraph) -> frozenset[int]:
    """Tree edges of a breadth-first spanning forest (smallest ids first)."""
    seen: set[int] = set()
    tree: set[int] = set()
    for root in g.vertices:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for e in g.incident(x):
                y = g.other_end(e, x)
                if y not in seen:
                    seen.add(y)
                    tree.add(e)
                    queue.append(y)
    return frozenset(tree)


def gauge_normalize(b: GluedLineBundle) -> GluedLineBundle:
    """Rescale section bases so every pair is ``(1, r)`` and tree pairs are ``(1, 1)``.

    The remaining ratios on the ``|E| - |V| + 1`` non-tree edges are the
    coordinates of the bundle in the gluing torus.
    """
    g = b.graph
    if not g.is_connected:
        raise CurveError("gauge_normalize needs a connected model; normalize each component")
    tree = spanning_forest(g)
    root = g.vertices[0]
    lam: dict[int, Fraction] = {root: Fraction(1)}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for e in g.incident(x):
            if e not in tree:
                continue
            y = g.other_end(e, x)
            if y in lam:
                continue
            c0, c1 = b.gluing[e]
            u, _ = g.ends(e)
            # rescaled pair is (c0 / lam_u, c1 / lam_w); make it proportional to (1, 1)
            if u == x:
                lam[y] = c1 * lam[x] / c0
            else:
                lam[y] = c0 * lam[x] / c1
            queue.append(y)
    glue = {}
    for e in g.edges:
        u, w = g.ends(e)
        c0, c1 = b.gluing[e]
        glue[e] = (Fraction(1), (c1 / lam[w]) / (c0 / lam[u]))
    return GluedLineBundle(b.model, b.degree, glue)


def gauge_coordinates(b: GluedLineBundle) -> dict[int, Fraction]:
    """Ratios on the non-tree edges after :func:`gauge_normalize`."""
    nb = gauge_normalize(b)
    tree = spanning_forest(b.graph)
    return {e: nb.gluing[e][1] for e in b.graph.edges if e not in tree}


Sampler = Callable[[random.Random], Fraction]


def small_ratio(rng: random.Random) -> Fraction:
    """Numerators in ``[-3, 3] minus 0``, denominators in ``[1, 3]``; hits special loci often."""
    return Fraction(rng.choice((-3, -2, -1, 1, 2, 3)), rng.randint(1, 3))


def large_ratio(rng: random.Random, bound: int = 10**6) -> Fraction:
    """Numerator in ``[-bound, bound] minus 0`` over a denominator in ``[1, bound]``."""
    p = 0
    while p == 0:
        p = rng.randint(-bound, bound)
    return Fraction(p, rng.randint(1, bound))


def random_gluing(g: DualGraph, rng: random.Random, sampler: Sampler = small_ratio) -> dict[int, tuple[Fraction, Fraction]]:
    """A gauge-normalized gluing: ``(1, 1)`` on a spanning forest, ``(1, r)`` elsewhere."""
    tree = spanning_forest(g)
    one = Fraction(1)
    return {e: (one, one) if e in tree else (one, sampler(rng)) for e in g.edges}
