"""Line-oriented text formats for graphs, multidegrees and glued bundles.

Graph files hold ``vertex <id> <weight>`` and ``edge <id> <u> <v>`` lines.
Bundle files extend them with ``coord <edge> <side> <p/q>``, ``deg <v>:<int>``
and ``glue <edge> <p/q> <p/q>``; an edge without a ``glue`` line is glued by
``(1, 1)``. Everything after ``#`` is a comment.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .curves import CurveError, GluedLineBundle, RationalCurveModel
from .graph import DualGraph, GraphError
from .multidegree import Multidegree


class FormatError(ValueError):
    """Malformed input; the message names the offending line."""

    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _nonneg(tok: str, lineno: int, what: str) -> int:
    try:
        x = int(tok)
    except ValueError:
        raise FormatError(lineno, f"{what} must be an integer, got {tok!r}") from None
    if x < 0:
        raise FormatError(lineno, f"{what} must be nonnegative, got {x}")
    return x


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(lineno, f"{what} must be an integer, got {tok!r}") from None


def _rational(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(lineno, f"bad rational {tok!r}") from None


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if toks:
            yield lineno, toks


def _vertex_pair(tok: str, lineno: int) -> tuple[int, int]:
    v, sep, x = tok.partition(":")
    if not sep:
        raise FormatError(lineno, f"expected <vertex>:<int>, got {tok!r}")
    return _nonneg(v, lineno, "vertex id"), _int(x, lineno, "degree")


# -- graphs -------------------------------------------------------------------------


def _parse(text: str, bundle: bool):
    weights: dict[int, int] = {}
    edges: dict[int, tuple[int, int]] = {}
    coords: dict[tuple[int, int], tuple[Fraction, int]] = {}
    degs: dict[int, tuple[int, int]] = {}
    glue: dict[int, tuple[Fraction, Fraction, int]] = {}
    edge_line: dict[int, int] = {}
    for lineno, toks in _lines(text):
        kind, args = toks[0], toks[1:]
        if kind == "vertex":
            if len(args) != 2:
                raise FormatError(lineno, "expected 'vertex <id> <weight>'")
            v = _nonneg(args[0], lineno, "vertex id")
            if v in weights:
                raise FormatError(lineno, f"duplicate vertex {v}")
            weights[v] = _nonneg(args[1], lineno, "weight")
        elif kind == "edge":
            if len(args) != 3:
                raise FormatError(lineno, "expected 'edge <id> <u> <v>'")
            e = _nonneg(args[0], lineno, "edge id")
            if e in edges:
                raise FormatError(lineno, f"duplicate edge {e}")
            edges[e] = (_nonneg(args[1], lineno, "endpoint"), _nonneg(args[2], lineno, "endpoint"))
            edge_line[e] = lineno
        elif bundle and kind == "coord":
            if len(args) != 3:
                raise FormatError(lineno, "expected 'coord <edge> <side> <p/q>'")
            e = _nonneg(args[0], lineno, "edge id")
            side = _nonneg(args[1], lineno, "side")
            if side > 1:
                raise FormatError(lineno, f"side must be 0 or 1, got {side}")
            if (e, side) in coords:
                raise FormatError(lineno, f"duplicate coord for edge {e} side {side}")
            coords[(e, side)] = (_rational(args[2], lineno), lineno)
        elif bundle and kind == "deg":
            if not args:
                raise FormatError(lineno, "expected 'deg <v>:<int> ...'")
            for tok in args:
                v, x = _vertex_pair(tok, lineno)
                if v in degs:
                    raise FormatError(lineno, f"duplicate degree for vertex {v}")
                degs[v] = (x, lineno)
        elif bundle and kind == "glue":
            if len(args) != 3:
                raise FormatError(lineno, "expected 'glue <edge> <p/q> <p/q>'")
            e = _nonneg(args[0], lineno, "edge id")
            if e in glue:
                raise FormatError(lineno, f"duplicate glue for edge {e}")
            c0, c1 = _rational(args[1], lineno), _rational(args[2], lineno)
            if c0 == 0 or c1 == 0:
                raise FormatError(lineno, "gluing scalars must be nonzero")
            glue[e] = (c0, c1, lineno)
        else:
            raise FormatError(lineno, f"unknown directive {kind!r}")
    for e, (a, b) in edges.items():
        for x in (a, b):
            if x not in weights:
                raise FormatError(edge_line[e], f"edge {e} references unknown vertex {x}")
    return weights, edges, coords, degs, glue


def parse_graph(text: str) -> DualGraph:
    weights, edges, *_ = _parse(text, bundle=False)
    try:
        return DualGraph(weights, edges)
    except GraphError as exc:
        raise FormatError(0, str(exc)) from exc


def write_graph(g: DualGraph) -> str:
    out = [f"vertex {v} {g.weight(v)}" for v in g.vertices]
    out += [f"edge {e} {g.ends(e)[0]} {g.ends(e)[1]}" for e in g.edges]
    return "\n".join(out) + "\n"


# -- multidegrees -------------------------------------------------------------------


def parse_multidegree(text: str, g: DualGraph) -> Multidegree:
    """A single ``multidegree v:int ...`` line covering every vertex of ``g``."""
    found = None
    for lineno, toks in _lines(text):
        if toks[0] != "multidegree":
            raise FormatError(lineno, f"unknown directive {toks[0]!r}")
        if found is not None:
            raise FormatError(lineno, "more than one multidegree line")
        vals: dict[int, int] = {}
        for tok in toks[1:]:
            v, x = _vertex_pair(tok, lineno)
            if v in vals:
                raise FormatError(lineno, f"duplicate vertex {v}")
            vals[v] = x
        if set(vals) != set(g.vertices):
            raise FormatError(lineno, f"multidegree must list exactly the vertices {list(g.vertices)}")
        found = Multidegree(g, vals)
    if found is None:
        raise FormatError(0, "no multidegree line")
    return found


def write_multidegree(d: Multidegree) -> str:
    return "multidegree " + " ".join(f"{v}:{d[v]}" for v in sorted(d.graph.vertices))


# -- bundles ------------------------------------------------------------------------


def parse_bundle(text: str) -> GluedLineBundle:
    weights, edges, coords, degs, glue = _parse(text, bundle=True)
    try:
        g = DualGraph(weights, edges)
    except GraphError as exc:
        raise FormatError(0, str(exc)) from exc
    for (e, _), (_, lineno) in coords.items():
        if e not in edges:
            raise FormatError(lineno, f"coord for unknown edge {e}")
    for v, (_, lineno) in degs.items():
        if v not in weights:
            raise FormatError(lineno, f"degree for unknown vertex {v}")
    for e, (*_, lineno) in glue.items():
        if e not in edges:
            raise FormatError(lineno, f"glue for unknown edge {e}")
    missing = [v for v in g.vertices if v not in degs]
    if missing:
        raise FormatError(0, f"no degree given for vertices {missing}")
    one = Fraction(1)
    try:
        m = RationalCurveModel(g, {k: c for k, (c, _) in coords.items()})
        return GluedLineBundle(
            m,
            {v: x for v, (x, _) in degs.items()},
            {e: (glue[e][0], glue[e][1]) if e in glue else (one, one) for e in g.edges},
        )
    except (CurveError, GraphError) as exc:
        raise FormatError(0, str(exc)) from exc


def write_bundle(b: GluedLineBundle) -> str:
    g = b.graph
    out = [write_graph(g).rstrip("\n")]
    for e in g.edges:
        for side in (0, 1):
            out.append(f"coord {e} {side} {b.model.coords[(e, side)]}")
    out += [f"deg {v}:{b.degree[v]}" for v in g.vertices]
    out += [f"glue {e} {b.gluing[e][0]} {b.gluing[e][1]}" for e in g.edges]
    return "\n".join(out) + "\n"


def read_graph(path: str | Path) -> DualGraph:
    return parse_graph(Path(path).read_text())


def read_bundle(path: str | Path) -> GluedLineBundle:
    return parse_bundle(Path(path).read_text())
