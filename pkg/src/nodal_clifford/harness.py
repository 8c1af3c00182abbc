"""Verification campaigns over uniform multidegrees and sampled gluings.

Every campaign is a pure function of ``(model, parameters, seed)``. Each
multidegree gets its own random stream derived from the seed and the
multidegree values, so sharding across workers never changes a report.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from collections.abc import Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .constructions import extremal_bundle, subdivide_model
from .curves import (
    CurveError,
    GluedLineBundle,
    RationalCurveModel,
    Sampler,
    branch_points,
    canonical_bundle,
    canonically_glued,
    h0,
    is_base_point,
    is_neutral_pair,
    large_ratio,
    neutral_gluing,
    partial_normalization,
    random_gluing,
    residual_bundle,
    restrict_subcurve,
    small_ratio,
    stabilize_bundle,
    structure_sheaf,
    trivially_glued,
    twist_point,
    vanishes_on,
)
from .formats import write_bundle, write_multidegree
from .graph import DualGraph, GraphError, leaf_count, stabilize
from .multidegree import (
    Multidegree,
    canonical_multidegree,
    classic_bound,
    clifford_bound,
    dhar,
    enumerate_stable,
    enumerate_uniform,
    is_uniform,
)

REPORT_VERSION = 1
SUBSET_CAP = 8


def _rng(seed: int, *parts: object) -> random.Random:
    # string seeds are hashed with sha512, so streams are stable across runs
    return random.Random(":".join(map(str, (seed, *parts))))


# -- candidate bundles ----------------------------------------------------------------


def divisor_bundle(m: RationalCurveModel, d: Multidegree) -> GluedLineBundle:
    """``O(D)`` with ``D`` an effective divisor of multidegree ``d >= 0`` at fresh points."""
    b = structure_sheaf(m)
    for v in m.graph.vertices:
        for p in m.fresh_points(v, d[v]):
            b = twist_point(b, v, p, +1)
    return b


def residual_divisor_bundle(m: RationalCurveModel, d: Multidegree) -> GluedLineBundle:
    """``omega(-D')`` with ``D'`` effective of multidegree ``K - d`` at fresh points."""
    b = canonical_bundle(m)
    k = canonical_multidegree(m.graph)
    for v in m.graph.vertices:
        for p in m.fresh_points(v, k[v] - d[v]):
            b = twist_point(b, v, p, -1)
    return b


def structured_bundles(m: RationalCurveModel, d: Multidegree, extremal: GluedLineBundle | None = None) -> list[tuple[str, GluedLineBundle]]:
    """Deterministic special gluings of a uniform multidegree ``d``."""
    k = canonical_multidegree(m.graph)
    out = [
        ("ones", trivially_glued(m, d)),
        ("canonical", canonically_glued(m, d)),
        ("divisor", divisor_bundle(m, d)),
        ("residual_divisor", residual_divisor_bundle(m, d)),
        ("residual_ones", residual_bundle(trivially_glued(m, k - d))),
    ]
    if extremal is not None and extremal.degree.values_tuple == d.values_tuple:
        out.append(("extremal", extremal))
    return out


def _extremal_or_none(m: RationalCurveModel) -> GluedLineBundle | None:
    try:
        return extremal_bundle(m)
    except (CurveError, GraphError):
        return None


def random_bundle(m: RationalCurveModel, rng: random.Random, slack: int = 1, sampler: Sampler = small_ratio) -> GluedLineBundle:
    """Degrees drawn from ``[-slack, K_v + slack]`` and a random gauge-normalized gluing."""
    g = m.graph
    d = {v: rng.randint(-slack, g.canonical_degree(v) + slack) for v in g.vertices}
    return GluedLineBundle(m, d, random_gluing(g, rng, sampler))


def random_uniform_bundle(m: RationalCurveModel, rng: random.Random, sampler: Sampler = small_ratio) -> GluedLineBundle:
    return random_bundle(m, rng, slack=0, sampler=sampler)


# -- reports ----------------------------------------------------------------------------


@dataclass
class Entry:
    """Outcome for one multidegree: the largest ``h0`` seen and where."""

    multidegree: Multidegree
    bound: Fraction
    max_h0: int
    witness: GluedLineBundle
    witness_kind: str
    samples: int
    witness_file: str | None = None

    @property
    def total(self) -> int:
        return self.multidegree.total

    @property
    def sharp(self) -> bool:
        return self.max_h0 == self.bound

    @property
    def exceeded(self) -> bool:
        return self.max_h0 > self.bound

    def to_json(self) -> dict:
        return {
            "multidegree": write_multidegree(self.multidegree).removeprefix("multidegree "),
            "total": self.total,
            "bound": str(self.bound),
            "max_h0": self.max_h0,
            "sharp": self.sharp,
            "witness_kind": self.witness_kind,
            "samples": self.samples,
            "witness_file": self.witness_file,
        }


@dataclass
class VerificationReport:
    kind: str
    graph: str
    genus: int
    leaves: int
    seed: int
    entries: list[Entry] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def exceedances(self) -> list[Entry]:
        return [e for e in self.entries if e.exceeded]

    @property
    def passed(self) -> bool:
        return not self.exceedances

    @property
    def sharp_entries(self) -> list[Entry]:
        return [e for e in self.entries if e.sharp]

    def dump_witnesses(self, directory: str | Path, everything: bool = False) -> list[Path]:
        """Write replayable bundle files for exceedances (or for every entry)."""
        directory = Path(directory)
        paths = []
        for i, e in enumerate(self.entries):
            if not (everything or e.exceeded):
                continue
            directory.mkdir(parents=True, exist_ok=True)
            path = directory / f"{self.kind}-{i:05d}.bundle"
            path.write_text(f"# h0 {e.max_h0} bound {e.bound} ({e.witness_kind})\n" + write_bundle(e.witness))
            e.witness_file = str(path)
            paths.append(path)
        return paths

    def to_json(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "kind": self.kind,
            "graph": self.graph,
            "genus": self.genus,
            "leaves": self.leaves,
            "seed": self.seed,
            "passed": self.passed,
            "entries": [e.to_json() for e in self.entries],
            **self.extra,
            "library_version": __version__,
        }

    def write(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")


def _label(g: DualGraph) -> str:
    es = ",".join(f"{e}:{a}-{b}" for e in g.edges for a, b in [g.ends(e)])
    return f"V={len(g)} E=[{es}]"


# -- campaigns ---------------------------------------------------------------------------


def _max_over(candidates: Iterable[tuple[str, GluedLineBundle]]) -> tuple[int, GluedLineBundle, str, int]:
    best = -1
    witness = None
    kind = ""
    n = 0
    for name, b in candidates:
        n += 1
        x = h0(b)
        if x > best:
            best, witness, kind = x, b, name
    return best, witness, kind, n  # type: ignore[return-value]


def _clifford_entry(m: RationalCurveModel, values: tuple[int, ...], samples: int, seed: int, extremal: GluedLineBundle | None) -> Entry:
    g = m.graph
    d = Multidegree(g, values)
    rng = _rng(seed, "clifford", *values)

    def candidates() -> Iterator[tuple[str, GluedLineBundle]]:
        yield from structured_bundles(m, d, extremal)
        for i in range(samples):
            yield f"sample {i}", GluedLineBundle(m, d, random_gluing(g, rng, small_ratio))

    best, witness, kind, n = _max_over(candidates())
    return Entry(d, clifford_bound(g, d), best, witness, kind, n)


def _generic_entry(m: RationalCurveModel, values: tuple[int, ...], trials: int, seed: int) -> Entry:
    g = m.graph
    d = Multidegree(g, values)
    rng = _rng(seed, "generic", *values)
    cands = ((f"trial {i}", GluedLineBundle(m, d, random_gluing(g, rng, large_ratio))) for i in range(trials))
    best, witness, kind, n = _max_over(cands)
    return Entry(d, classic_bound(g, d), best, witness, kind, n)


def _chunk_worker(args: tuple) -> list[Entry]:
    fn, m, chunk, param, seed, with_extremal = args
    extremal = _extremal_or_none(m) if with_extremal else None
    if fn == "clifford":
        return [_clifford_entry(m, vals, param, seed, extremal) for vals in chunk]
    return [_generic_entry(m, vals, param, seed) for vals in chunk]


def _run_entries(fn: str, m: RationalCurveModel, param: int, seed: int, workers: int | None) -> list[Entry]:
    all_vals = [d.values_tuple for d in enumerate_uniform(m.graph)]
    with_extremal = fn == "clifford"
    if not workers or workers <= 1 or len(all_vals) < 2:
        return _chunk_worker((fn, m, all_vals, param, seed, with_extremal))
    size = max(1, math.ceil(len(all_vals) / (4 * workers)))
    chunks = [all_vals[i : i + size] for i in range(0, len(all_vals), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_chunk_worker, [(fn, m, c, param, seed, with_extremal) for c in chunks])
        return [e for part in parts for e in part]


def _check_model(m: RationalCurveModel) -> None:
    if not m.graph.is_semistable:
        raise CurveError("campaigns need a semistable model")


def verify_clifford(m: RationalCurveModel, samples: int = 50, seed: int = 0, workers: int | None = None) -> VerificationReport:
    """``h0 <= d/2 + #leaves/2`` for every uniform multidegree.

    Each multidegree is tried with the structured gluings and ``samples``
    random gauge-normalized gluings with small numerators and denominators.
    """
    _check_model(m)
    g = m.graph
    report = VerificationReport("clifford", _label(g), g.genus, leaf_count(g.bridge_forest), seed)
    report.entries = _run_entries("clifford", m, samples, seed, workers)
    return report


def verify_generic(m: RationalCurveModel, trials: int = 200, seed: int = 0, workers: int | None = None) -> VerificationReport:
    """``h0 <= d/2 + 1`` per component for random gluings drawn from a large box.

    When the model is connected, the report also records the extremal
    bundle's ``h0`` against the same bound.
    """
    _check_model(m)
    g = m.graph
    report = VerificationReport("generic", _label(g), g.genus, leaf_count(g.bridge_forest), seed)
    report.entries = _run_entries("generic", m, trials, seed, workers)
    ext = _extremal_or_none(m)
    if ext is not None:
        x = h0(ext)
        bound = classic_bound(g, ext.degree)
        report.extra["extremal"] = {
            "multidegree": write_multidegree(ext.degree).removeprefix("multidegree "),
            "h0": x,
            "classic_bound": str(bound),
            "violates_classic": x > bound,
        }
    return report


# -- Clifford index -----------------------------------------------------------------------


@dataclass
class IndexEstimate:
    value: float | int
    witness: GluedLineBundle | None
    witness_kind: str = ""

    @property
    def infinite(self) -> bool:
        return self.value == math.inf


def clifford_index_estimate(m: RationalCurveModel, samples: int = 20, seed: int = 0) -> IndexEstimate:
    """Upper estimate of the Clifford index over uniform bundles.

    Minimum of ``d - 2 h0 + 2`` over the structured and sampled gluings with
    ``h0 >= 2`` and ``h1 = h0 - d + g - 1 >= 2``; ``inf`` when nothing
    qualifies.
    """
    g = m.graph
    _check_model(m)
    if g.genus < 2:
        raise CurveError(f"Clifford index needs genus >= 2, got {g.genus}")
    extremal = _extremal_or_none(m)
    best: IndexEstimate = IndexEstimate(math.inf, None)
    for d in enumerate_uniform(g):
        rng = _rng(seed, "index", *d.values_tuple)
        cands = list(structured_bundles(m, d, extremal))
        cands += [(f"sample {i}", GluedLineBundle(m, d, random_gluing(g, rng))) for i in range(samples)]
        for kind, b in cands:
            x = h0(b)
            h1 = x - d.total + g.arithmetic_genus - 1
            if x >= 2 and h1 >= 2:
                val = d.total - 2 * x + 2
                if val < best.value:
                    best = IndexEstimate(val, b, kind)
    return best


# -- lemma checks ---------------------------------------------------------------------------


@dataclass
class Check:
    count: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, ok: bool, what: str) -> None:
        self.count += 1
        if not ok:
            self.failures.append(what)


@dataclass
class LemmaReport:
    graph: str
    seed: int
    checks: dict[str, Check] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(not c.failures for c in self.checks.values())

    def check(self, name: str) -> Check:
        return self.checks.setdefault(name, Check())

    def to_json(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "kind": "lemmas",
            "graph": self.graph,
            "seed": self.seed,
            "passed": self.passed,
            "checks": {k: {"count": c.count, "failures": c.failures} for k, c in self.checks.items()},
        }


def _proper_subsets(vs: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    for r in range(1, len(vs)):
        yield from itertools.combinations(vs, r)


def check_riemann_roch(b: GluedLineBundle) -> bool:
    g = b.graph
    return h0(b) - h0(residual_bundle(b)) == b.total - g.arithmetic_genus + 1


def check_base_point_duality(b: GluedLineBundle, v: int, p: Fraction) -> bool:
    """``p`` is a base point of ``L`` iff it is not one of ``(omega ⊗ L^-1)(p)``."""
    mirror = twist_point(residual_bundle(b), v, p, +1)
    return is_base_point(b, v, p) != is_base_point(mirror, v, p)


def check_residual_bound(b: GluedLineBundle) -> bool:
    """The leaf bound holds for ``L`` iff its mirror holds for the residual."""
    g = b.graph
    half_leaves = Fraction(leaf_count(g.bridge_forest), 2)
    lhs = h0(b) <= Fraction(b.total, 2) + half_leaves
    rhs = h0(residual_bundle(b)) <= Fraction(2 * g.arithmetic_genus - 2 - b.total, 2) + half_leaves
    return lhs == rhs


def check_normalization(b: GluedLineBundle, e: int, scan: Iterable[int] = range(1, 6)) -> tuple[bool, bool]:
    """Sandwich ``h0(nu) - 1 <= h0 <= h0(nu)`` and the neutral-pair criterion at edge ``e``.

    The second flag compares "branch points are a neutral pair" with
    "some scanned gluing on ``e`` keeps ``h0``"; the scan covers the given
    ratios plus the closed-form one. When neither branch point is a base
    point, at most one scanned ratio may keep ``h0``.
    """
    nb = partial_normalization(b, e)
    top = h0(nb)
    x = h0(b)
    sandwich = top - 1 <= x <= top
    p1, p2 = branch_points(b, e)
    neutral = is_neutral_pair(nb, p1, p2)
    ratios = {Fraction(r) for r in scan}
    special = neutral_gluing(b, e)
    if special is not None:
        ratios.add(special)
    keeps = [r for r in sorted(ratios) if h0(b.with_gluing({e: (Fraction(1), r)})) == top]
    ok = neutral == bool(keeps)
    if not is_base_point(nb, *p1) and not is_base_point(nb, *p2):
        ok = ok and len(keeps) <= 1
    return sandwich, ok


def check_subcurve(b: GluedLineBundle, S: Iterable[int]) -> tuple[bool, bool]:
    """Restriction inequality, and equality when all sections vanish on ``S``."""
    S = set(S)
    on_y, on_c = restrict_subcurve(b, S)
    x = h0(b)
    rest = h0(on_c)
    ineq = x <= h0(on_y) + rest
    eq = x == rest if vanishes_on(b, S) else True
    return ineq, eq


def check_dhar_restriction(b: GluedLineBundle, v: int) -> bool:
    """If ``Dh(v, d)`` is everything then ``h0 <= d_v + 1``."""
    g = b.graph
    if dhar(g, b.degree, v) != frozenset(g.vertices):
        return True
    return h0(b) <= max(b.degree[v] + 1, 0)


def check_dhar_uniform(g: DualGraph, d: Multidegree, v: int) -> bool:
    """The complement of ``Dh(v, d)`` is semistable and carries a uniform twisted-down degree."""
    H = dhar(g, d, v)
    rest = [w for w in g.vertices if w not in H]
    if not rest:
        return True
    sub = g.induced(rest)
    if not sub.is_semistable:
        return False
    twisted = {}
    for w in rest:
        into = sum(1 for e in g.incident(w) if not g.is_loop(e) and g.other_end(e, w) in H)
        twisted[w] = d[w] - into
    return is_uniform(sub, Multidegree(sub, twisted))


def check_leaf_splitting(g: DualGraph, S: Iterable[int]) -> tuple[bool, bool]:
    """``#l(H) <= #l(G) + k`` and, for 2-edge-connected ``G``, ``#l(H) <= k``."""
    sub = g.induced(S)
    k = len(g.boundary_edges(S))
    lh = leaf_count(sub.bridge_forest)
    first = lh <= leaf_count(g.bridge_forest) + k
    second = lh <= k if (g.is_connected and not g.bridges) else True
    return first, second


def check_edge_removal(g: DualGraph, e: int) -> bool:
    return leaf_count(g.without_edges([e]).bridge_forest) == 2


def check_stabilization_leaves(g: DualGraph) -> bool:
    stable, _ = stabilize(g)
    return leaf_count(g.bridge_forest) == leaf_count(stable.bridge_forest)


def check_stable_uniform(g: DualGraph, total: int) -> tuple[int, list[str]]:
    """Every stable multidegree of the given total is uniform; returns (count, failures)."""
    n = 0
    bad = []
    for d in enumerate_stable(g, total):
        n += 1
        if not is_uniform(g, d):
            bad.append(write_multidegree(d))
    return n, bad


def verify_lemmas(m: RationalCurveModel, seed: int = 0, samples: int = 10) -> LemmaReport:
    """Run every bundle identity and graph lemma on one model.

    Bundle checks use ``samples`` random bundles (degrees in ``[-1, K_v + 1]``)
    and ``samples`` random uniform bundles. Subset-quantified checks run over
    all proper subsets when the graph has at most ``SUBSET_CAP`` vertices.
    """
    g = m.graph
    rng = _rng(seed, "lemmas")
    rep = LemmaReport(_label(g), seed)
    bundles = [random_bundle(m, rng) for _ in range(samples)]
    uniform = [random_uniform_bundle(m, rng) for _ in range(samples)] if g.is_semistable else []
    subsets = list(_proper_subsets(g.vertices)) if len(g) <= SUBSET_CAP else []

    for b in bundles + uniform:
        tag = write_bundle(b)
        rep.check("riemann_roch").record(check_riemann_roch(b), tag)
        rep.check("residual_bound").record(check_residual_bound(b), tag)
        for v in g.vertices:
            (p,) = m.fresh_points(v, 1)
            rep.check("base_point_duality").record(check_base_point_duality(b, v, p), tag)
            rep.check("dhar_restriction").record(check_dhar_restriction(b, v), tag)
        for e in g.edges:
            sandwich, neutral = check_normalization(b, e)
            rep.check("normalization_sandwich").record(sandwich, f"edge {e}\n{tag}")
            rep.check("neutral_pair").record(neutral, f"edge {e}\n{tag}")
        for S in subsets:
            ineq, eq = check_subcurve(b, S)
            rep.check("subcurve_inequality").record(ineq, f"S={S}\n{tag}")
            rep.check("subcurve_vanishing").record(eq, f"S={S}\n{tag}")

    if g.is_connected and g.is_semistable:
        k = h0(canonical_bundle(m))
        rep.check("canonical_h0").record(k == g.genus, f"h0(omega)={k}")
        for v in g.vertices:
            (p,) = m.fresh_points(v, 1)
            x = h0(twist_point(canonical_bundle(m), v, p, +1))
            rep.check("canonical_twist_up").record(x == g.genus, f"v={v} h0={x}")

    if g.is_semistable:
        for d in enumerate_uniform(g):
            for v in g.vertices:
                rep.check("dhar_uniform").record(check_dhar_uniform(g, d, v), f"{write_multidegree(d)} v={v}")

    if g.is_connected and g.is_semistable and g.genus >= 2:
        sub = m if not g.is_stable else subdivide_model(m, [g.edges[0]])
        for _ in range(samples):
            b = random_uniform_bundle(sub, rng)
            rep.check("stabilization_h0").record(h0(b) == h0(stabilize_bundle(b)), write_bundle(b))
        rep.check("stabilization_leaves").record(check_stabilization_leaves(sub.graph), _label(sub.graph))

    if g.is_connected:
        for S in subsets:
            first, second = check_leaf_splitting(g, S)
            rep.check("leaf_splitting").record(first, f"S={S}")
            rep.check("leaf_splitting_2ec").record(second, f"S={S}")
        if not g.bridges:
            for e in g.edges:
                rep.check("edge_removal").record(check_edge_removal(g, e), f"edge {e}")

    if g.is_stable and len(g) <= SUBSET_CAP:
        n, bad = check_stable_uniform(g, g.genus - 1)
        c = rep.check("stable_uniform")
        c.count += n
        c.failures += bad
        weighted = DualGraph({v: 1 for v in g.vertices}, g.edge_map)
        for total in (weighted.genus - 1, weighted.genus):
            n, bad = check_stable_uniform(weighted, total)
            c.count += n
            c.failures += bad
    return rep

