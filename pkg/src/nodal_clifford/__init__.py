"""Dual graphs of nodal curves, uniform multidegrees and exact ``h0`` on rational models."""

from __future__ import annotations

from .curves import (
    CurveError,
    GluedLineBundle,
    RationalCurveModel,
    canonical_bundle,
    gauge_normalize,
    h0,
    partial_normalization,
    residual_bundle,
    restrict_subcurve,
    stabilize_bundle,
    standard_model,
    structure_sheaf,
    twist_point,
)
from .graph import BridgeForest, DualGraph, GraphError, bridge_forest, bridges, leaf_count, new_graph, stabilize
from .multidegree import (
    Multidegree,
    canonical_multidegree,
    clifford_bound,
    dhar,
    enumerate_stable,
    enumerate_uniform,
    is_stable_multidegree,
    is_uniform,
    residual,
)

__version__ = "0.1.0"

__all__ = [
    "BridgeForest",
    "CurveError",
    "DualGraph",
    "GluedLineBundle",
    "GraphError",
    "Multidegree",
    "RationalCurveModel",
    "bridge_forest",
    "bridges",
    "canonical_bundle",
    "canonical_multidegree",
    "clifford_bound",
    "dhar",
    "enumerate_stable",
    "enumerate_uniform",
    "gauge_normalize",
    "h0",
    "is_stable_multidegree",
    "is_uniform",
    "leaf_count",
    "new_graph",
    "partial_normalization",
    "residual",
    "residual_bundle",
    "restrict_subcurve",
    "stabilize",
    "stabilize_bundle",
    "standard_model",
    "structure_sheaf",
    "twist_point",
]
