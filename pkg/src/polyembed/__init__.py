"""Exact bookkeeping for holomorphic-building obstructions to embedding P(1,2) into a ball."""

from polyembed.core import (
    BuildingSpec,
    ComponentSpec,
    HomologyClass,
    LevelKind,
    PunctureEnd,
    Sign,
    ValidationReport,
    parse_rational,
    validate_building,
    validate_component,
)
from polyembed.enumerator import (
    degree_d_feasibility,
    embedding_bound_polydisk12,
    enumerate_fiber_limits,
    enumerate_plane_classes,
    witness_degree,
)

__all__ = [
    "BuildingSpec",
    "ComponentSpec",
    "HomologyClass",
    "LevelKind",
    "PunctureEnd",
    "Sign",
    "ValidationReport",
    "degree_d_feasibility",
    "embedding_bound_polydisk12",
    "enumerate_fiber_limits",
    "enumerate_plane_classes",
    "parse_rational",
    "validate_building",
    "validate_component",
    "witness_degree",
]

__version__ = "0.1.0"
