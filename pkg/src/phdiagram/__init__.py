"""Combinatorial diagrams of PL scalar fields on a triangulated disk."""

from __future__ import annotations

from .diagram import Diagram, DiagramEdge, DiagramVertex, FaceCycle, build_diagram, faces, standardize_ranks, validate_diagram
from .enumeration import enumerate_diagrams, filter_by_census
from .equivalence import are_equivalent, brute_force_isomorphic, canonical_code, decode, reverse
from .mesh import ScalarField, TriangulatedDisk, classify_vertex, validate_mesh
from .realize import embed_diagram, geometric_faces, realize_field

__all__ = [
    "Diagram",
    "DiagramEdge",
    "DiagramVertex",
    "FaceCycle",
    "ScalarField",
    "TriangulatedDisk",
    "are_equivalent",
    "brute_force_isomorphic",
    "build_diagram",
    "canonical_code",
    "classify_vertex",
    "decode",
    "embed_diagram",
    "enumerate_diagrams",
    "faces",
    "filter_by_census",
    "geometric_faces",
    "realize_field",
    "reverse",
    "standardize_ranks",
    "validate_diagram",
    "validate_mesh",
]
