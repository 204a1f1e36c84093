"""Triangulated disks, PL scalar fields on them, and vertex classification.

Ties between equal vertex values are broken symbolically: the vertex with the
lower index counts as strictly smaller.  Classification uses this effective
order only through sign changes around vertex links, so it is invariant under
any increasing change of values that keeps ties as ties.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import NamedTuple, Sequence

from .errors import DegenerateComparisonError, NotPseudoharmonicError


class Violation(NamedTuple):
    rule: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}" if self.detail else self.rule


class TriangulatedDisk:
    """Combinatorial disk: 2D coordinates, CCW triangles, positive boundary loop.

    Construction does not validate; call :func:`validate_mesh` first.  The
    derived adjacency structures assume a valid mesh.
    """

    def __init__(self, vertices, triangles, boundary):
        self.vertices = tuple((float(x), float(y)) for x, y in vertices)
        self.triangles = tuple(tuple(int(i) for i in t) for t in triangles)
        self.boundary = tuple(int(i) for i in boundary)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def boundary_index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.boundary)}

    def is_boundary(self, v: int) -> bool:
        return v in self.boundary_index

    @cached_property
    def boundary_edges(self) -> dict[frozenset, int]:
        """Undirected boundary edge -> loop index of its first endpoint."""
        n = len(self.boundary)
        return {
            frozenset((self.boundary[i], self.boundary[(i + 1) % n])): i
            for i in range(n)
        }

    @cached_property
    def vertex_triangles(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.vertices]
        for t, tri in enumerate(self.triangles):
            for v in tri:
                out[v].append(t)
        return out

    @cached_property
    def edge_triangles(self) -> dict[frozenset, list[int]]:
        out: dict[frozenset, list[int]] = defaultdict(list)
        for t, (i, j, k) in enumerate(self.triangles):
            for a, b in ((i, j), (j, k), (k, i)):
                out[frozenset((a, b))].append(t)
        return dict(out)

    @cached_property
    def _link_successor(self) -> list[dict[int, int]]:
        succ: list[dict[int, int]] = [{} for _ in self.vertices]
        for i, j, k in self.triangles:
            succ[i][j] = k
            succ[j][k] = i
            succ[k][i] = j
        return succ

    def link(self, v: int) -> list[int]:
        """Neighbors of ``v`` in counterclockwise order.

        Interior vertices give a cyclic list.  Boundary vertices give the open
        path from the next boundary vertex to the previous one, through the
        interior.
        """
        succ = self._link_successor[v]
        if v in self.boundary_index:
            i = self.boundary_index[v]
            n = len(self.boundary)
            start, stop = self.boundary[(i + 1) % n], self.boundary[i - 1]
            path = [start]
            while path[-1] != stop:
                path.append(succ[path[-1]])
            return path
        start = next(iter(succ))
        cycle = [start]
        while True:
            nxt = succ[cycle[-1]]
            if nxt == start:
                return cycle
            cycle.append(nxt)

    def neighbors(self, v: int) -> set[int]:
        succ = self._link_successor[v]
        return set(succ) | set(succ.values())


class ScalarField:
    """One finite real value per mesh vertex."""

    def __init__(self, disk: TriangulatedDisk, values: Sequence[float]):
        values = tuple(float(x) for x in values)
        if len(values) != disk.n_vertices:
            raise ValueError(
                f"field has {len(values)} values for {disk.n_vertices} vertices"
            )
        if not all(math.isfinite(x) for x in values):
            raise ValueError("field values must be finite")
        self.disk = disk
        self.values = values

    def key(self, v: int) -> tuple[float, int]:
        return (self.values[v], v)


class Order(str, Enum):
    LESS = "less"
    GREATER = "greater"


def effective_compare(field: ScalarField, u: int, v: int) -> Order:
    """Total order on vertices: by value, ties broken by lower index first."""
    if u == v:
        raise DegenerateComparisonError(f"vertex {u} compared with itself")
    return Order.LESS if field.key(u) < field.key(v) else Order.GREATER


class PointKind(str, Enum):
    INTERIOR_REGULAR = "InteriorRegular"
    INTERIOR_SADDLE = "InteriorSaddle"
    BOUNDARY_REGULAR = "BoundaryRegular"
    BOUNDARY_EXTREMUM = "BoundaryExtremum"
    BOUNDARY_CRITICAL = "BoundaryCritical"


ANCHOR_KINDS = frozenset(
    {PointKind.INTERIOR_SADDLE, PointKind.BOUNDARY_CRITICAL, PointKind.BOUNDARY_EXTREMUM}
)


@dataclass(frozen=True)
class PointClass:
    """Classification of a mesh vertex.

    ``multiplicity`` is ``n`` for a saddle (link has ``2n`` sign changes) and
    the level-ray count ``s`` for a boundary critical vertex.  ``extremum`` is
    ``"min"``/``"max"`` whenever the vertex is a local extremum of the field
    restricted to the boundary.
    """

    kind: PointKind
    multiplicity: int | None = None
    extremum: str | None = None

    @property
    def rays(self) -> int:
        """Number of level-set rays leaving the vertex."""
        if self.kind is PointKind.INTERIOR_SADDLE:
            return 2 * self.multiplicity
        if self.kind is PointKind.BOUNDARY_CRITICAL:
            return self.multiplicity
        if self.kind is PointKind.BOUNDARY_EXTREMUM:
            return 0
        if self.kind is PointKind.BOUNDARY_REGULAR:
            return 1
        return 2


def _signs(field: ScalarField, v: int, nbrs: Sequence[int]) -> list[int]:
    kv = field.key(v)
    return [1 if field.key(u) > kv else -1 for u in nbrs]


def classify_vertex(disk: TriangulatedDisk, field: ScalarField, v: int) -> PointClass:
    link = disk.link(v)
    signs = _signs(field, v, link)
    if disk.is_boundary(v):
        s = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
        ext = None
        if s % 2 == 0:
            ext = "min" if signs[0] > 0 else "max"
        if s == 0:
            return PointClass(PointKind.BOUNDARY_EXTREMUM, None, ext)
        if s == 1:
            return PointClass(PointKind.BOUNDARY_REGULAR)
        return PointClass(PointKind.BOUNDARY_CRITICAL, s, ext)
    c = sum(1 for i in range(len(signs)) if signs[i] != signs[i - 1])
    if c == 0:
        kind = "minimum" if signs[0] > 0 else "maximum"
        raise NotPseudoharmonicError(f"interior local {kind} at vertex {v}")
    if c == 2:
        return PointClass(PointKind.INTERIOR_REGULAR)
    return PointClass(PointKind.INTERIOR_SADDLE, c // 2)


def classify_all(disk: TriangulatedDisk, field: ScalarField) -> list[PointClass]:
    return [classify_vertex(disk, field, v) for v in range(disk.n_vertices)]


def critical_and_semiregular_values(
    disk: TriangulatedDisk,
    field: ScalarField,
    classes: Sequence[PointClass] | None = None,
) -> list[tuple[float, str]]:
    """Increasing list of ``(value, tag)`` with tag ``critical``/``semiregular``.

    Anchors (saddles, boundary critical points, boundary extrema) are grouped
    by exact value; a group containing a saddle is critical.
    """
    if classes is None:
        classes = classify_all(disk, field)
    tags: dict[float, str] = {}
    for v, pc in enumerate(classes):
        if pc.kind not in ANCHOR_KINDS:
            continue
        x = field.values[v]
        if pc.kind is PointKind.INTERIOR_SADDLE:
            tags[x] = "critical"
        else:
            tags.setdefault(x, "semiregular")
    return sorted(tags.items())


def validate_mesh(disk: TriangulatedDisk) -> list[Violation]:
    """All violations of the disk invariants; empty list means valid."""
    out: list[Violation] = []
    nv = disk.n_vertices
    for t, tri in enumerate(disk.triangles):
        if len(tri) != 3 or len(set(tri)) != 3 or not all(0 <= i < nv for i in tri):
            out.append(Violation("invalid triangle", f"triangle {t} {tri}"))
    if out:
        return out
    if not disk.triangles:
        return [Violation("empty mesh")]
    for x, y in disk.vertices:
        if not (math.isfinite(x) and math.isfinite(y)):
            out.append(Violation("non-finite coordinate"))
            break

    directed: dict[tuple[int, int], int] = {}
    for t, (i, j, k) in enumerate(disk.triangles):
        for e in ((i, j), (j, k), (k, i)):
            if e in directed:
                out.append(
                    Violation("inconsistent orientation", f"edge {e} in triangles {directed[e]} and {t}")
                )
            directed[e] = t
    for e, ts in disk.edge_triangles.items():
        if len(ts) > 2:
            out.append(Violation("edge shared by more than two triangles", f"edge {tuple(sorted(e))}"))
    used = {v for tri in disk.triangles for v in tri}
    for v in range(nv):
        if v not in used:
            out.append(Violation("unused vertex", f"vertex {v}"))

    # connectivity over triangles sharing an edge
    parent = list(range(len(disk.triangles)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for ts in disk.edge_triangles.values():
        for t in ts[1:]:
            parent[find(t)] = find(ts[0])
    if len({find(t) for t in range(len(disk.triangles))}) > 1:
        return [Violation("mesh not connected")]

    n_edges = len(disk.edge_triangles)
    chi = len(used) - n_edges + len(disk.triangles)
    if chi != 1:
        return [Violation("Euler characteristic ≠ 1", f"V-E+F = {chi}")]

    loop = disk.boundary
    if len(loop) < 3 or len(set(loop)) != len(loop) or not all(0 <= v < nv for v in loop):
        out.append(Violation("boundary loop not simple", f"{list(loop)}"))
        return out
    tri_boundary = {
        (a, b) for (a, b) in directed if len(disk.edge_triangles[frozenset((a, b))]) == 1
    }
    loop_edges = {(loop[i], loop[(i + 1) % len(loop)]) for i in range(len(loop))}
    if tri_boundary != loop_edges:
        reversed_loop = {(b, a) for a, b in loop_edges}
        if tri_boundary == reversed_loop:
            out.append(Violation("boundary loop negatively oriented"))
        else:
            missing = sorted(tri_boundary ^ loop_edges)[:4]
            out.append(Violation("boundary loop mismatch", f"edges {missing}"))
        return out

    succ = disk._link_successor
    n = len(loop)
    for v in range(nv):
        arcs = succ[v]
        if not arcs:
            continue
        nodes = set(arcs) | set(arcs.values())
        if v in disk.boundary_index:
            i = disk.boundary_index[v]
            start, stop = loop[(i + 1) % n], loop[i - 1]
        else:
            start = stop = next(iter(arcs))
        if _walk_length(arcs, start, stop, len(nodes)) != len(nodes):
            out.append(Violation("non-manifold vertex", f"vertex {v}"))
    return out


def _walk_length(arcs: dict[int, int], start: int, stop: int, limit: int) -> int:
    """Distinct link nodes visited walking from start until stop; -1 if stuck."""
    count, cur = 1, start
    while count <= limit:
        if cur not in arcs:
            return -1
        cur = arcs[cur]
        if cur == stop:
            return count if stop == start else count + 1
        count += 1
    return -1
