"""Exact PL level-set components through critical-type vertices.

A level node is either a mesh vertex whose value equals the level exactly, or
the crossing of the level with a mesh edge whose endpoints lie strictly on
opposite sides.  Crossing parameters are exact rationals of the (binary) input
values, so boundary hits are ordered without rounding.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .errors import InvalidFieldError, MisuseError
from .mesh import ANCHOR_KINDS, PointClass, PointKind, ScalarField, TriangulatedDisk, classify_all

# ("v", vertex) or ("x", (a, b)) with a < b
Node = tuple


def _sign(x: float, c: float) -> int:
    return (x > c) - (x < c)


@dataclass
class LevelComponent:
    level_value: float
    nodes: list[Node]
    arcs: list[frozenset]
    anchors: list[int]
    boundary_hits: list[Node]
    params: dict[Node, Fraction] = dc_field(default_factory=dict, repr=False)

    @property
    def node_set(self) -> frozenset:
        return frozenset(self.nodes)

    def adjacency(self) -> dict[Node, list[Node]]:
        adj: dict[Node, list[Node]] = {n: [] for n in self.nodes}
        for arc in self.arcs:
            a, b = sorted(arc)
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def point(self, disk: TriangulatedDisk, node: Node) -> tuple[float, float]:
        if node[0] == "v":
            return disk.vertices[node[1]]
        a, b = node[1]
        t = float(self.params[node])
        (ax, ay), (bx, by) = disk.vertices[a], disk.vertices[b]
        return (ax + t * (bx - ax), ay + t * (by - ay))

    def polylines(self, disk: TriangulatedDisk) -> list[list[list[float]]]:
        """Debug dump: one polyline per arc, as ``[[x, y], [x, y]]`` pairs."""
        out = []
        for arc in sorted(self.arcs, key=lambda a: sorted(a)):
            a, b = sorted(arc)
            out.append([list(self.point(disk, a)), list(self.point(disk, b))])
        return out


def _crossing(field: ScalarField, a: int, b: int, c: float) -> tuple[Node, Fraction]:
    a, b = min(a, b), max(a, b)
    fa, fb = Fraction(field.values[a]), Fraction(field.values[b])
    return ("x", (a, b)), (Fraction(c) - fa) / (fb - fa)


def _level_neighbors(disk, field, node, c, params):
    vals = field.values
    out = []
    if node[0] == "v":
        v = node[1]
        for t in disk.vertex_triangles[v]:
            a, b = (w for w in disk.triangles[t] if w != v)
            sa, sb = _sign(vals[a], c), _sign(vals[b], c)
            if sa == 0 and sb == 0:
                raise InvalidFieldError(f"flat triangle {disk.triangles[t]} at level {c}")
            if sa == 0:
                out.append(("v", a))
            if sb == 0:
                out.append(("v", b))
            if sa * sb == -1:
                n, p = _crossing(field, a, b, c)
                params[n] = p
                out.append(n)
        return out
    a, b = node[1]
    for t in disk.edge_triangles[frozenset((a, b))]:
        (w,) = (u for u in disk.triangles[t] if u != a and u != b)
        sw = _sign(vals[w], c)
        if sw == 0:
            out.append(("v", w))
            continue
        other = a if _sign(vals[a], c) != sw else b
        n, p = _crossing(field, other, w, c)
        params[n] = p
        out.append(n)
    return out


def boundary_position(disk: TriangulatedDisk, node: Node, params) -> tuple[int, Fraction] | None:
    if node[0] == "v":
        i = disk.boundary_index.get(node[1])
        return None if i is None else (i, Fraction(0))
    a, b = node[1]
    i = disk.boundary_edges.get(frozenset((a, b)))
    if i is None:
        return None
    t = params[node]
    # params are measured from the lower-index endpoint
    return (i, t) if disk.boundary[i] == a else (i, 1 - t)


def trace_level_component(
    disk: TriangulatedDisk,
    field: ScalarField,
    seed: int,
    classes: Sequence[PointClass] | None = None,
) -> LevelComponent:
    """Maximal connected level set of ``value(seed)`` containing ``seed``."""
    if classes is None:
        classes = classify_all(disk, field)
    if classes[seed].kind not in ANCHOR_KINDS:
        raise MisuseError(f"vertex {seed} is {classes[seed].kind.value}, not a critical-type point")
    c = field.values[seed]
    params: dict[Node, Fraction] = {}
    start = ("v", seed)
    seen = {start}
    order = [start]
    arcs: set[frozenset] = set()
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nb in _level_neighbors(disk, field, node, c, params):
            arcs.add(frozenset((node, nb)))
            if nb not in seen:
                seen.add(nb)
                order.append(nb)
                queue.append(nb)
    if len(arcs) != len(order) - 1:
        raise InvalidFieldError(f"level set through vertex {seed} contains a cycle")

    comp = LevelComponent(c, order, sorted(arcs, key=lambda a: sorted(a)), [], [], params)
    _check_component(disk, classes, comp)
    comp.anchors = sorted(n[1] for n in order if n[0] == "v" and classes[n[1]].kind in ANCHOR_KINDS)
    hits = [(pos, n) for n in order if (pos := boundary_position(disk, n, params)) is not None]
    comp.boundary_hits = [n for _, n in sorted(hits)]
    return comp


def _check_component(disk: TriangulatedDisk, classes: Sequence[PointClass], comp: LevelComponent) -> None:
    adj = comp.adjacency()
    for node, nbrs in adj.items():
        deg = len(nbrs)
        if node[0] == "x":
            on_boundary = frozenset(node[1]) in disk.boundary_edges
            if deg != (1 if on_boundary else 2):
                raise InvalidFieldError(f"crossing {node} has level degree {deg}")
            continue
        v = node[1]
        pc = classes[v]
        if deg != pc.rays:
            raise InvalidFieldError(
                f"vertex {v} ({pc.kind.value}) has level degree {deg}, expected {pc.rays}"
            )
        if disk.is_boundary(v):
            for nb in nbrs:
                if nb[0] == "v" and frozenset((v, nb[1])) in disk.boundary_edges:
                    raise InvalidFieldError(f"boundary edge ({v}, {nb[1]}) lies in a level set")


def extract_significant_components(
    disk: TriangulatedDisk,
    field: ScalarField,
    classes: Sequence[PointClass] | None = None,
) -> list[LevelComponent]:
    """One component per connected critical/semiregular level piece with an anchor."""
    if classes is None:
        classes = classify_all(disk, field)
    anchors = sorted(
        (v for v, pc in enumerate(classes) if pc.kind in ANCHOR_KINDS), key=field.key
    )
    covered: set[int] = set()
    out = []
    for v in anchors:
        if v in covered:
            continue
        comp = trace_level_component(disk, field, v, classes)
        covered.update(comp.anchors)
        out.append(comp)
    return out
