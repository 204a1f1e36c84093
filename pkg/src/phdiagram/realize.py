"""Straight-line embedding of a diagram and a PL field realizing it.

Every internal face of a valid diagram has one ascending and one descending
boundary arc between a bottom and a top plateau.  :func:`realize_field`
fills each face with stacked level polylines and triangulates between
consecutive ones, so no face contains a critical point.  Mesh values are the
ranks themselves plus intermediate half-integer levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diagram import (
    BOUNDARY_ARC,
    LEVEL_ARC,
    Diagram,
    FaceCycle,
    cycle_edge_ids,
    faces,
    trace_faces,
    validate_diagram,
)
from .errors import EmbeddingError, MisuseError, RealizationError
from .mesh import ScalarField, TriangulatedDisk, validate_mesh

ARC_SAMPLES = 16
_EPS = 1e-9

Point = tuple[float, float]


@dataclass
class Embedding:
    """Vertex coordinates and one polyline per edge, running from ``edge.a`` to ``edge.b``."""

    positions: dict[int, Point]
    polylines: list[list[Point]]
    subdivided: bool = False

    def leaving(self, D: Diagram, v: int, i: int) -> Point:
        """Direction of edge ``i`` as it leaves vertex ``v``."""
        pts = self.polylines[i]
        if D.edges[i].a != v:
            pts = pts[::-1]
        (x0, y0), (x1, y1) = pts[0], pts[1]
        return (x1 - x0, y1 - y0)


def _circle_arc(t0: float, t1: float, n: int) -> list[Point]:
    return [
        (math.cos(t0 + (t1 - t0) * k / n), math.sin(t0 + (t1 - t0) * k / n)) for k in range(n + 1)
    ]


def _tutte(D: Diagram, fixed: dict[int, Point], links: list[tuple[int, int]]) -> dict[int, Point]:
    free = sorted({v for e in links for v in e if v not in fixed})
    if not free:
        return dict(fixed)
    idx = {v: k for k, v in enumerate(free)}
    A = np.zeros((len(free), len(free)))
    b = np.zeros((len(free), 2))
    for u, w in links:
        for x, y in ((u, w), (w, u)):
            if x not in idx:
                continue
            A[idx[x], idx[x]] += 1
            if y in idx:
                A[idx[x], idx[y]] -= 1
            else:
                b[idx[x]] += fixed[y]
    sol = np.linalg.solve(A, b)
    out = dict(fixed)
    for v, k in idx.items():
        out[v] = (float(sol[k, 0]), float(sol[k, 1]))
    return out


def _orient(p: Point, q: Point, r: Point) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _segments_conflict(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """True when two segments cross, touch, or overlap beyond a shared endpoint."""
    shared = [(a, b) for a in (p1, p2) for b in (q1, q2) if math.dist(a, b) < _EPS]
    if shared:
        s = shared[0][0]
        a = p2 if math.dist(p1, s) < _EPS else p1
        b = q2 if math.dist(q1, s) < _EPS else q1
        if len(shared) > 1:
            return True
        va, vb = (a[0] - s[0], a[1] - s[1]), (b[0] - s[0], b[1] - s[1])
        cross = va[0] * vb[1] - va[1] * vb[0]
        dot = va[0] * vb[0] + va[1] * vb[1]
        return abs(cross) < _EPS * math.hypot(*va) * math.hypot(*vb) and dot > 0
    d1, d2 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    d3, d4 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    if ((d1 > _EPS and d2 < -_EPS) or (d1 < -_EPS and d2 > _EPS)) and (
        (d3 > _EPS and d4 < -_EPS) or (d3 < -_EPS and d4 > _EPS)
    ):
        return True

    def on(p, a, b, d):
        return abs(d) <= _EPS and min(a[0], b[0]) - _EPS <= p[0] <= max(a[0], b[0]) + _EPS and min(
            a[1], b[1]
        ) - _EPS <= p[1] <= max(a[1], b[1]) + _EPS

    return on(p1, q1, q2, d1) or on(p2, q1, q2, d2) or on(q1, p1, p2, d3) or on(q2, p1, p2, d4)


def crossing_pairs(polylines: list[list[Point]]) -> list[tuple[int, int]]:
    segs = [(i, p, q) for i, pts in enumerate(polylines) for p, q in zip(pts, pts[1:])]
    out = []
    for x in range(len(segs)):
        i, p1, p2 = segs[x]
        for y in range(x + 1, len(segs)):
            j, q1, q2 = segs[y]
            if i != j and _segments_conflict(p1, p2, q1, q2):
                out.append((i, j))
    return sorted(set(out))


def _place(D: Diagram, subdivide: bool) -> Embedding:
    cyc = D.cr_cycle
    L = len(cyc)
    angle = {v: 2 * math.pi * k / L for k, v in enumerate(cyc)}
    fixed = {v: (math.cos(a), math.sin(a)) for v, a in angle.items()}
    links: list[tuple[int, int]] = []
    dummies: dict[int, int] = {}
    next_id = max(D.by_id) + 1
    for i, e in enumerate(D.edges):
        if e.kind != LEVEL_ARC:
            continue
        if subdivide and e.a not in fixed and e.b not in fixed:
            dummies[i] = next_id
            links += [(e.a, next_id), (next_id, e.b)]
            next_id += 1
        else:
            links.append((e.a, e.b))
    pos = _tutte(D, fixed, links)
    polylines: list[list[Point]] = [[] for _ in D.edges]
    for k, i in enumerate(cycle_edge_ids(D)):
        t0 = angle[cyc[k]]
        pts = _circle_arc(t0, t0 + 2 * math.pi / L, ARC_SAMPLES)
        polylines[i] = pts if D.edges[i].a == cyc[k] else pts[::-1]
    for i, e in enumerate(D.edges):
        if e.kind == LEVEL_ARC:
            mid = [pos[dummies[i]]] if i in dummies else []
            polylines[i] = [pos[e.a]] + mid + [pos[e.b]]
    return Embedding({v: pos[v] for v in D.by_id}, polylines, subdivide)


def embed_diagram(D: Diagram) -> Embedding:
    """Cycle on the unit circle, saddles by barycentric averaging, checked for crossings."""
    bad = validate_diagram(D)
    if bad:
        raise MisuseError("invalid diagram: " + "; ".join(map(str, bad)))
    for subdivide in (False, True):
        emb = _place(D, subdivide)
        pts = list(emb.positions.values())
        coincide = any(
            math.dist(pts[a], pts[b]) < _EPS for a in range(len(pts)) for b in range(a + 1, len(pts))
        )
        if not coincide and not crossing_pairs(emb.polylines):
            return emb
    raise EmbeddingError("straight-line placement has crossing edges after subdivision retry")


def _signed_area(points: list[Point]) -> float:
    return 0.5 * sum(
        p[0] * q[1] - q[0] * p[1] for p, q in zip(points, points[1:] + points[:1])
    )


def geometric_faces(D: Diagram, emb: Embedding) -> list[FaceCycle]:
    """Internal faces recovered from the drawing alone (angles and signed areas)."""
    rot = {}
    for v in D.by_id:
        dirs = [(math.atan2(*reversed(emb.leaving(D, v, i))), i) for i in D.incident[v]]
        rot[v] = [i for _, i in sorted(dirs)]
    out = []
    for darts in trace_faces(D, rot):
        ring: list[Point] = []
        for i, tail in darts:
            pts = emb.polylines[i]
            if D.edges[i].a != tail:
                pts = pts[::-1]
            ring.extend(pts[:-1])
        if _signed_area(ring) > 0:
            fc = FaceCycle(tuple(t for _, t in darts), tuple(i for i, _ in darts))
            out.append(fc.normalized())
    return sorted(out, key=lambda f: f.edges)


# -------------------------------------------------------------- strips --


def _lerp(p: Point, q: Point, s: float) -> Point:
    return (p[0] + (q[0] - p[0]) * s, p[1] + (q[1] - p[1]) * s)


def _along(points: list[Point], s: float) -> Point:
    """Point at arclength fraction ``s`` of a polyline."""
    if len(points) == 1:
        return points[0]
    lengths = [math.dist(p, q) for p, q in zip(points, points[1:])]
    total = sum(lengths)
    target = s * total
    for (p, q), d in zip(zip(points, points[1:]), lengths):
        if target <= d or d == total:
            return _lerp(p, q, 0.0 if d == 0 else min(1.0, target / d))
        target -= d
    return points[-1]


@dataclass
class _Face:
    lo: int
    hi: int
    ascending: int  # edge index a -> b
    descending: int  # edge index c -> d
    bottom: list[tuple[int, int]]  # darts (edge, tail) from a to d
    top: list[tuple[int, int]]  # darts from b to c
    a: int
    b: int
    c: int
    d: int


def _face_layout(D: Diagram, f: FaceCycle) -> _Face:
    n = len(f.vertices)
    ranks = [D.rank(v) for v in f.vertices]
    starts = [
        k for k in range(n)
        if D.edges[f.edges[k]].kind == BOUNDARY_ARC and ranks[k] < ranks[(k + 1) % n]
    ]
    if len(starts) != 1:
        raise RealizationError(f"face {list(f.vertices)} has {len(starts)} ascending arcs")
    k0 = starts[0]
    vs = f.vertices[k0:] + f.vertices[:k0]
    es = f.edges[k0:] + f.edges[:k0]
    darts = list(zip(es, vs))
    lo, hi = ranks[k0], ranks[(k0 + 1) % n]
    k = 1
    while k < n and D.edges[es[k]].kind == LEVEL_ARC:
        k += 1
    top = darts[1:k]
    if k >= n or D.edges[es[k]].kind != BOUNDARY_ARC:
        raise RealizationError(f"face {list(f.vertices)} lacks a descending arc")
    desc = k
    bottom_ccw = darts[desc + 1:]
    if any(D.edges[i].kind != LEVEL_ARC for i, _ in bottom_ccw):
        raise RealizationError(f"face {list(f.vertices)} has more than two monotone arcs")
    c = vs[desc]
    d = vs[(desc + 1) % n]
    bottom = [(i, D.edges[i].other(t)) for i, t in reversed(bottom_ccw)]
    return _Face(lo, hi, es[0], es[desc], bottom, top, vs[0], vs[1], c, d)


def _levels(lo: int, hi: int) -> list[Fraction]:
    return [Fraction(lo) + Fraction(k, 2) for k in range(1, 2 * (hi - lo))]


class _MeshBuilder:
    def __init__(self) -> None:
        self.index: dict[tuple, int] = {}
        self.coords: list[Point] = []
        self.values: list[float] = []
        self.triangles: list[tuple[int, int, int]] = []

    def vertex(self, key: tuple, point: Point, value) -> int:
        if key not in self.index:
            self.index[key] = len(self.coords)
            self.coords.append(point)
            self.values.append(float(value))
        return self.index[key]

    def ladder(self, x: list[int], y: list[int]) -> None:
        m, n = len(x) - 1, len(y) - 1
        i = j = 0
        while i < m or j < n:
            if j == n or (i < m and (i + 1) * n <= (j + 1) * m):
                self.triangles.append((x[i + 1], x[i], y[j]))
                i += 1
            else:
                self.triangles.append((x[i], y[j], y[j + 1]))
                j += 1


def realize_field(D: Diagram, resolution: int = 8) -> tuple[TriangulatedDisk, ScalarField]:
    """PL field on a triangulated disk whose extracted diagram is equivalent to ``D``."""
    if resolution < 1:
        raise ValueError("resolution must be a positive integer")
    emb = embed_diagram(D)
    R = resolution
    mb = _MeshBuilder()
    cyc = D.cr_cycle
    L = len(cyc)
    cyc_edges = cycle_edge_ids(D)

    def node(v: int) -> int:
        return mb.vertex(("v", v), emb.positions[v], D.rank(v))

    def level_path(darts: list[tuple[int, int]], start: int) -> list[int]:
        """Mesh vertices along consecutive level arcs (each split into R pieces)."""
        out = [node(start)]
        for i, tail in darts:
            e = D.edges[i]
            pts = emb.polylines[i] if e.a == tail else emb.polylines[i][::-1]
            js = range(1, R) if e.a == tail else range(R - 1, 0, -1)
            for s, j in zip(range(1, R), js):
                out.append(mb.vertex(("l", i, j), _along(pts, s / R), D.rank(e.a)))
            out.append(node(e.other(tail)))
        return out

    def arc_vertex(i: int, t: Fraction, tail: int) -> int:
        """Mesh vertex at value ``t`` on boundary arc ``i`` traversed from ``tail``."""
        e = D.edges[i]
        head = e.other(tail)
        if t == D.rank(tail):
            return node(tail)
        if t == D.rank(head):
            return node(head)
        pts = emb.polylines[i] if e.a == tail else emb.polylines[i][::-1]
        s = float((t - D.rank(tail)) / (D.rank(head) - D.rank(tail)))
        return mb.vertex(("b", i, t), _along(pts, s), t)

    # create cycle and boundary-arc vertices first so the loop order is natural
    loop: list[int] = []
    for k in range(L):
        u, w = cyc[k], cyc[(k + 1) % L]
        i = cyc_edges[k]
        loop.append(node(u))
        ru, rw = D.rank(u), D.rank(w)
        ts = _levels(min(ru, rw), max(ru, rw))
        for t in ts if ru < rw else reversed(ts):
            loop.append(arc_vertex(i, t, u))

    for f in faces(D):
        F = _face_layout(D, f)
        x_lo = level_path(F.bottom, F.a)
        x_hi = level_path(F.top, F.b)
        p_lo = [mb.coords[v] for v in x_lo]
        p_hi = [mb.coords[v] for v in x_hi]
        rows = [x_lo]
        span = F.hi - F.lo
        for t in _levels(F.lo, F.hi):
            A = arc_vertex(F.ascending, t, F.a)
            B = arc_vertex(F.descending, t, F.c)
            vfrac = float((t - F.lo) / span)
            row = [A]
            for k in range(1, R):
                u = k / R
                row.append(mb.vertex(("f", f.edges, t, k), _coons(
                    p_lo, p_hi, mb.coords[A], mb.coords[B], u, vfrac
                ), t))
            row.append(B)
            rows.append(row)
        rows.append(x_hi)
        for lower, upper in zip(rows, rows[1:]):
            mb.ladder(lower, upper)

    disk = TriangulatedDisk(mb.coords, mb.triangles, loop)
    bad = validate_mesh(disk)
    if bad:
        raise RealizationError("realized mesh invalid: " + "; ".join(map(str, bad[:3])))
    return disk, ScalarField(disk, mb.values)


def _coons(p_lo: list[Point], p_hi: list[Point], A: Point, B: Point, u: float, v: float) -> Point:
    """Transfinite blend of the bottom/top plateaus and the two side points at level v."""
    c0 = _along(p_lo, u)
    c1 = _along(p_hi, u)
    side = _lerp(A, B, u)
    corner = _lerp(_lerp(p_lo[0], p_lo[-1], u), _lerp(p_hi[0], p_hi[-1], u), v)
    blend = _lerp(c0, c1, v)
    return (blend[0] + side[0] - corner[0], blend[1] + side[1] - corner[1])
