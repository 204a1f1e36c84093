"""Combinatorial diagrams: data model, validation, faces, and extraction.

A diagram is a multigraph whose ``boundaryArc`` edges form the oriented
Cr-cycle (the image of the disk boundary) and whose ``levelArc`` edges form
constant-rank trees hanging inside it.  Every tree leaf lies on the cycle, so
the planar embedding with the cycle as outer face is forced: at a cycle vertex
the tree edges are ordered by where their subtrees meet the cycle, and at a
saddle likewise.  :func:`rotation_system` makes that rule explicit.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvalidFieldError, NoCriticalValuesError, NotEmbeddableError
from .levelset import boundary_position, extract_significant_components
from .mesh import (
    PointKind,
    ScalarField,
    TriangulatedDisk,
    Violation,
    classify_all,
    critical_and_semiregular_values,
    validate_mesh,
)

VERTEX_KINDS = ("min", "max", "junction", "boundaryCritical", "saddle")
EDGE_KINDS = ("boundaryArc", "levelArc")
BOUNDARY_ARC = "boundaryArc"
LEVEL_ARC = "levelArc"


@dataclass(frozen=True)
class DiagramVertex:
    id: int
    kind: str
    rank: int


@dataclass(frozen=True)
class DiagramEdge:
    a: int
    b: int
    kind: str

    def other(self, v: int) -> int:
        return self.b if v == self.a else self.a


@dataclass(frozen=True)
class Diagram:
    vertices: tuple[DiagramVertex, ...]
    edges: tuple[DiagramEdge, ...]
    cr_cycle: tuple[int, ...]

    @classmethod
    def make(cls, vertices: Iterable, edges: Iterable, cr_cycle: Iterable[int]) -> "Diagram":
        """Build from ``(id, kind, rank)`` and ``(a, b, kind)`` tuples or records."""
        vs = tuple(v if isinstance(v, DiagramVertex) else DiagramVertex(*v) for v in vertices)
        es = tuple(e if isinstance(e, DiagramEdge) else DiagramEdge(*e) for e in edges)
        return cls(vs, es, tuple(cr_cycle))

    @cached_property
    def by_id(self) -> dict[int, DiagramVertex]:
        return {v.id: v for v in self.vertices}

    def rank(self, v: int) -> int:
        return self.by_id[v].rank

    def kind(self, v: int) -> str:
        return self.by_id[v].kind

    @cached_property
    def incident(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v.id: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            out.setdefault(e.a, []).append(i)
            if e.b != e.a:
                out.setdefault(e.b, []).append(i)
        return out

    @cached_property
    def cycle_position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.cr_cycle)}

    def level_degree(self, v: int) -> int:
        return sum(1 for i in self.incident[v] if self.edges[i].kind == LEVEL_ARC)

    @property
    def n_ranks(self) -> int:
        return max((v.rank for v in self.vertices), default=0)

    def census(self) -> Counter:
        return Counter(v.kind for v in self.vertices)

    def reversed(self) -> "Diagram":
        """Same graph with the Cr-cycle orientation flipped."""
        cyc = self.cr_cycle
        return Diagram(self.vertices, self.edges, (cyc[0],) + tuple(reversed(cyc[1:])))

    def relabeled(self, mapping: dict[int, int]) -> "Diagram":
        return Diagram(
            tuple(DiagramVertex(mapping[v.id], v.kind, v.rank) for v in self.vertices),
            tuple(DiagramEdge(mapping[e.a], mapping[e.b], e.kind) for e in self.edges),
            tuple(mapping[v] for v in self.cr_cycle),
        )

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v.id, "kind": v.kind, "rank": v.rank} for v in self.vertices],
            "edges": [{"a": e.a, "b": e.b, "kind": e.kind} for e in self.edges],
            "cr_cycle": list(self.cr_cycle),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Diagram":
        return cls.make(
            [(int(v["id"]), str(v["kind"]), int(v["rank"])) for v in data["vertices"]],
            [(int(e["a"]), int(e["b"]), str(e["kind"])) for e in data["edges"]],
            [int(v) for v in data["cr_cycle"]],
        )


@dataclass(frozen=True)
class FaceCycle:
    """Closed walk around an internal face; ``edges[i]`` joins ``vertices[i]`` to ``vertices[i+1]``."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def normalized(self) -> "FaceCycle":
        k = self.edges.index(min(self.edges))
        return FaceCycle(self.vertices[k:] + self.vertices[:k], self.edges[k:] + self.edges[:k])


# ---------------------------------------------------------------- ranks --


def standardize_ranks(values: Sequence[float]) -> dict[float, int]:
    """Map the j-th smallest critical/semiregular value to j (1-based)."""
    if not values:
        raise NoCriticalValuesError("no critical or semiregular values")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("values must be strictly increasing")
    return {x: j for j, x in enumerate(values, start=1)}


# ---------------------------------------------------- rotation and faces --


def cycle_edge_ids(D: Diagram) -> list[int] | None:
    """Edge index joining ``cr_cycle[i]`` to ``cr_cycle[i+1]``, or None if missing."""
    pool: dict[frozenset, list[int]] = defaultdict(list)
    for i, e in enumerate(D.edges):
        if e.kind == BOUNDARY_ARC:
            pool[frozenset((e.a, e.b))].append(i)
    cyc = D.cr_cycle
    out = []
    for i in range(len(cyc)):
        key = frozenset((cyc[i], cyc[(i + 1) % len(cyc)]))
        if not pool.get(key):
            return None
        out.append(pool[key].pop(0))
    if any(pool.values()):
        return None
    return out


def _level_sides(D: Diagram) -> dict[tuple[int, int], frozenset]:
    """For each level edge ``i`` entered from vertex ``u``: cycle positions beyond it."""
    pos = D.cycle_position
    ladj: dict[int, list[int]] = defaultdict(list)
    for i, e in enumerate(D.edges):
        if e.kind == LEVEL_ARC:
            ladj[e.a].append(i)
            ladj[e.b].append(i)
    sides = {}
    for i, e in enumerate(D.edges):
        if e.kind != LEVEL_ARC:
            continue
        for u in (e.a, e.b):
            w = e.other(u)
            seen = {u, w}
            stack = [w]
            found = set()
            while stack:
                x = stack.pop()
                if x in pos:
                    found.add(pos[x])
                for j in ladj[x]:
                    if j == i:
                        continue
                    y = D.edges[j].other(x)
                    if y == u:
                        raise NotEmbeddableError("level arcs contain a cycle")
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if not found:
                raise NotEmbeddableError(f"level edge {i} leads to no Cr-cycle vertex")
            sides[(i, u)] = frozenset(found)
    return sides


def rotation_system(D: Diagram) -> dict[int, list[int]]:
    """Counterclockwise order of incident edge indices at every vertex."""
    cyc_edges = cycle_edge_ids(D)
    if cyc_edges is None or len(D.cr_cycle) < 2:
        raise NotEmbeddableError("Cr-cycle does not match the boundary arcs")
    sides = _level_sides(D)
    L = len(D.cr_cycle)
    pos = D.cycle_position
    rot = {}
    for v in D.by_id:
        level = [i for i in D.incident[v] if D.edges[i].kind == LEVEL_ARC]
        if v in pos:
            p = pos[v]
            level.sort(key=lambda i: min((q - p) % L for q in sides[(i, v)]))
            rot[v] = [cyc_edges[p]] + level + [cyc_edges[p - 1]]
        else:
            level.sort(key=lambda i: min(sides[(i, v)]))
            rot[v] = level
    return rot


def trace_faces(D: Diagram, rot: dict[int, list[int]]) -> list[list[tuple[int, int]]]:
    """All faces of a rotation system as lists of darts ``(edge index, tail)``."""
    index = {(v, e): k for v, es in rot.items() for k, e in enumerate(es)}
    unused = {(i, e.a) for i, e in enumerate(D.edges)} | {(i, e.b) for i, e in enumerate(D.edges)}
    faces = []
    for start in sorted(unused):
        if start not in unused:
            continue
        face = []
        dart = start
        while dart in unused:
            unused.discard(dart)
            face.append(dart)
            i, tail = dart
            head = D.edges[i].other(tail)
            k = index[(head, i)]
            dart = (rot[head][k - 1], head)
        faces.append(face)
    return faces


def _face_cycle(D: Diagram, darts) -> FaceCycle:
    return FaceCycle(tuple(t for _, t in darts), tuple(i for i, _ in darts)).normalized()


def _split_outer(D: Diagram, all_faces) -> tuple[list, list] | None:
    cyc_edges = cycle_edge_ids(D)
    outer_dart = (cyc_edges[-1], D.cr_cycle[0])
    inner, outer = [], None
    for f in all_faces:
        if outer_dart in f:
            outer = f
        else:
            inner.append(f)
    L = len(D.cr_cycle)
    if outer is None or len(outer) != L:
        return None
    return inner, outer


def faces(D: Diagram) -> list[FaceCycle]:
    """Internal faces of the embedding with the Cr-cycle as outer face."""
    rot = rotation_system(D)
    all_faces = trace_faces(D, rot)
    if not _is_connected(D) or len(D.vertices) - len(D.edges) + len(all_faces) != 2:
        raise NotEmbeddableError("rotation system is not planar (crossing level attachments)")
    split = _split_outer(D, all_faces)
    if split is None:
        raise NotEmbeddableError("Cr-cycle is not the outer face")
    return sorted((_face_cycle(D, f) for f in split[0]), key=lambda f: f.edges)


def _is_connected(D: Diagram) -> bool:
    if not D.vertices:
        return False
    start = D.vertices[0].id
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for i in D.incident.get(v, ()):
            w = D.edges[i].other(v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(D.vertices)


# ------------------------------------------------------------ face test --


def face_profile(D: Diagram, face: FaceCycle) -> list[tuple[int, list[int]]]:
    """Collapse the face cycle into maximal equal-rank runs ``(rank, positions)``."""
    ranks = [D.rank(v) for v in face.vertices]
    n = len(ranks)
    start = next((k for k in range(n) if ranks[k] != ranks[k - 1]), None)
    if start is None:
        return [(ranks[0], list(range(n)))]
    runs: list[tuple[int, list[int]]] = []
    for step in range(n):
        k = (start + step) % n
        if runs and runs[-1][0] == ranks[k]:
            runs[-1][1].append(k)
        else:
            runs.append((ranks[k], [k]))
    return runs


def face_violations(D: Diagram, face: FaceCycle) -> list[Violation]:
    """Bitonic rank test for one internal face."""
    where = f"face {list(face.vertices)}"
    runs = face_profile(D, face)
    m = len(runs)
    if m < 2:
        return [Violation("face not bitonic", where + " is flat")]
    rs = [r for r, _ in runs]
    maxima = sum(1 for k in range(m) if rs[k] > rs[k - 1] and rs[k] > rs[(k + 1) % m])
    minima = sum(1 for k in range(m) if rs[k] < rs[k - 1] and rs[k] < rs[(k + 1) % m])
    out = []
    if maxima != 1 or minima != 1:
        out.append(Violation("face not bitonic", f"{where} has {maxima} maxima, {minima} minima"))
        return out
    lo, hi = min(rs), max(rs)
    n = len(face.vertices)
    for r, ks in runs:
        if len(ks) > 1 and r not in (lo, hi):
            out.append(Violation("face plateau not at extreme rank", where))
    for k in range(n):
        e = D.edges[face.edges[k]]
        same = D.rank(face.vertices[k]) == D.rank(face.vertices[(k + 1) % n])
        if same and e.kind != LEVEL_ARC:
            out.append(Violation("face plateau uses boundaryArc", where))
        if not same and e.kind != BOUNDARY_ARC:
            out.append(Violation("face monotone arc uses levelArc", where))
    for r, ks in runs:
        if len(ks) == 1 and r in (lo, hi):
            v = face.vertices[ks[0]]
            if D.kind(v) not in ("min", "max", "boundaryCritical"):
                out.append(Violation("degenerate plateau at non-extremum vertex", f"{where} at {v}"))
    return out


def face_sides(D: Diagram, face: FaceCycle) -> tuple[int, int, list[int], list[int]]:
    """``(lo, hi, lo_level_edges, hi_level_edges)`` of a bitonic face."""
    ranks = [D.rank(v) for v in face.vertices]
    lo, hi = min(ranks), max(ranks)
    lo_edges, hi_edges = [], []
    for k, i in enumerate(face.edges):
        if D.edges[i].kind == LEVEL_ARC:
            (lo_edges if ranks[k] == lo else hi_edges).append(i)
    return lo, hi, lo_edges, hi_edges


# ----------------------------------------------------------- validation --


def validate_diagram(D: Diagram) -> list[Violation]:
    """Every violated diagram axiom; an empty list means the diagram is valid."""
    out: list[Violation] = []
    if not D.vertices:
        return [Violation("empty diagram")]
    ids = [v.id for v in D.vertices]
    if len(set(ids)) != len(ids):
        return [Violation("duplicate vertex id")]
    for v in D.vertices:
        if v.kind not in VERTEX_KINDS:
            out.append(Violation("unknown vertex kind", f"vertex {v.id} kind {v.kind!r}"))
        if not isinstance(v.rank, int) or v.rank < 1:
            out.append(Violation("rank not a positive integer", f"vertex {v.id}"))
    for i, e in enumerate(D.edges):
        if e.a not in D.by_id or e.b not in D.by_id:
            out.append(Violation("edge references unknown vertex", f"edge {i}"))
        elif e.a == e.b:
            out.append(Violation("self-loop", f"edge {i}"))
        if e.kind not in EDGE_KINDS:
            out.append(Violation("unknown edge kind", f"edge {i} kind {e.kind!r}"))
    if out:
        return out
    if not _is_connected(D):
        return [Violation("diagram not connected")]

    cyc = D.cr_cycle
    L = len(cyc)
    if L < 2 or len(set(cyc)) != L or any(v not in D.by_id for v in cyc):
        return out + [Violation("Cr-cycle not simple", f"{list(cyc)}")]
    if cycle_edge_ids(D) is None:
        out.append(Violation("Cr-cycle edges differ from boundary arcs"))
        return out

    for k in range(L):
        a, b = cyc[k], cyc[(k + 1) % L]
        if D.rank(a) == D.rank(b):
            out.append(Violation("Cr-cycle adjacent ranks equal", f"vertices {a}, {b}"))
    uneven = [i for i, e in enumerate(D.edges) if e.kind == LEVEL_ARC and D.rank(e.a) != D.rank(e.b)]
    for i in uneven:
        e = D.edges[i]
        out.append(Violation("levelArc joins unequal ranks", f"edge {i} ({e.a}-{e.b})"))

    # comparable edges must form exactly the Cr-cycle; an uneven level arc
    # already explains any extra comparable cycle, so it is not reported twice
    if not uneven:
        deg = Counter()
        for e in D.edges:
            if D.rank(e.a) != D.rank(e.b):
                deg[e.a] += 1
                deg[e.b] += 1
        if set(deg) != set(cyc) or any(d != 2 for d in deg.values()):
            out.append(Violation("Cr-subgraph not unique"))

    on_cycle = set(cyc)
    for v in D.vertices:
        d = len(D.incident[v.id])
        if v.kind == "saddle":
            if v.id in on_cycle:
                out.append(Violation("saddle on Cr-cycle", f"vertex {v.id}"))
            if d < 4 or d % 2:
                out.append(Violation("saddle degree not even >= 4", f"vertex {v.id} degree {d}"))
        elif v.id not in on_cycle:
            out.append(Violation("non-saddle vertex off Cr-cycle", f"vertex {v.id}"))

    out += _tree_violations(D)
    out += _cycle_kind_violations(D)

    ranks = sorted({v.rank for v in D.vertices})
    if ranks != list(range(1, len(ranks) + 1)):
        out.append(Violation("ranks not contiguous 1..N", f"{ranks}"))
    anchored = {v.rank for v in D.vertices if v.kind != "junction"}
    for r in ranks if not uneven else ():
        if r not in anchored:
            out.append(Violation("rank without critical vertex", f"rank {r}"))
    if out:
        return out

    try:
        fs = faces(D)
    except NotEmbeddableError as exc:
        return [Violation("not embeddable with Cr-cycle outer", str(exc))]
    if len(fs) != len(D.edges) - len(D.vertices) + 1:
        out.append(Violation("face count mismatch"))
    lo_count, hi_count = Counter(), Counter()
    for f in fs:
        fv = face_violations(D, f)
        out += fv
        if not fv:
            _, _, lo_edges, hi_edges = face_sides(D, f)
            lo_count.update(lo_edges)
            hi_count.update(hi_edges)
    if not out:
        for i, e in enumerate(D.edges):
            if e.kind == LEVEL_ARC and (lo_count[i], hi_count[i]) != (1, 1):
                out.append(Violation("levelArc does not separate levels", f"edge {i}"))
    return out


def _tree_violations(D: Diagram) -> list[Violation]:
    out = []
    on_cycle = set(D.cr_cycle)
    ladj: dict[int, list[int]] = defaultdict(list)
    for e in D.edges:
        if e.kind == LEVEL_ARC:
            ladj[e.a].append(e.b)
            ladj[e.b].append(e.a)
    seen: set[int] = set()
    for root in sorted(ladj):
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in ladj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        n_edges = sum(len(ladj[x]) for x in comp) // 2
        where = f"tree {sorted(comp)}"
        if n_edges != len(comp) - 1:
            out.append(Violation("level component not a tree", where))
            continue
        leaves = [x for x in comp if len(ladj[x]) == 1]
        if len(leaves) < 2:
            out.append(Violation("tree has fewer than 2 leaves", where))
        if any(x not in on_cycle for x in leaves):
            out.append(Violation("tree leaf off Cr-cycle", where))
        if not any(D.kind(x) == "saddle" or (x in on_cycle and len(ladj[x]) >= 2) for x in comp):
            out.append(Violation("level tree without critical anchor", where))
    return out


def _cycle_kind_violations(D: Diagram) -> list[Violation]:
    out = []
    cyc = D.cr_cycle
    L = len(cyc)
    turning = 0
    for k, v in enumerate(cyc):
        r, rp, rn = D.rank(v), D.rank(cyc[k - 1]), D.rank(cyc[(k + 1) % L])
        s = D.level_degree(v)
        is_min, is_max = rp > r and rn > r, rp < r and rn < r
        turns = is_min or is_max
        turning += turns
        kind = D.kind(v)
        ok = {
            "min": s == 0 and is_min,
            "max": s == 0 and is_max,
            "junction": s == 1,
            "boundaryCritical": s >= 2,
        }.get(kind, True)
        if not ok:
            out.append(Violation("kind inconsistent with Cr-cycle", f"vertex {v} ({kind}, {s} level arcs)"))
        if turns != (s % 2 == 0):
            out.append(Violation("level-ray parity mismatch", f"vertex {v}"))
    if turning < 2 or turning % 2:
        out.append(Violation("odd or missing boundary extrema", f"{turning} turning vertices"))
    return out


# ------------------------------------------------------------ extraction --

_KIND_OF = {
    PointKind.BOUNDARY_CRITICAL: "boundaryCritical",
    PointKind.BOUNDARY_REGULAR: "junction",
    PointKind.INTERIOR_SADDLE: "saddle",
}


def build_diagram(disk: TriangulatedDisk, field: ScalarField) -> Diagram:
    """Diagram of a PL field: boundary vertices in loop order, then saddles by rank."""
    bad = validate_mesh(disk)
    if bad:
        raise InvalidFieldError("; ".join(map(str, bad)))
    classes = classify_all(disk, field)
    values = critical_and_semiregular_values(disk, field, classes)
    rank_of = standardize_ranks([x for x, _ in values])
    comps = extract_significant_components(disk, field, classes)

    def kind(node):
        if node[0] == "x":
            return "junction"
        pc = classes[node[1]]
        if pc.kind is PointKind.BOUNDARY_EXTREMUM:
            return pc.extremum
        return _KIND_OF[pc.kind]

    boundary = []
    saddles = []
    for ci, comp in enumerate(comps):
        for node in comp.nodes:
            pos = boundary_position(disk, node, comp.params)
            if pos is not None:
                boundary.append((pos, ci, node))
            elif node[0] == "v" and classes[node[1]].kind is PointKind.INTERIOR_SADDLE:
                saddles.append((rank_of[comp.level_value], node[1], ci, node))
    boundary.sort()
    saddles.sort()
    ident: dict[tuple[int, tuple], int] = {}
    vertices = []
    for _, ci, node in boundary:
        ident[(ci, node)] = len(vertices)
        vertices.append(DiagramVertex(len(vertices), kind(node), rank_of[comps[ci].level_value]))
    for rank, _, ci, node in saddles:
        ident[(ci, node)] = len(vertices)
        vertices.append(DiagramVertex(len(vertices), "saddle", rank))

    L = len(boundary)
    edges = [DiagramEdge(k, (k + 1) % L, BOUNDARY_ARC) for k in range(L)]
    level = set()
    for ci, comp in enumerate(comps):
        adj = comp.adjacency()
        interest = {node for (cj, node) in ident if cj == ci}
        for u in interest:
            for nb in adj[u]:
                prev, cur = u, nb
                while cur not in interest:
                    a, b = adj[cur]
                    prev, cur = cur, (b if a == prev else a)
                pair = tuple(sorted((ident[(ci, u)], ident[(ci, cur)])))
                level.add(pair)
    edges += [DiagramEdge(a, b, LEVEL_ARC) for a, b in sorted(level)]
    return Diagram(tuple(vertices), tuple(edges), tuple(range(L)))
