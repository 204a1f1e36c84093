"""Orientation- and rank-preserving isomorphism of diagrams.

Anchoring at a Cr-cycle vertex fixes everything: cycle vertices are named by
their offset from the anchor, and each level tree is then a plane tree whose
leaves carry offsets.  The canonical code is the least serialization over all
anchors.  Reflection is never applied unless asked for explicitly.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache

from .diagram import BOUNDARY_ARC, LEVEL_ARC, Diagram, DiagramEdge, DiagramVertex, validate_diagram
from .errors import MisuseError, SearchBoundsError

PREFIX = "PHD1:"
BRUTE_FORCE_LIMIT = 12

_KIND_TOKEN = {"min": "m", "max": "M", "junction": "j", "boundaryCritical": "b"}
_TOKEN_KIND = {v: k for k, v in _KIND_TOKEN.items()}


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: str
    witness: dict[int, int] | None = None
    reason: str | None = None

    @property
    def equivalent(self) -> bool:
        return self.verdict == "equivalent"


def reverse(D: Diagram) -> Diagram:
    """Mirror image: the same graph with the Cr-cycle traversed backwards."""
    return D.reversed()


def _level_adjacency(D: Diagram) -> dict[int, list[int]]:
    ladj: dict[int, list[int]] = defaultdict(list)
    for e in D.edges:
        if e.kind == LEVEL_ARC:
            ladj[e.a].append(e.b)
            ladj[e.b].append(e.a)
    return ladj


def _trees(ladj: dict[int, list[int]]) -> list[set[int]]:
    seen: set[int] = set()
    out = []
    for root in sorted(ladj):
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        while stack:
            for y in ladj[stack.pop()]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(comp)
    return out


def _serialize(D: Diagram, anchor: int, ladj, trees, order: list[int] | None = None) -> str:
    """Serialization with ``cr_cycle[anchor]`` at offset 0.

    When ``order`` is given, the vertex ids are appended in serialization
    order (cycle vertices by offset first, then each tree's vertices in
    traversal order); this is what lines up two diagrams with equal codes.
    """
    cyc = D.cr_cycle
    L = len(cyc)
    pos = D.cycle_position

    def offset(v):
        return (pos[v] - anchor) % L

    def min_offset(v, parent):
        best = offset(v) if v in pos else L
        for w in ladj[v]:
            if w != parent:
                best = min(best, min_offset(w, v))
        return best

    def enc(v, parent):
        if order is not None:
            order.append(v)
        kids = sorted((w for w in ladj[v] if w != parent), key=lambda w: min_offset(w, v))
        label = str(offset(v)) if v in pos else "s"
        if not kids:
            return label
        return label + "(" + ",".join(enc(w, v) for w in kids) + ")"

    boundary = []
    for o in range(L):
        v = cyc[(anchor + o) % L]
        boundary.append(f"{_KIND_TOKEN[D.kind(v)]}{D.rank(v)}")
        if order is not None:
            order.append(v)
    roots = sorted((min((w for w in t if w in pos), key=offset) for t in trees), key=offset)
    parts = [enc(r, None) for r in roots]
    return f"N{D.n_ranks}|{','.join(boundary)}|{';'.join(parts)}"


def _require_valid(D: Diagram) -> None:
    bad = validate_diagram(D)
    if bad:
        raise MisuseError("invalid diagram: " + "; ".join(map(str, bad)))


def _best_anchors(D: Diagram) -> tuple[str, list[int]]:
    ladj = _level_adjacency(D)
    trees = _trees(ladj)
    codes = [_serialize(D, k, ladj, trees) for k in range(len(D.cr_cycle))]
    best = min(codes)
    return best, [k for k, c in enumerate(codes) if c == best]


@lru_cache(maxsize=65536)
def canonical_code(D: Diagram, allow_reflection: bool = False) -> str:
    """Least serialization over all Cr-cycle anchors, prefixed ``PHD1:``."""
    _require_valid(D)
    best, _ = _best_anchors(D)
    if allow_reflection:
        best = min(best, _best_anchors(reverse(D))[0])
    return PREFIX + best


def symmetric_anchors(D: Diagram) -> list[int]:
    """Cr-cycle positions at which the canonical serialization is attained."""
    _require_valid(D)
    return _best_anchors(D)[1]


def _order_at(D: Diagram, anchor: int) -> list[int]:
    ladj = _level_adjacency(D)
    order: list[int] = []
    _serialize(D, anchor, ladj, _trees(ladj), order)
    return order


def _edge_multiset(D: Diagram, mapping: dict[int, int] | None = None) -> Counter:
    m = mapping or {v.id: v.id for v in D.vertices}
    return Counter((frozenset((m[e.a], m[e.b])), e.kind) for e in D.edges)


def verify_witness(D1: Diagram, D2: Diagram, witness: dict[int, int]) -> bool:
    """Check a bijection edge by edge, plus kinds, ranks and the oriented cycle."""
    if sorted(witness) != sorted(D1.by_id) or sorted(witness.values()) != sorted(D2.by_id):
        return False
    for v in D1.vertices:
        w = D2.by_id[witness[v.id]]
        if (v.kind, v.rank) != (w.kind, w.rank):
            return False
    image = [witness[v] for v in D1.cr_cycle]
    c2 = list(D2.cr_cycle)
    if len(image) != len(c2) or image[0] not in D2.cycle_position:
        return False
    k = D2.cycle_position[image[0]]
    if image != c2[k:] + c2[:k]:
        return False
    return _edge_multiset(D1, witness) == _edge_multiset(D2)


def are_equivalent(D1: Diagram, D2: Diagram, allow_reflection: bool = False) -> EquivalenceReport:
    """Decide isomorphism; give a verified witness or the first failed constraint."""
    _require_valid(D1)
    _require_valid(D2)
    checks = [
        ("vertex count", len(D1.vertices), len(D2.vertices)),
        ("edge count", len(D1.edges), len(D2.edges)),
        ("crCycle length", len(D1.cr_cycle), len(D2.cr_cycle)),
        ("kind census", sorted(D1.census().items()), sorted(D2.census().items())),
        ("rank count", D1.n_ranks, D2.n_ranks),
    ]
    for reason, a, b in checks:
        if a != b:
            return EquivalenceReport("distinct", reason=reason)
    code1 = canonical_code(D1)
    candidates = [D2]
    if allow_reflection:
        candidates.append(reverse(D2))
    for target in candidates:
        if canonical_code(target) != code1:
            continue
        k1 = symmetric_anchors(D1)[0]
        k2 = symmetric_anchors(target)[0]
        witness = dict(zip(_order_at(D1, k1), _order_at(target, k2)))
        if target is D2 and not verify_witness(D1, D2, witness):
            raise AssertionError("equal codes but witness failed to verify")
        return EquivalenceReport("equivalent", witness=witness)
    return EquivalenceReport("distinct", reason="canonical code")


def brute_force_isomorphic(D1: Diagram, D2: Diagram) -> bool:
    """Exhaustive search over cycle rotations and saddle matchings (small diagrams only)."""
    if len(D1.vertices) > BRUTE_FORCE_LIMIT or len(D2.vertices) > BRUTE_FORCE_LIMIT:
        raise SearchBoundsError(f"brute force limited to {BRUTE_FORCE_LIMIT} vertices")
    if (len(D1.vertices), len(D1.edges), len(D1.cr_cycle)) != (
        len(D2.vertices),
        len(D2.edges),
        len(D2.cr_cycle),
    ):
        return False
    on1, on2 = set(D1.cr_cycle), set(D2.cr_cycle)
    inner1 = [v.id for v in D1.vertices if v.id not in on1]
    inner2 = [v.id for v in D2.vertices if v.id not in on2]
    if len(inner1) != len(inner2):
        return False
    target = _edge_multiset(D2)
    L = len(D1.cr_cycle)
    for r in range(L):
        base = {D1.cr_cycle[i]: D2.cr_cycle[(i + r) % L] for i in range(L)}
        if any(
            (D1.kind(a), D1.rank(a)) != (D2.kind(b), D2.rank(b)) for a, b in base.items()
        ):
            continue
        for perm in itertools.permutations(inner2):
            m = dict(base)
            m.update(zip(inner1, perm))
            if any((D1.kind(a), D1.rank(a)) != (D2.kind(m[a]), D2.rank(m[a])) for a in inner1):
                continue
            if _edge_multiset(D1, m) == target:
                return True
    return False


# ---------------------------------------------------------------- decode --

_CODE_RE = re.compile(r"^N(\d+)\|([^|]*)\|(.*)$")
_TOKEN_RE = re.compile(r"^([mMjb])(\d+)$")


def decode(code: str) -> Diagram:
    """Rebuild a diagram (cycle ids 0..L-1, saddles after) from a canonical code."""
    if not code.startswith(PREFIX):
        raise ValueError(f"canonical code must start with {PREFIX!r}")
    m = _CODE_RE.match(code[len(PREFIX):])
    if not m:
        raise ValueError(f"malformed canonical code {code!r}")
    boundary = []
    for tok in m.group(2).split(","):
        t = _TOKEN_RE.match(tok)
        if not t:
            raise ValueError(f"bad boundary token {tok!r}")
        boundary.append((_TOKEN_KIND[t.group(1)], int(t.group(2))))
    L = len(boundary)
    vertices = [DiagramVertex(i, k, r) for i, (k, r) in enumerate(boundary)]
    edges = [DiagramEdge(i, (i + 1) % L, BOUNDARY_ARC) for i in range(L)]
    text = m.group(3)
    i = 0

    def parse(rank: int) -> int:
        nonlocal i
        if text[i] == "s":
            i += 1
            v = len(vertices)
            vertices.append(DiagramVertex(v, "saddle", rank))
        else:
            j = i
            while i < len(text) and text[i].isdigit():
                i += 1
            if j == i:
                raise ValueError(f"bad tree label at {j} in {code!r}")
            v = int(text[j:i])
        if i < len(text) and text[i] == "(":
            i += 1
            while True:
                w = parse(rank)
                edges.append(DiagramEdge(v, w, LEVEL_ARC))
                if text[i] == ",":
                    i += 1
                    continue
                if text[i] != ")":
                    raise ValueError(f"bad tree syntax at {i} in {code!r}")
                i += 1
                break
        return v

    try:
        while i < len(text):
            j = i
            while text[j].isdigit():
                j += 1
            parse(boundary[int(text[i:j])][1])
            if i < len(text):
                if text[i] != ";":
                    raise ValueError(f"bad tree separator at {i} in {code!r}")
                i += 1
    except IndexError as exc:
        raise ValueError(f"truncated canonical code {code!r}") from exc
    return Diagram(tuple(vertices), tuple(edges), tuple(range(L)))
