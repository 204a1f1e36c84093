"""Exhaustive generation of valid diagrams up to equivalence.

Generation runs in three layers:

1. cyclic boundary rank words with an even number of turning vertices,
2. non-crossing systems of same-rank blocks of cycle positions,
3. plane trees spanning each block, with saddles as extra inner nodes.

Each candidate goes through :func:`validate_diagram`, and survivors are
deduplicated by canonical code.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .diagram import BOUNDARY_ARC, LEVEL_ARC, Diagram, DiagramEdge, DiagramVertex, validate_diagram
from .equivalence import canonical_code, decode
from .errors import SearchBoundsError

MAX_EXTREMA = 6
MAX_SADDLES = 2
MAX_RANK = 6

CENSUS_KEYS = ("min", "max", "junction", "boundaryCritical", "saddle", "extrema")


def check_bounds(max_extrema: int, max_saddles: int, max_rank: int) -> None:
    if max_extrema % 2 or not 2 <= max_extrema <= MAX_EXTREMA:
        raise SearchBoundsError(f"max_extrema must be even and in 2..{MAX_EXTREMA}")
    if not 0 <= max_saddles <= MAX_SADDLES:
        raise SearchBoundsError(f"max_saddles must be in 0..{MAX_SADDLES}")
    if not 2 <= max_rank <= MAX_RANK:
        raise SearchBoundsError(f"max_rank must be in 2..{MAX_RANK}")


def _min_rotation(word: tuple[int, ...]) -> tuple[int, ...]:
    return min(word[k:] + word[:k] for k in range(len(word)))


def turning_flags(word: Sequence[int]) -> list[bool]:
    L = len(word)
    return [
        (word[i - 1] < word[i]) == (word[(i + 1) % L] < word[i]) for i in range(L)
    ]


def boundary_words(max_extrema: int, max_rank: int) -> list[tuple[int, ...]]:
    """Cyclic rank words (one per rotation class) using exactly ranks 1..N, N >= 2."""
    out = set()
    ranks = range(1, max_rank + 1)
    for t in range(2, max_extrema + 1, 2):
        for turns in itertools.product(ranks, repeat=t):
            # turns alternate min, max, min, max, ...
            ok = all(
                turns[i] < turns[(i + 1) % t] and turns[i] < turns[i - 1]
                for i in range(0, t, 2)
            )
            if not ok:
                continue
            runs = []
            for i in range(t):
                a, b = turns[i], turns[(i + 1) % t]
                lo, hi = min(a, b), max(a, b)
                inner = list(range(lo + 1, hi))
                choices = []
                for k in range(len(inner) + 1):
                    for sub in itertools.combinations(inner, k):
                        choices.append(sub if a < b else tuple(reversed(sub)))
                runs.append(choices)
            for picks in itertools.product(*runs):
                word: list[int] = []
                for i in range(t):
                    word.append(turns[i])
                    word.extend(picks[i])
                if set(word) == set(range(1, max(word) + 1)):
                    out.add(_min_rotation(tuple(word)))
    return sorted(out, key=lambda w: (len(w), w))


def block_systems(word: Sequence[int]) -> Iterator[list[tuple[int, ...]]]:
    """Non-crossing families of same-rank blocks (size >= 2) of cycle positions.

    Turning positions may stay outside every block; all others must be covered.
    """
    turning = turning_flags(word)

    def gen(avail: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
        if not avail:
            yield []
            return
        p, rest = avail[0], avail[1:]
        if turning[p]:
            yield from gen(rest)
        same = [q for q in rest if word[q] == word[p]]
        for k in range(1, len(same) + 1):
            for others in itertools.combinations(same, k):
                block = (p,) + others
                cuts = list(block) + [None]
                gaps = []
                for a, b in zip(cuts, cuts[1:]):
                    gaps.append(tuple(q for q in rest if q > a and (b is None or q < b)))
                for parts in itertools.product(*(list(gen(g)) for g in gaps)):
                    yield [block] + [blk for part in parts for blk in part]

    yield from gen(tuple(range(len(word))))


# A plane tree over block points 0..m-1 (indices into the block) is stored as
# nested tuples: ("p", k, children) for a block point, ("s", children) for a saddle.


@lru_cache(maxsize=None)
def _forests(i: int, j: int, budget: int) -> tuple[tuple[tuple, int], ...]:
    """Ordered forests covering block points i..j-1, with saddle usage <= budget."""
    if i == j:
        return (((), 0),)
    out = []
    for k in range(i + 1, j + 1):
        for sub, used in _subtrees(i, k, budget):
            for rest, more in _forests(k, j, budget - used):
                out.append(((sub,) + rest, used + more))
    return tuple(out)


@lru_cache(maxsize=None)
def _subtrees(i: int, j: int, budget: int) -> tuple[tuple[tuple, int], ...]:
    out = []
    for k in range(i, j):
        for left, u1 in _forests(i, k, budget):
            for right, u2 in _forests(k + 1, j, budget - u1):
                out.append((("p", k, left + right), u1 + u2))
    if budget > 0:
        for kids, used in _forests(i, j, budget - 1):
            if len(kids) >= 3 and len(kids) % 2 == 1:
                out.append((("s", kids), used + 1))
    return tuple(out)


def plane_trees(m: int, budget: int) -> tuple[tuple[tuple, int], ...]:
    """Plane trees rooted at block point 0 spanning points 0..m-1."""
    return tuple((("p", 0, kids), used) for kids, used in _forests(1, m, budget))


def _tree_edges(tree, block, next_id: list[int]) -> list[tuple[int, int]]:
    edges: list[tuple[int, int]] = []

    def walk(node) -> int:
        if node[0] == "p":
            v, kids = block[node[1]], node[2]
        else:
            v, kids = next_id[0], node[1]
            next_id[0] += 1
        for kid in kids:
            edges.append((v, walk(kid)))
        return v

    walk(tree)
    return edges


def _candidates(word: tuple[int, ...], max_saddles: int) -> Iterator[Diagram]:
    L = len(word)
    turning = turning_flags(word)
    for blocks in block_systems(word):
        options = [plane_trees(len(b), max_saddles) for b in blocks]
        for combo in itertools.product(*options):
            if sum(used for _, used in combo) > max_saddles:
                continue
            next_id = [L]
            level: list[tuple[int, int]] = []
            for block, (tree, _) in zip(blocks, combo):
                level += _tree_edges(tree, block, next_id)
            deg = Counter()
            for a, b in level:
                deg[a] += 1
                deg[b] += 1
            if any(turning[p] != (deg[p] % 2 == 0) for p in range(L)):
                continue
            vertices = []
            for p in range(L):
                if deg[p] == 0:
                    kind = "min" if word[p - 1] > word[p] else "max"
                elif deg[p] == 1:
                    kind = "junction"
                else:
                    kind = "boundaryCritical"
                vertices.append(DiagramVertex(p, kind, word[p]))
            # a saddle shares the rank of its block
            rank_of = {}
            for a, b in level:
                if a < L:
                    rank_of.setdefault(b, word[a])
                if b < L:
                    rank_of.setdefault(a, word[b])
            changed = True
            while changed:
                changed = False
                for a, b in level:
                    for x, y in ((a, b), (b, a)):
                        if x not in rank_of and y in rank_of:
                            rank_of[x] = rank_of[y]
                            changed = True
            for s in range(L, next_id[0]):
                vertices.append(DiagramVertex(s, "saddle", rank_of[s]))
            edges = [DiagramEdge(p, (p + 1) % L, BOUNDARY_ARC) for p in range(L)]
            edges += [DiagramEdge(a, b, LEVEL_ARC) for a, b in level]
            yield Diagram(tuple(vertices), tuple(edges), tuple(range(L)))


def _codes_for_word(args: tuple[tuple[int, ...], int]) -> set[str]:
    word, max_saddles = args
    out = set()
    for D in _candidates(word, max_saddles):
        if not validate_diagram(D):
            out.add(canonical_code(D))
    return out


def enumerate_diagrams(
    max_extrema: int, max_saddles: int, max_rank: int, workers: int | None = None
) -> list[str]:
    """Sorted canonical codes of every valid diagram within the bounds.

    ``max_extrema`` bounds the number of turning vertices on the Cr-cycle,
    ``max_rank`` the number of distinct ranks.  ``workers > 1`` fans the
    boundary words out to a process pool; the result is identical.
    """
    check_bounds(max_extrema, max_saddles, max_rank)
    jobs = [(w, max_saddles) for w in boundary_words(max_extrema, max_rank)]
    codes: set[str] = set()
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_codes_for_word, jobs):
                codes |= part
    else:
        for job in jobs:
            codes |= _codes_for_word(job)
    return sorted(codes)


def diagram_census(D: Diagram) -> dict[str, int]:
    counts = Counter(v.kind for v in D.vertices)
    out = {k: counts.get(k, 0) for k in CENSUS_KEYS[:-1]}
    out["extrema"] = sum(turning_flags([D.rank(v) for v in D.cr_cycle]))
    return out


def filter_by_census(codes: Sequence[str], census: Mapping[str, int]) -> list[str]:
    """Codes whose diagrams have exactly the requested counts.

    Keys are vertex kinds plus ``extrema`` (turning vertices of the Cr-cycle);
    kinds not mentioned are unconstrained.
    """
    unknown = set(census) - set(CENSUS_KEYS)
    if unknown:
        raise ValueError(f"unknown census keys {sorted(unknown)}")
    out = []
    for code in codes:
        have = diagram_census(decode(code))
        if all(have[k] == n for k, n in census.items()):
            out.append(code)
    return out
