from __future__ import annotations

import itertools

import pytest

from phdiagram.diagram import BOUNDARY_ARC, LEVEL_ARC, Diagram, DiagramEdge, DiagramVertex, build_diagram, validate_diagram
from phdiagram.enumeration import (
    boundary_words,
    diagram_census,
    enumerate_diagrams,
    filter_by_census,
    turning_flags,
)
from phdiagram.equivalence import are_equivalent, canonical_code, decode
from phdiagram.errors import SearchBoundsError
from phdiagram.fixtures import f_lin, f_saddle

SAME_EXTREMA = {"min": 2, "max": 2, "boundaryCritical": 1, "saddle": 0}


def naive_codes(max_extrema: int, max_saddles: int, max_rank: int) -> set[str]:
    """Exhaustive oracle: every rank word, saddle set and subset of same-rank pairs."""
    out = set()
    seen_words = set()
    for L in range(2, max_extrema * (max_rank - 1) + 1):
        for word in itertools.product(range(1, max_rank + 1), repeat=L):
            if any(word[i] == word[i - 1] for i in range(L)):
                continue
            if set(word) != set(range(1, max(word) + 1)):
                continue
            key = min(word[k:] + word[:k] for k in range(L))
            if key in seen_words or sum(turning_flags(word)) > max_extrema:
                continue
            seen_words.add(key)
            N = max(word)
            for k in range(max_saddles + 1):
                for saddle_ranks in itertools.combinations_with_replacement(range(1, N + 1), k):
                    ranks = list(word) + list(saddle_ranks)
                    pairs = [
                        (a, b)
                        for a, b in itertools.combinations(range(len(ranks)), 2)
                        if ranks[a] == ranks[b]
                    ]
                    for r in range(len(pairs) + 1):
                        for chosen in itertools.combinations(pairs, r):
                            D = _assemble(word, saddle_ranks, chosen)
                            if not validate_diagram(D):
                                out.add(canonical_code(D))
    return out


def _assemble(word, saddle_ranks, level):
    L = len(word)
    deg = [0] * (L + len(saddle_ranks))
    for a, b in level:
        deg[a] += 1
        deg[b] += 1
    vertices = []
    for p in range(L):
        if deg[p] == 0:
            kind = "min" if word[p - 1] > word[p] else "max"
        else:
            kind = "junction" if deg[p] == 1 else "boundaryCritical"
        vertices.append(DiagramVertex(p, kind, word[p]))
    for s, r in enumerate(saddle_ranks):
        vertices.append(DiagramVertex(L + s, "saddle", r))
    edges = [DiagramEdge(p, (p + 1) % L, BOUNDARY_ARC) for p in range(L)]
    edges += [DiagramEdge(a, b, LEVEL_ARC) for a, b in level]
    return Diagram(tuple(vertices), tuple(edges), tuple(range(L)))


def test_smallest_bounds_give_the_bigon():
    codes = enumerate_diagrams(2, 0, 2)
    f = f_lin()
    assert codes == [canonical_code(build_diagram(f.disk, f))]


def test_saddle_class_present():
    f = f_saddle()
    assert canonical_code(build_diagram(f.disk, f)) in enumerate_diagrams(4, 1, 3)


@pytest.mark.parametrize("bounds", [(2, 0, 2), (2, 1, 3), (4, 0, 3), (4, 1, 3)])
def test_matches_naive_generator(bounds):
    assert set(enumerate_diagrams(*bounds)) == naive_codes(*bounds)


def test_same_extrema_census():
    codes = enumerate_diagrams(4, 0, 4)
    twins = filter_by_census(codes, SAME_EXTREMA)
    assert len(twins) >= 2
    assert filter_by_census(codes, {}) == codes
    assert filter_by_census(codes, {"extrema": 3}) == []
    with pytest.raises(ValueError):
        filter_by_census(codes, {"peaks": 1})


def test_emitted_codes_round_trip_and_are_distinct():
    codes = enumerate_diagrams(4, 2, 4)
    assert codes == sorted(codes) and len(set(codes)) == len(codes)
    diagrams = [decode(c) for c in codes]
    for c, D in zip(codes, diagrams):
        assert validate_diagram(D) == []
        assert canonical_code(D) == c
    for A, B in itertools.combinations(diagrams, 2):
        assert not are_equivalent(A, B).equivalent


def test_census_of_saddle_fixture():
    f = f_saddle()
    census = diagram_census(build_diagram(f.disk, f))
    assert census == {"min": 2, "max": 2, "junction": 4, "boundaryCritical": 0, "saddle": 1, "extrema": 4}


def test_parallel_matches_serial():
    assert enumerate_diagrams(4, 1, 4, workers=2) == enumerate_diagrams(4, 1, 4)


def test_deterministic_and_counts_stable():
    assert enumerate_diagrams(4, 1, 3) == enumerate_diagrams(4, 1, 3)


@pytest.mark.parametrize("bounds", [(3, 0, 3), (8, 0, 3), (0, 0, 3), (4, 3, 3), (4, -1, 3), (4, 0, 1), (4, 0, 7)])
def test_bounds_refused(bounds):
    with pytest.raises(SearchBoundsError):
        enumerate_diagrams(*bounds)


def test_boundary_words_are_rotation_classes():
    words = boundary_words(4, 3)
    assert (1, 2) in words
    for w in words:
        assert w == min(w[k:] + w[:k] for k in range(len(w)))
        assert sum(turning_flags(w)) % 2 == 0
