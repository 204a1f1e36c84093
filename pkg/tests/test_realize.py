from __future__ import annotations

import math

import pytest

from phdiagram.diagram import Diagram, build_diagram, faces
from phdiagram.enumeration import enumerate_diagrams
from phdiagram.equivalence import are_equivalent, decode
from phdiagram.errors import MisuseError
from phdiagram.fixtures import f_lin, f_saddle
from phdiagram.mesh import PointKind, classify_all, validate_mesh
from phdiagram.realize import _place, crossing_pairs, embed_diagram, geometric_faces, realize_field

TWO_SADDLES = "PHD1:N3|M3,j2,m1,j2,M3,j2,m1,j2,M3,j2,m1,j2|1(s(3,5,s(7,9,11)))"


@pytest.fixture(scope="module")
def d_lin():
    f = f_lin()
    return build_diagram(f.disk, f)


@pytest.fixture(scope="module")
def d_saddle():
    f = f_saddle()
    return build_diagram(f.disk, f)


def test_bigon_embedding(d_lin):
    emb = embed_diagram(d_lin)
    (x0, y0), (x1, y1) = emb.positions[0], emb.positions[1]
    assert math.isclose(x0, -x1) and math.isclose(y0, -y1, abs_tol=1e-12)
    for pts in emb.polylines:
        assert all(math.isclose(math.hypot(*p), 1.0) for p in pts)
    upper = [max(p[1] for p in pts) for pts in emb.polylines]
    assert sorted(upper)[0] < 1e-9 < sorted(upper)[1]


def test_saddle_placed_at_center(d_saddle):
    emb = embed_diagram(d_saddle)
    (s,) = [v.id for v in d_saddle.vertices if v.kind == "saddle"]
    assert math.hypot(*emb.positions[s]) < 1e-9


def test_interleaved_chords_rejected_before_embedding():
    D = Diagram.make(
        [(0, "boundaryCritical", 2), (1, "boundaryCritical", 1), (2, "boundaryCritical", 2), (3, "boundaryCritical", 1)],
        [(0, 1, "boundaryArc"), (1, 2, "boundaryArc"), (2, 3, "boundaryArc"), (3, 0, "boundaryArc"),
         (0, 2, "levelArc"), (1, 3, "levelArc")],
        [0, 1, 2, 3],
    )
    with pytest.raises(MisuseError):
        embed_diagram(D)
    # the raw straight-line drawing does cross
    assert crossing_pairs(_place(D, False).polylines) == [(4, 5)]


def test_subdivided_placement_is_planar():
    D = decode(TWO_SADDLES)
    emb = _place(D, True)
    saddle_edges = [
        i for i, e in enumerate(D.edges) if D.kind(e.a) == "saddle" and D.kind(e.b) == "saddle"
    ]
    assert saddle_edges and all(len(emb.polylines[i]) == 3 for i in saddle_edges)
    assert crossing_pairs(emb.polylines) == []
    assert geometric_faces(D, emb) == faces(D)


@pytest.mark.parametrize("name", ["d_lin", "d_saddle"])
def test_round_trip_fixtures(name, request):
    D = request.getfixturevalue(name)
    disk, f = realize_field(D, 8)
    assert validate_mesh(disk) == []
    assert are_equivalent(build_diagram(disk, f), D).equivalent


def test_geometric_faces_match(d_lin, d_saddle):
    for D in (d_lin, d_saddle, decode(TWO_SADDLES)):
        assert geometric_faces(D, embed_diagram(D)) == faces(D)


@pytest.mark.parametrize("resolution", [1, 2, 5])
def test_realized_fields_have_only_intended_criticalities(resolution):
    for code in enumerate_diagrams(4, 1, 3) + [TWO_SADDLES]:
        D = decode(code)
        disk, f = realize_field(D, resolution)
        classes = classify_all(disk, f)
        saddles = sorted(
            pc.multiplicity for pc in classes if pc.kind is PointKind.INTERIOR_SADDLE
        )
        expected = sorted(len(D.incident[v.id]) // 2 for v in D.vertices if v.kind == "saddle")
        assert saddles == expected
        for v in range(disk.n_vertices):
            if not disk.is_boundary(v) and classes[v].kind is not PointKind.INTERIOR_SADDLE:
                assert classes[v].kind is PointKind.INTERIOR_REGULAR
        assert are_equivalent(build_diagram(disk, f), D).equivalent


def test_realized_values_are_ranks_and_half_steps(d_saddle):
    disk, f = realize_field(d_saddle, 4)
    assert {x for x in f.values if x == int(x)} == {1.0, 2.0, 3.0}
    assert all((2 * x) == int(2 * x) for x in f.values)


def test_bad_resolution(d_lin):
    with pytest.raises(ValueError):
        realize_field(d_lin, 0)
