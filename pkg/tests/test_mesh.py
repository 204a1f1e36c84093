from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from phdiagram.equivalence import decode
from phdiagram.errors import DegenerateComparisonError, NotPseudoharmonicError
from phdiagram.fixtures import f_lin, f_saddle, radial_disk, sample
from phdiagram.mesh import (
    Order,
    PointKind,
    ScalarField,
    TriangulatedDisk,
    classify_all,
    classify_vertex,
    critical_and_semiregular_values,
    effective_compare,
    validate_mesh,
)
from phdiagram.realize import realize_field


def rules(disk):
    return [v.rule for v in validate_mesh(disk)]


def torus(n=3):
    idx = lambda i, j: (i % n) * n + (j % n)
    coords = [(float(i), float(j)) for i in range(n) for j in range(n)]
    tris = []
    for i in range(n):
        for j in range(n):
            tris.append((idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)))
            tris.append((idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)))
    return TriangulatedDisk(coords, tris, [])


def test_fan_disk_is_valid():
    assert validate_mesh(radial_disk([16])) == []


def test_fixture_meshes_are_valid():
    assert validate_mesh(f_lin().disk) == []
    assert validate_mesh(f_saddle().disk) == []
    assert validate_mesh(f_saddle(64).disk) == []


def test_disconnected_triangles():
    disk = TriangulatedDisk(
        [(0, 0), (1, 0), (0, 1), (3, 0), (4, 0), (3, 1)], [(0, 1, 2), (3, 4, 5)], [0, 1, 2]
    )
    assert rules(disk) == ["mesh not connected"]


def test_torus_identification():
    assert rules(torus()) == ["Euler characteristic ≠ 1"]


def test_orientation_and_loop_problems():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    good = TriangulatedDisk(square, [(0, 1, 2), (0, 2, 3)], [0, 1, 2, 3])
    assert rules(good) == []
    flipped = TriangulatedDisk(square, [(0, 1, 2), (0, 3, 2)], [0, 1, 2, 3])
    assert "inconsistent orientation" in rules(flipped)
    backwards = TriangulatedDisk(square, [(0, 1, 2), (0, 2, 3)], [3, 2, 1, 0])
    assert rules(backwards) == ["boundary loop negatively oriented"]
    short = TriangulatedDisk(square, [(0, 1, 2), (0, 2, 3)], [0, 1, 2])
    assert rules(short) == ["boundary loop mismatch"]
    assert rules(TriangulatedDisk(square, [(0, 1, 1)], [0, 1])) == ["invalid triangle"]
    extra = TriangulatedDisk(square + [(5, 5)], [(0, 1, 2), (0, 2, 3)], [0, 1, 2, 3])
    assert rules(extra) == ["unused vertex"]


def test_effective_compare():
    disk = radial_disk([3])
    f = ScalarField(disk, [1.0, 2.0, 0.0, 0.0])
    assert effective_compare(f, 0, 1) is Order.LESS
    g = ScalarField(disk, [2.0, 2.0, 0.0, 0.0])
    assert effective_compare(g, 0, 1) is Order.LESS
    assert effective_compare(g, 1, 0) is Order.GREATER
    with pytest.raises(DegenerateComparisonError):
        effective_compare(g, 1, 1)


def test_field_rejects_bad_values():
    disk = radial_disk([3])
    with pytest.raises(ValueError):
        ScalarField(disk, [0.0, 1.0])
    with pytest.raises(ValueError):
        ScalarField(disk, [0.0, 1.0, float("nan"), 2.0])


def test_saddle_center():
    f = f_saddle()
    pc = classify_vertex(f.disk, f, 0)
    assert pc.kind is PointKind.INTERIOR_SADDLE and pc.multiplicity == 2


def test_linear_field_classes():
    f = f_lin()
    disk = f.disk
    classes = classify_all(disk, f)
    for v in range(disk.n_vertices):
        if not disk.is_boundary(v):
            assert classes[v].kind is PointKind.INTERIOR_REGULAR
    top = max(disk.boundary, key=lambda v: disk.vertices[v][1])
    assert classes[top].kind is PointKind.BOUNDARY_EXTREMUM and classes[top].extremum == "max"
    bottom = min(disk.boundary, key=lambda v: disk.vertices[v][1])
    assert classes[bottom].extremum == "min"
    others = [v for v in disk.boundary if v not in (top, bottom)]
    assert all(classes[v].kind is PointKind.BOUNDARY_REGULAR for v in others)


def test_interior_extremum_rejected():
    disk = radial_disk([6, 12])
    f = sample(disk, lambda x, y: x * x + y * y)
    with pytest.raises(NotPseudoharmonicError):
        classify_vertex(disk, f, 0)


def test_critical_values_of_fixtures():
    lin = f_lin()
    ys = [y for _, y in lin.disk.vertices]
    assert critical_and_semiregular_values(lin.disk, lin) == [
        (min(ys), "semiregular"),
        (max(ys), "semiregular"),
    ]
    sad = f_saddle()
    assert critical_and_semiregular_values(sad.disk, sad) == [
        (-1.0, "semiregular"),
        (0.0, "critical"),
        (1.0, "semiregular"),
    ]


def test_saddle_and_extremum_sharing_a_value():
    # realized diagram with a boundary max at rank 3 and a saddle also at rank 3
    D = decode("PHD1:N4|M3,b2,j3,M4,j3,m1,j3,M4,j3,j2,m1,j2|1(9,11);2(s(4,6,8))")
    disk, f = realize_field(D, 4)
    values = critical_and_semiregular_values(disk, f)
    assert [x for x, _ in values] == [1.0, 2.0, 3.0, 4.0]
    assert dict(values)[3.0] == "critical"


def test_boundary_critical_ray_counts():
    D = decode("PHD1:N3|M3,b2,m1,j2,M3,j2,m1,j2|1(3,5,7)")
    disk, f = realize_field(D, 3)
    classes = classify_all(disk, f)
    bcs = [pc for pc in classes if pc.kind is PointKind.BOUNDARY_CRITICAL]
    assert len(bcs) == 1 and bcs[0].multiplicity == 3 and bcs[0].extremum is None
    D = decode("PHD1:N3|M3,b2,M3,j2,m1,j2|1(3,5)")
    disk, f = realize_field(D, 3)
    bcs = [pc for pc in classify_all(disk, f) if pc.kind is PointKind.BOUNDARY_CRITICAL]
    assert len(bcs) == 1 and bcs[0].multiplicity == 2 and bcs[0].extremum == "min"


@settings(max_examples=25, deadline=None)
@given(
    a=st.floats(0.01, 100.0, allow_nan=False),
    b=st.floats(-100.0, 100.0, allow_nan=False),
)
def test_classification_affine_invariant(a, b):
    f = f_saddle()
    g = ScalarField(f.disk, [a * x + b for x in f.values])
    # order-preserving only if the map keeps distinct values distinct
    if len(set(g.values)) == len(set(f.values)):
        assert classify_all(f.disk, g) == classify_all(f.disk, f)


def test_interior_sign_changes_even():
    f = f_saddle(64)
    for v in range(f.disk.n_vertices):
        if not f.disk.is_boundary(v):
            assert classify_vertex(f.disk, f, v).rays % 2 == 0
