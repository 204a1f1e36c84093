"""Radially structured disk meshes and the two reference fields.

``f_lin``    f(x, y) = y on a disk with 16 boundary vertices.
``f_saddle`` f(x, y) = x^2 - y^2 on a disk with rings n/4, n/2 and n boundary
            vertices around a center vertex (n = 32 by default).

Values are rounded to 12 decimals so that points lying exactly on the zero
set (diagonals, axes) carry an exact 0 rather than floating-point residue.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Callable, Sequence

from .mesh import ScalarField, TriangulatedDisk


def _ccw(coords, tri):
    (ax, ay), (bx, by), (cx, cy) = (coords[i] for i in tri)
    area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return tri if area > 0 else (tri[0], tri[2], tri[1])


def radial_disk(ring_sizes: Sequence[int], rotation: float = 0.0) -> TriangulatedDisk:
    """Center vertex plus concentric rings; the last ring is the boundary.

    Ring ``k`` sits at radius ``(k + 1) / len(ring_sizes)``; its vertices are at
    angles ``2 pi j / n + rotation``.  Adjacent rings are zipped by angle.
    """
    coords = [(0.0, 0.0)]
    rings: list[list[int]] = []
    nr = len(ring_sizes)
    for k, n in enumerate(ring_sizes):
        r = (k + 1) / nr
        ids = []
        for j in range(n):
            a = 2 * math.pi * j / n + rotation
            ids.append(len(coords))
            coords.append((r * math.cos(a), r * math.sin(a)))
        rings.append(ids)

    tris = []
    first = rings[0]
    for j in range(len(first)):
        tris.append(_ccw(coords, (0, first[j], first[(j + 1) % len(first)])))
    for inner, outer in zip(rings, rings[1:]):
        m, n = len(inner), len(outer)
        i = j = 0
        while i < m or j < n:
            # advance along whichever ring has the smaller next angle
            if j < n and (i == m or (j + 1) * m <= (i + 1) * n):
                tris.append(_ccw(coords, (inner[i % m], outer[j], outer[(j + 1) % n])))
                j += 1
            else:
                tris.append(_ccw(coords, (inner[i], outer[j % n], inner[(i + 1) % m])))
                i += 1
    return TriangulatedDisk(coords, tris, rings[-1])


def sample(disk: TriangulatedDisk, f: Callable[[float, float], float], digits: int = 12) -> ScalarField:
    return ScalarField(disk, [round(f(x, y), digits) + 0.0 for x, y in disk.vertices])


def f_lin() -> ScalarField:
    return sample(radial_disk([8, 16]), lambda x, y: y)


def f_saddle(n_boundary: int = 32) -> ScalarField:
    if n_boundary % 8:
        raise ValueError("boundary vertex count must be a multiple of 8")
    disk = radial_disk([n_boundary // 4, n_boundary // 2, n_boundary])
    return sample(disk, lambda x, y: x * x - y * y)


def write_fixtures(directory: str | Path) -> list[Path]:
    """Write the reference fields and their diagrams as JSON files."""
    from .diagram import build_diagram
    from .formats import dumps, field_to_json

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, field in (("f_lin", f_lin()), ("f_saddle", f_saddle())):
        for stem, data in (
            (name, field_to_json(field.disk, field)),
            ("d" + name[1:], build_diagram(field.disk, field).to_json()),
        ):
            path = directory / f"{stem}.json"
            path.write_text(dumps(data))
            written.append(path)
    return written


if __name__ == "__main__":
    import sys

    for p in write_fixtures(sys.argv[1] if len(sys.argv) > 1 else "fixtures"):
        print(p)
