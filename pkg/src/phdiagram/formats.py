"""Field JSON, Diagram JSON and DOT rendering."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Union

from .diagram import Diagram
from .errors import FormatError
from .mesh import ScalarField, TriangulatedDisk

Loaded = Union[tuple[TriangulatedDisk, ScalarField], Diagram]


def field_to_json(disk: TriangulatedDisk, field: ScalarField) -> dict:
    return {
        "vertices": [[x, y] for x, y in disk.vertices],
        "triangles": [list(t) for t in disk.triangles],
        "boundary": list(disk.boundary),
        "values": list(field.values),
    }


def field_from_json(data: dict) -> tuple[TriangulatedDisk, ScalarField]:
    try:
        verts = [(float(x), float(y)) for x, y in data["vertices"]]
        tris = [tuple(int(i) for i in t) for t in data["triangles"]]
        boundary = [int(i) for i in data["boundary"]]
        values = [float(v) for v in data["values"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed field JSON: {exc}") from exc
    if any(len(t) != 3 for t in tris):
        raise FormatError("every triangle needs exactly three vertex indices")
    disk = TriangulatedDisk(verts, tris, boundary)
    try:
        return disk, ScalarField(disk, values)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def diagram_from_json(data: dict) -> Diagram:
    try:
        return Diagram.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed diagram JSON: {exc}") from exc


def load(path: str | Path) -> Loaded:
    """Read a Field or Diagram JSON file, telling them apart by their keys."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path}: top-level JSON value must be an object")
    if "triangles" in data:
        return field_from_json(data)
    if "cr_cycle" in data:
        return diagram_from_json(data)
    raise FormatError(f"{path}: neither a field (triangles) nor a diagram (cr_cycle)")


def dumps(data: dict) -> str:
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def to_dot(D: Diagram, xs: dict[int, float] | None = None) -> str:
    """Graphviz text; vertices pinned at (embedding x, rank) when ``xs`` is given."""
    if xs is None:
        L = len(D.cr_cycle)
        xs = {v: math.cos(2 * math.pi * k / L) for k, v in enumerate(D.cr_cycle)}
    lines = ["graph diagram {", "  node [shape=circle, fontsize=10];"]
    for v in D.vertices:
        x = round(xs.get(v.id, 0.0) * 3, 3) + 0.0  # + 0.0 drops a negative zero
        lines.append(
            f'  {v.id} [label="{v.id}\\n{v.kind}\\nr{v.rank}", pos="{x:.3f},{v.rank:d}!"];'
        )
    for e in D.edges:
        style = "solid" if e.kind == "boundaryArc" else "dashed"
        lines.append(f"  {e.a} -- {e.b} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
