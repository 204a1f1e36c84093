from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from phdiagram.cli import main
from phdiagram.diagram import Diagram
from phdiagram.fixtures import f_lin, f_saddle, radial_disk, sample, write_fixtures
from phdiagram.formats import dumps, field_to_json

REPO = Path(__file__).resolve().parents[1]


def write(path: Path, data) -> str:
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


@pytest.fixture
def files(tmp_path):
    lin, sad = f_lin(), f_saddle()
    bowl_disk = radial_disk([6, 12])
    bowl = sample(bowl_disk, lambda x, y: x * x + y * y)
    return {
        "lin": write(tmp_path / "lin.json", field_to_json(lin.disk, lin)),
        "saddle": write(tmp_path / "saddle.json", field_to_json(sad.disk, sad)),
        "bowl": write(tmp_path / "bowl.json", field_to_json(bowl_disk, bowl)),
        "bad": write(tmp_path / "bad.json", '{"vertices": [[0, 0]'),
        "junk": write(tmp_path / "junk.json", '{"hello": 1}'),
    }


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_validate(files, capsys):
    assert run(capsys, "validate", files["lin"]) == (0, "ok\n")
    code, out = run(capsys, "validate", files["bowl"])
    assert code == 2 and "NotPseudoharmonicError" in out
    assert run(capsys, "validate", files["bad"])[0] == 3
    assert run(capsys, "validate", files["junk"])[0] == 3
    assert run(capsys, "validate", str(Path(files["lin"]).with_name("missing.json")))[0] == 3


def test_extract(files, capsys, tmp_path):
    code, out = run(capsys, "extract", files["lin"])
    D = Diagram.from_json(json.loads(out))
    assert code == 0 and len(D.vertices) == 2 and len(D.edges) == 2
    dot = tmp_path / "s.dot"
    code, out = run(capsys, "extract", files["saddle"], "--dot", str(dot))
    D = Diagram.from_json(json.loads(out))
    assert code == 0 and len(D.vertices) == 9
    assert [v.kind for v in D.vertices][-1] == "saddle"
    assert 'pos="0.000,2!"' in dot.read_text()
    assert run(capsys, "extract", files["bowl"])[0] == 2


def test_compare(files, capsys, tmp_path):
    disk = radial_disk([8, 16, 32], rotation=math.radians(37))
    g = sample(disk, lambda x, y: 5 * (x * x - y * y) - 2)
    rotated = write(tmp_path / "rot.json", field_to_json(disk, g))
    code, out = run(capsys, "compare", files["saddle"], rotated)
    assert code == 0 and out.startswith("equivalent\nwitness: ")
    code, out = run(capsys, "compare", files["lin"], files["saddle"])
    assert (code, out) == (1, "distinct\nreason: vertex count\n")
    assert run(capsys, "compare", files["lin"], files["bad"])[0] == 3
    assert run(capsys, "compare", files["lin"], files["bowl"])[0] == 2
    code, out = run(capsys, "compare", files["saddle"], rotated, "--json")
    assert json.loads(out)["verdict"] == "equivalent"


def test_canon_of_permuted_diagram_files(capsys, tmp_path):
    a = {"vertices": [{"id": 0, "kind": "max", "rank": 2}, {"id": 1, "kind": "min", "rank": 1}],
         "edges": [{"a": 0, "b": 1, "kind": "boundaryArc"}, {"a": 1, "b": 0, "kind": "boundaryArc"}],
         "cr_cycle": [0, 1]}
    b = {"vertices": [{"id": 9, "kind": "min", "rank": 1}, {"id": 4, "kind": "max", "rank": 2}],
         "edges": [{"a": 4, "b": 9, "kind": "boundaryArc"}, {"a": 9, "b": 4, "kind": "boundaryArc"}],
         "cr_cycle": [9, 4]}
    out_a = run(capsys, "canon", write(tmp_path / "a.json", a))
    out_b = run(capsys, "canon", write(tmp_path / "b.json", b))
    assert out_a == out_b == (0, "PHD1:N2|M2,m1|\n")
    bad = dict(a, vertices=[{"id": 0, "kind": "max", "rank": 1}, {"id": 1, "kind": "min", "rank": 1}])
    assert run(capsys, "canon", write(tmp_path / "c.json", bad))[0] == 2


def test_enumerate(capsys, tmp_path):
    code, out = run(capsys, "enumerate", "--max-extrema", "2", "--max-saddles", "0", "--max-rank", "2")
    assert code == 0 and out.splitlines() == ["PHD1:N2|M2,m1|"]
    code, out = run(capsys, "enumerate", "--max-extrema", "4", "--max-saddles", "0", "--max-rank", "4", "--json")
    data = json.loads(out)
    assert data["count"] == len(data["diagrams"]) and "census" in data["diagrams"][0]
    assert run(capsys, "enumerate", "--max-extrema", "10")[0] == 2


def test_realize_then_compare(files, capsys, tmp_path):
    _, out = run(capsys, "extract", files["saddle"])
    dpath = write(tmp_path / "d.json", out)
    realized = tmp_path / "r.json"
    assert run(capsys, "realize", dpath, "--resolution", "8", "--out", str(realized))[0] == 0
    assert run(capsys, "compare", str(realized), files["saddle"])[0] == 0
    assert run(capsys, "realize", dpath, "--resolution", "0")[0] == 2


def test_outputs_are_byte_identical(files, capsys):
    first = run(capsys, "extract", files["saddle"])
    second = run(capsys, "extract", files["saddle"])
    assert first == second
    assert run(capsys, "enumerate") == run(capsys, "enumerate")


def test_usage_errors_exit_in_contract(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["--help"]) == 0
    capsys.readouterr()


def test_shipped_fixtures_are_current(tmp_path):
    for path in write_fixtures(tmp_path):
        assert (REPO / "fixtures" / path.name).read_text() == path.read_text()
    assert json.loads((REPO / "fixtures" / "f_lin.json").read_text()) == json.loads(
        dumps(field_to_json(f_lin().disk, f_lin()))
    )
