"""``phd`` command line: validate, extract, compare, canon, enumerate, realize.

Exit status: 0 ok or equivalent, 1 distinct, 2 invalid input or refused
bounds, 3 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .diagram import Diagram, build_diagram, validate_diagram
from .enumeration import diagram_census, enumerate_diagrams
from .equivalence import are_equivalent, canonical_code, decode
from .errors import FormatError, PHDError
from .formats import dumps, field_to_json, load, to_dot
from .mesh import classify_all, validate_mesh
from .realize import embed_diagram, realize_field

OK, DISTINCT, INVALID, PARSE = 0, 1, 2, 3


class _Invalid(Exception):
    def __init__(self, lines: list[str]):
        super().__init__("; ".join(lines))
        self.lines = lines


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _as_diagram(path: str) -> Diagram:
    obj = load(path)
    if isinstance(obj, Diagram):
        bad = validate_diagram(obj)
        if bad:
            raise _Invalid([str(v) for v in bad])
        return obj
    disk, field = obj
    bad = validate_mesh(disk)
    if bad:
        raise _Invalid([str(v) for v in bad])
    return build_diagram(disk, field)


def cmd_validate(args) -> int:
    obj = load(args.path)
    if isinstance(obj, Diagram):
        problems = [str(v) for v in validate_diagram(obj)]
    else:
        disk, field = obj
        problems = [str(v) for v in validate_mesh(disk)]
        if not problems:
            try:
                classify_all(disk, field)
                build_diagram(disk, field)
            except PHDError as exc:
                problems.append(f"{type(exc).__name__}: {exc}")
    for line in problems:
        print(line)
    if problems:
        return INVALID
    print("ok")
    return OK


def cmd_extract(args) -> int:
    obj = load(args.path)
    if isinstance(obj, Diagram):
        raise FormatError(f"{args.path} is a diagram, extract expects a field")
    disk, field = obj
    bad = validate_mesh(disk)
    if bad:
        raise _Invalid([str(v) for v in bad])
    D = build_diagram(disk, field)
    _emit(dumps(D.to_json()), args.out)
    if args.dot:
        _write_dot(D, args.dot)
    return OK


def _write_dot(D: Diagram, path: str) -> None:
    emb = embed_diagram(D)
    Path(path).write_text(to_dot(D, {v: p[0] for v, p in emb.positions.items()}))


def cmd_compare(args) -> int:
    D1, D2 = _as_diagram(args.first), _as_diagram(args.second)
    report = are_equivalent(D1, D2, allow_reflection=args.allow_reflection)
    if args.json:
        payload = {"verdict": report.verdict, "reason": report.reason}
        if report.witness is not None:
            payload["witness"] = {str(k): v for k, v in sorted(report.witness.items())}
        sys.stdout.write(dumps(payload))
    elif report.equivalent:
        pairs = " ".join(f"{k}->{v}" for k, v in sorted(report.witness.items()))
        print(f"equivalent\nwitness: {pairs}")
    else:
        print(f"distinct\nreason: {report.reason}")
    return OK if report.equivalent else DISTINCT


def cmd_canon(args) -> int:
    D = _as_diagram(args.path)
    print(canonical_code(D, allow_reflection=args.allow_reflection))
    return OK


def cmd_enumerate(args) -> int:
    codes = enumerate_diagrams(
        args.max_extrema, args.max_saddles, args.max_rank, workers=args.workers
    )
    if args.json:
        rows = [{"code": c, "census": diagram_census(decode(c))} for c in codes]
        _emit(dumps({"count": len(codes), "diagrams": rows}), args.out)
    else:
        _emit("".join(c + "\n" for c in codes), args.out)
    return OK


def cmd_realize(args) -> int:
    D = _as_diagram(args.path)
    disk, field = realize_field(D, args.resolution)
    _emit(json.dumps(field_to_json(disk, field)) + "\n", args.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phd", description="Combinatorial diagrams of PL fields on the disk.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a field (or diagram) file")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("extract", help="field JSON -> diagram JSON")
    s.add_argument("path")
    s.add_argument("--out")
    s.add_argument("--dot", help="also write a Graphviz file here")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("compare", help="decide equivalence of two fields or diagrams")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--allow-reflection", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("canon", help="print the canonical code")
    s.add_argument("path")
    s.add_argument("--allow-reflection", action="store_true")
    s.set_defaults(func=cmd_canon)

    s = sub.add_parser("enumerate", help="list all valid diagram classes within bounds")
    s.add_argument("--max-extrema", type=int, default=4)
    s.add_argument("--max-saddles", type=int, default=1)
    s.add_argument("--max-rank", type=int, default=3)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--json", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("realize", help="diagram -> field JSON")
    s.add_argument("path")
    s.add_argument("--resolution", type=int, default=8)
    s.add_argument("--out")
    s.set_defaults(func=cmd_realize)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else INVALID
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE
    except _Invalid as exc:
        for line in exc.lines:
            print(line)
        return INVALID
    except (PHDError, ValueError) as exc:
        print(f"invalid: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
