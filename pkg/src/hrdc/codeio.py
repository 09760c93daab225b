"""JSON-lines files of Hermitian matrices: one header line, then one matrix per line."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from hrdc.distributions import CodeSet
from hrdc.field_tower import FieldTower, tower_from_descriptor
from hrdc.hermitian import CODE_FORMAT, HermitianMatrix, header_json


def dumps_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def code_lines(Y: CodeSet, meta: dict | None = None) -> Iterable[str]:
    yield dumps_line(header_json(Y.tower, Y.n, meta))
    for A in Y:
        yield dumps_line(A.to_json())


def write_code(path: str | Path, Y: CodeSet, meta: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in code_lines(Y, meta):
            fh.write(line + "\n")


def read_code(path: str | Path) -> tuple[CodeSet, dict]:
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty code file")
    header = json.loads(lines[0])
    if header.get("format") != CODE_FORMAT:
        raise ValueError(f"{path}: unsupported format {header.get('format')!r}")
    tower: FieldTower = tower_from_descriptor(header["tower"])
    n = int(header["n"])
    mats = [HermitianMatrix.from_json(json.loads(ln), tower) for ln in lines[1:]]
    for A in mats:
        if A.n != n:
            raise ValueError(f"{path}: matrix of size {A.n}, header says {n}")
    return CodeSet(mats, tower, n), header
