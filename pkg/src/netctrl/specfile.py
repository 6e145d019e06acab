"""Reading and writing network description files.

The format is a YAML (or JSON) mapping::

    m: 1                      # shared output dimension
    L: [[0, 0], [1, 0]]       # L[i][j] != 0: edge from node j+1 into node i+1
    delta: [1, 0]             # 1 = node receives external input
    nodes:
      - A: [[1, 2], [1, 0]]   # row-major nested lists of decimal numbers
        B: [[0], [1]]
        C: [[1, -1]]
        H: [[0], [-1]]

An optional top-level ``name`` string is allowed; any other key is rejected.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .errors import InputError, ValidationError
from .network import NetworkSpec, NodeDynamics, Topology, validate

TOP_KEYS = ("m", "L", "delta", "nodes")
OPTIONAL_TOP_KEYS = ("name",)
NODE_KEYS = ("A", "B", "C", "H")


class SpecSyntaxError(InputError):
    """Malformed spec file; ``locus`` names the field and, when known, the line."""

    def __init__(self, message: str, locus: str | None = None, line: int | None = None):
        self.locus = locus
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if locus:
            where.append(locus)
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def _line_index(text: str) -> dict[tuple, int]:
    """Map key paths such as ``("nodes", 1, "C")`` to 1-based source lines."""
    index: dict[tuple, int] = {}

    def walk(node, path):
        index[path] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            for key, value in node.value:
                walk(value, path + (key.value,))
                index[path + (key.value,)] = key.start_mark.line + 1
        elif isinstance(node, yaml.SequenceNode):
            for k, item in enumerate(node.value):
                walk(item, path + (k,))

    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError:
        return index
    if root is not None:
        walk(root, ())
    return index


def _locus(path: tuple) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else p)
    return out


def _matrix(value, path, lines) -> np.ndarray:
    def fail(msg):
        raise SpecSyntaxError(msg, _locus(path), lines.get(path))

    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        fail("expected a non-empty list of rows (nested list)")
    width = len(value[0])
    for r, row in enumerate(value):
        if len(row) != width:
            fail(f"row {r + 1} has {len(row)} entries, expected {width}")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                fail(f"entry {x!r} in row {r + 1} is not a decimal number")
    if width == 0:
        fail("rows are empty")
    return np.array(value, dtype=float)


def spec_from_data(data, lines: dict | None = None) -> NetworkSpec:
    """Build and validate a NetworkSpec from already-parsed YAML/JSON data."""
    lines = lines or {}
    if not isinstance(data, dict):
        raise SpecSyntaxError("top level must be a mapping with keys m, L, delta, nodes", line=lines.get(()))
    unknown = [k for k in data if k not in TOP_KEYS + OPTIONAL_TOP_KEYS]
    if unknown:
        raise SpecSyntaxError(f"unknown field {unknown[0]!r}", str(unknown[0]), lines.get((unknown[0],)))
    missing = [k for k in TOP_KEYS if k not in data]
    if missing:
        raise SpecSyntaxError(f"missing required field {missing[0]!r}", missing[0])
    m = data["m"]
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise SpecSyntaxError(f"m must be a positive integer, got {m!r}", "m", lines.get(("m",)))
    L = _matrix(data["L"], ("L",), lines)
    delta = data["delta"]
    if not isinstance(delta, list) or any(isinstance(d, bool) or d not in (0, 1) for d in delta):
        raise SpecSyntaxError("delta must be a list of 0/1 entries", "delta", lines.get(("delta",)))
    raw_nodes = data["nodes"]
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise SpecSyntaxError("nodes must be a non-empty list", "nodes", lines.get(("nodes",)))
    nodes = []
    for k, raw in enumerate(raw_nodes):
        path = ("nodes", k)
        if not isinstance(raw, dict):
            raise SpecSyntaxError("node must be a mapping with keys A, B, C, H", _locus(path), lines.get(path))
        extra = [key for key in raw if key not in NODE_KEYS]
        if extra:
            raise SpecSyntaxError(f"unknown field {extra[0]!r}", _locus(path + (extra[0],)),
                                  lines.get(path + (extra[0],)))
        absent = [key for key in NODE_KEYS if key not in raw]
        if absent:
            raise SpecSyntaxError(f"missing matrix {absent[0]}", _locus(path), lines.get(path))
        mats = {key: _matrix(raw[key], path + (key,), lines) for key in NODE_KEYS}
        nodes.append(NodeDynamics(**mats))
    if L.shape[0] != L.shape[1]:
        raise SpecSyntaxError(f"L must be square, got {L.shape[0]}x{L.shape[1]}", "L", lines.get(("L",)))
    if len(delta) != L.shape[0]:
        raise SpecSyntaxError(f"delta has {len(delta)} entries but L has order {L.shape[0]}",
                              "delta", lines.get(("delta",)))
    spec = NetworkSpec(tuple(nodes), Topology(L, tuple(delta)), m)
    validate(spec)
    return spec


def parse_spec(source) -> NetworkSpec:
    """Parse a network description from a path or from its text.

    Raises
    ------
    SpecSyntaxError
        For YAML syntax errors, unknown or missing fields and malformed
        matrices, with the field path and source line.
    ValidationError
        For dimension mismatches between nodes, ``m`` and ``L``.
    """
    text = read_source(source)
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark is not None else None
        raise SpecSyntaxError(f"syntax error: {exc.problem}", line=line) from None
    except yaml.YAMLError as exc:
        raise SpecSyntaxError(f"syntax error: {exc}") from None
    return spec_from_data(data, _line_index(text))


def read_source(source) -> str:
    if isinstance(source, Path):
        return source.read_text()
    if isinstance(source, str) and "\n" not in source and source.strip() and Path(source).is_file():
        return Path(source).read_text()
    if isinstance(source, str):
        return source
    raise InputError(f"cannot read a network description from {type(source).__name__}")


def spec_to_data(spec: NetworkSpec) -> dict:
    def mat(M):
        return [[_num(x) for x in row] for row in np.asarray(M)]

    return {
        "m": int(spec.m),
        "L": mat(spec.L),
        "delta": [int(d) for d in spec.delta],
        "nodes": [{k: mat(getattr(node, k)) for k in NODE_KEYS} for node in spec.nodes],
    }


def _num(x):
    x = float(x)
    return int(x) if x.is_integer() and abs(x) < 2**53 else x


def dump_spec(spec: NetworkSpec, header: str | None = None) -> str:
    """Render `spec` in the file format, one matrix row per line."""
    data = spec_to_data(spec)

    def rows(M, indent):
        pad = " " * indent
        body = (",\n" + pad).join(json.dumps(r) for r in M)
        return "[" + body + "]"

    out = []
    if header:
        out.extend(f"# {line}" for line in header.splitlines())
    out.append(f"m: {data['m']}")
    out.append(f"L: {rows(data['L'], 4)}")
    out.append(f"delta: {json.dumps(data['delta'])}")
    out.append("nodes:")
    for node in data["nodes"]:
        for k, key in enumerate(NODE_KEYS):
            lead = "  - " if k == 0 else "    "
            out.append(f"{lead}{key}: {rows(node[key], 8)}")
    return "\n".join(out) + "\n"


def spec_digest(spec: NetworkSpec) -> str:
    """SHA-256 of the canonical JSON form of `spec` (independent of layout and comments)."""
    canonical = json.dumps(spec_to_data(spec), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


FIXTURES = ("example1", "example2", "example4", "example5", "example6", "example7a", "example7b")


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    return resources.files("netctrl.fixtures").joinpath(f"{name}.yaml").read_text()


def load_fixture(name: str) -> NetworkSpec:
    return parse_spec(fixture_text(name))


__all__ = [
    "SpecSyntaxError", "ValidationError", "parse_spec", "spec_from_data", "spec_to_data", "dump_spec",
    "spec_digest", "load_fixture", "fixture_text", "FIXTURES",
]
