"""Pattern files and report serialization.

Text format, one pattern per file::

    r=3 n=4
    1 2 2
    1 2 3

Blank lines and ``#`` comments are ignored. The JSON mirror is
``{"r": 3, "n": 4, "edges": [[1, 2, 2], [1, 2, 3]]}``.
"""

from __future__ import annotations

import dataclasses
import io
import json
import math
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .pattern import PatternError, RPattern, make_pattern

_HEADER = re.compile(r"^\s*r\s*=\s*(-?\d+)\s+n\s*=\s*(-?\d+)\s*$")


class PatternFormatError(PatternError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _parse_text(text: str) -> RPattern:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            mt = _HEADER.match(line)
            if not mt:
                raise PatternFormatError(f"expected header 'r=<int> n=<int>', got {raw!r}", lineno)
            r, n = int(mt.group(1)), int(mt.group(2))
            if r < 2:
                raise PatternFormatError(f"uniformity r={r} must be at least 2", lineno)
            if n < 1:
                raise PatternFormatError(f"vertex count n={n} must be at least 1", lineno)
            header = (r, n, lineno)
            continue
        try:
            e = [int(tok) for tok in line.split()]
        except ValueError:
            raise PatternFormatError(f"non-integer vertex in {raw!r}", lineno) from None
        r, n, _ = header
        if len(e) != r:
            raise PatternFormatError(f"edge multiplicity {len(e)} ≠ r={r}", lineno)
        bad = [v for v in e if not 1 <= v <= n]
        if bad:
            raise PatternFormatError(f"vertex {bad[0]} outside 1..{n}", lineno)
        edges.append(e)
    if header is None:
        raise PatternFormatError("missing header line 'r=<int> n=<int>'")
    return make_pattern(header[0], header[1], edges)


def _parse_json(text: str) -> RPattern:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PatternFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(data, dict) or not {"r", "n", "edges"} <= data.keys():
        raise PatternFormatError("JSON pattern needs keys 'r', 'n' and 'edges'")
    r, n = data["r"], data["n"]
    if not isinstance(r, int) or not isinstance(n, int):
        raise PatternFormatError("'r' and 'n' must be integers")
    for i, e in enumerate(data["edges"]):
        if not isinstance(e, list) or not all(isinstance(v, int) for v in e):
            raise PatternFormatError(f"edge #{i} is not a list of integers")
        if len(e) != r:
            raise PatternFormatError(f"edge #{i}: edge multiplicity {len(e)} ≠ r={r}")
    return make_pattern(r, n, data["edges"])


def parse_pattern_text(text: str) -> RPattern:
    """Parse either format; JSON is recognised by a leading ``{``."""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_text(text)


def parse_pattern(source) -> RPattern:
    """Read a pattern from a path, an open file, or ``"-"`` for stdin."""
    if source == "-":
        return parse_pattern_text(sys.stdin.read())
    if hasattr(source, "read"):
        return parse_pattern_text(source.read())
    return parse_pattern_text(Path(source).read_text())


def format_pattern(P: RPattern, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({"r": P.r, "n": P.n, "edges": [list(e) for e in P.edges]}) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown pattern format {fmt!r}")
    out = io.StringIO()
    out.write(f"r={P.r} n={P.n}\n")
    for e in P.edges:
        out.write(" ".join(map(str, e)) + "\n")
    return out.getvalue()


def write_pattern(P: RPattern, path, fmt: str | None = None):
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix == ".json" else "text"
    path.write_text(format_pattern(P, fmt))


def to_jsonable(obj):
    """Plain data for a result object: dataclasses, arrays, fractions, patterns."""
    if isinstance(obj, RPattern):
        out = {"r": obj.r, "n": obj.n, "edges": [list(e) for e in obj.edges]}
        return out
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, Fraction):
        return {"fraction": f"{obj.numerator}/{obj.denominator}", "value": float(obj)}
    return obj


def emit_report(result, fmt: str = "text", **context) -> bytes:
    """Serialize a result with the tool version and any context (seed, config).

    Floats use Python's shortest round-trip representation. Field order
    follows the result's own field order, so output is stable.
    """
    payload = {"tool": "nonjump", "version": __version__}
    payload.update(to_jsonable(context))
    payload["result"] = to_jsonable(result)
    if fmt == "json":
        return (json.dumps(payload, indent=2) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            for i, v in enumerate(value):
                walk(f"{prefix}[{i}]", v)
        else:
            lines.append(f"{prefix}: {json.dumps(value) if not isinstance(value, str) else value}")

    walk("", payload)
    return ("\n".join(lines) + "\n").encode()
