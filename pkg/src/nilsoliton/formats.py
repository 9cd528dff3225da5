"""Algebra input files and machine-readable output.

An algebra file is TOML (or JSON) with ``dim``, an optional ``name`` and an
array of ``brackets`` records ``{i, j, k, value}`` using 1-based indices and
``i < j``. A JSON document with an ``algebra`` key (as written by
``nilsoliton check --format json``) is accepted too, so certificates can be
fed back in.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import BracketEntry, StructureConstants, from_brackets
from .errors import ParseError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class AlgebraFile:
    dim: int
    brackets: tuple[BracketEntry, ...]
    name: str | None = None

    def structure_constants(self) -> StructureConstants:
        return from_brackets(self.dim, self.brackets)

    def to_dict(self) -> dict:
        out = {}
        if self.name is not None:
            out["name"] = self.name
        out["dim"] = self.dim
        out["brackets"] = [
            {"i": e.i, "j": e.j, "k": e.k, "value": e.value} for e in self.brackets
        ]
        return out


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_number(v):
    return (_is_int(v) or isinstance(v, float)) and math.isfinite(v)


def parse_algebra(doc: dict) -> AlgebraFile:
    """Validate a decoded document; errors name the offending field."""
    if not isinstance(doc, dict):
        raise ParseError("top level must be a table/object")
    if "algebra" in doc:
        inner = doc["algebra"]
        if not isinstance(inner, dict):
            raise ParseError("must be a table/object", "algebra")
        name = inner.get("name", doc.get("name"))
        doc = dict(inner, name=name) if name is not None else inner
    unknown = set(doc) - {"dim", "brackets", "name"}
    if unknown:
        raise ParseError(f"unknown key(s) {sorted(unknown)}")
    if "dim" not in doc:
        raise ParseError("missing required key", "dim")
    dim = doc["dim"]
    if not _is_int(dim) or dim < 1:
        raise ParseError(f"must be a positive integer, got {dim!r}", "dim")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("must be a string", "name")
    raw = doc.get("brackets", [])
    if not isinstance(raw, list):
        raise ParseError("must be an array of records", "brackets")
    entries = []
    seen = {}
    for n, rec in enumerate(raw):
        where = f"brackets[{n}]"
        if not isinstance(rec, dict):
            raise ParseError("must be a record with i, j, k, value", where)
        missing = [f for f in ("i", "j", "k", "value") if f not in rec]
        if missing:
            raise ParseError(f"missing field(s) {missing}", where)
        extra = set(rec) - {"i", "j", "k", "value"}
        if extra:
            raise ParseError(f"unknown field(s) {sorted(extra)}", where)
        for f in ("i", "j", "k"):
            v = rec[f]
            if not _is_int(v) or not 1 <= v <= dim:
                raise ParseError(f"index must be an integer in 1..{dim}, got {v!r}", f"{where}.{f}")
        if not rec["i"] < rec["j"]:
            raise ParseError(f"need i < j, got i={rec['i']}, j={rec['j']}", where)
        if not _is_number(rec["value"]):
            raise ParseError(f"must be a finite number, got {rec['value']!r}", f"{where}.value")
        key = (rec["i"], rec["j"], rec["k"])
        if key in seen:
            raise ParseError(f"duplicate of brackets[{seen[key]}] {key}", where)
        seen[key] = n
        entries.append(BracketEntry(rec["i"], rec["j"], rec["k"], float(rec["value"])))
    return AlgebraFile(dim=dim, brackets=tuple(entries), name=name)


def loads_algebra(text: str, fmt: str | None = None) -> AlgebraFile:
    fmt = fmt or ("json" if text.lstrip().startswith("{") else "toml")
    try:
        if fmt == "json":
            doc = json.loads(text)
        else:
            doc = tomllib.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(str(exc)) from None
    return parse_algebra(doc)


def load_algebra(path) -> AlgebraFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), str(path)) from None
    except UnicodeDecodeError:
        raise ParseError("file is not UTF-8 text", str(path)) from None
    fmt = "json" if path.suffix.lower() == ".json" else None
    try:
        return loads_algebra(text, fmt)
    except ParseError as exc:
        raise ParseError(exc.message, f"{path}: {exc.where}" if exc.where else str(path)) from None


def algebra_file_from(alg: StructureConstants, name: str | None = None) -> AlgebraFile:
    return AlgebraFile(alg.dim, tuple(alg.entries()), name)


def dumps_toml(af: AlgebraFile) -> str:
    lines = []
    if af.name is not None:
        lines.append(f"name = {json.dumps(af.name, ensure_ascii=False)}")
    lines.append(f"dim = {af.dim}")
    for e in af.brackets:
        lines += ["", "[[brackets]]", f"i = {e.i}", f"j = {e.j}", f"k = {e.k}", f"value = {fmt_float(e.value)}"]
    return "\n".join(lines) + "\n"


# -- machine format --------------------------------------------------------

def fmt_float(x: float) -> str:
    """17 significant digits; exact round trip for every double."""
    x = float(x)
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def to_jsonable(obj):
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dumps_json(obj, indent: int = 2) -> str:
    """JSON with floats at 17 significant digits; non-finite floats become null."""

    def enc(v, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
            return json.dumps(v, ensure_ascii=False)
        if isinstance(v, float):
            return fmt_float(v) if math.isfinite(v) else "null"
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {enc(x, level + 1)}" for k, x in v.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(v, list):
            if not v:
                return "[]"
            if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
                return "[" + ", ".join(enc(x, level + 1) for x in v) + "]"
            return "[\n" + ",\n".join(pad + enc(x, level + 1) for x in v) + "\n" + end + "]"
        raise TypeError(f"cannot serialize {type(v).__name__}")

    return enc(to_jsonable(obj), 0) + "\n"


def fmt_human(x, digits: int = 6) -> str:
    if x is None:
        return "-"
    x = float(x)
    if math.isnan(x):
        return "-"
    if x == 0.0:
        return "0"
    return format(x, f".{digits}g")

