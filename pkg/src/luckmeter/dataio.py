"""CSV ingestion, the built-in Nobel sieve counts, and report serialization.

Input schemas (strict header, strict column order):

* ranking:  ``id,score,label`` with label 0 or 1
* paired:   ``id,x,y``

Reports serialize canonically: sorted keys, reals with 6 significant
digits (``format(x, "#.6g")``), LF line endings. Timestamps never enter
the canonical bytes; they go to a separate sidecar.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from . import __version__
from .errors import (
    BadLabelError,
    BadScoreError,
    DuplicateIdError,
    InvalidInputError,
    MalformedHeaderError,
    ParseError,
)
from .sieve import (
    CurveSeries,
    LabeledRanking,
    SievePoint,
    SieveReport,
    SparseSieve,
    ThresholdValue,
    build_ranking,
)

RANKING_HEADER = ("id", "score", "label")
PAIRED_HEADER = ("id", "x", "y")

Format = Literal["json", "csv"]


# -- input ------------------------------------------------------------------

def _text(data: str | bytes) -> str:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    return data.removeprefix("\ufeff")


def _rows(text: str, header: tuple[str, ...]):
    reader = csv.reader(io.StringIO(text))
    first = next(reader, None)
    if first is None or tuple(f.strip() for f in first) != header:
        raise MalformedHeaderError(f"expected header {','.join(header)!r}, got {first!r}", line=1)
    for fields in reader:
        line = reader.line_num
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(fields)}", line=line)
        yield line, [f.strip() for f in fields]


def _finite(value: str, line: int, what: str) -> float:
    try:
        v = float(value)
    except ValueError:
        raise BadScoreError(f"{what} {value!r} is not a number", line=line) from None
    if not math.isfinite(v):
        raise BadScoreError(f"{what} {value!r} is not finite", line=line)
    return v


def parse_labeled_csv(data: str | bytes) -> LabeledRanking:
    rows = []
    seen: dict[str, int] = {}
    for line, (ident, score, label) in _rows(_text(data), RANKING_HEADER):
        if ident in seen:
            raise DuplicateIdError(f"id {ident!r} already seen on line {seen[ident]}", line=line)
        seen[ident] = line
        if label not in ("0", "1"):
            raise BadLabelError(f"label must be 0 or 1, got {label!r}", line=line)
        rows.append((ident, _finite(score, line, "score"), int(label), line))
    return build_ranking(rows)


@dataclass(frozen=True)
class PairedData:
    ids: tuple[str, ...]
    x: np.ndarray
    y: np.ndarray


def parse_paired_csv(data: str | bytes) -> PairedData:
    ids, xs, ys = [], [], []
    seen: set[str] = set()
    for line, (ident, x, y) in _rows(_text(data), PAIRED_HEADER):
        if ident in seen:
            raise DuplicateIdError(f"duplicate id {ident!r}", line=line)
        seen.add(ident)
        ids.append(ident)
        xs.append(_finite(x, line, "x"))
        ys.append(_finite(y, line, "y"))
    return PairedData(tuple(ids), np.array(xs), np.array(ys))


def format_real(x: float) -> str:
    """Canonical 6-significant-digit rendering, e.g. ``0.157000``."""
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInputError(f"cannot serialize non-finite value {x}")
    s = format(x, "#.6g")
    # "#" keeps a bare trailing point on six-digit integers, which JSON rejects
    return s + "0" if s.endswith(".") else s


def write_ranking_csv(rk: LabeledRanking) -> bytes:
    lines = [",".join(RANKING_HEADER)]
    for e in rk.entries:
        lines.append(f"{e.id},{format_real(e.score)},{e.label}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- built-in data ----------------------------------------------------------

NOBEL = SparseSieve(
    n_pos=25,
    n_neg=2890,
    points=(
        SievePoint(1, 0),
        SievePoint(11, 3),
        SievePoint(25, 5),
        SievePoint(51, 10),
        SievePoint(759, 25),
    ),
    source="Q-factor ranking vs Nobel prize; counts digitized from published ROC and precision plots",
)


def embedded_nobel() -> SparseSieve:
    """Digitized Nobel-sieve counts: 25 laureates among 2915 scientists."""
    return NOBEL


# -- canonical serialization ------------------------------------------------

def _emit(obj: Any, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_real(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, Mapping):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = sorted(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(f"{pad}  {json.dumps(str(k))}: ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad + "  ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj: Any) -> bytes:
    out: list[str] = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out).encode("utf-8")


def _scalar_token(v: Any) -> str:
    if isinstance(v, Mapping):
        return "{}"
    if isinstance(v, (list, tuple)):
        return "[]"
    out: list[str] = []
    _emit(v, 0, out)
    return out[0]


def _flatten(obj: Any, prefix: str, rows: list[tuple[str, str]]) -> None:
    if isinstance(obj, Mapping) and obj:
        for k in sorted(obj):
            _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k), rows)
    elif isinstance(obj, (list, tuple)) and obj:
        for i, v in enumerate(obj):
            _flatten(v, f"{prefix}.{i}", rows)
    else:
        rows.append((prefix, _scalar_token(obj)))


def _unflatten(rows: list[tuple[str, Any]]) -> Any:
    root: dict = {}
    for path, value in rows:
        parts = path.split(".")
        node: Any = root
        for i, part in enumerate(parts):
            last = i == len(parts) - 1
            key: Any = int(part) if part.isdigit() else part
            nxt_is_index = not last and parts[i + 1].isdigit()
            if isinstance(node, list):
                while len(node) <= key:
                    node.append(None)
                if last:
                    node[key] = value
                elif node[key] is None:
                    node[key] = [] if nxt_is_index else {}
                node = node[key]
            else:
                if last:
                    node[key] = value
                else:
                    node = node.setdefault(key, [] if nxt_is_index else {})
    return root


# -- reports ----------------------------------------------------------------

@dataclass
class ReportDocument:
    """A serializable analysis report.

    ``metadata`` holds tool name, version and seed; ``timestamp`` is kept
    out of the canonical bytes and written only to the sidecar.
    """

    metadata: dict[str, Any]
    input_digest: str
    report: dict[str, Any]
    timestamp: str | None = field(default=None, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {"metadata": self.metadata, "input_digest": self.input_digest, "report": self.report}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> ReportDocument:
        try:
            return cls(dict(d["metadata"]), str(d["input_digest"]), dict(d["report"]))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"not a report document: {exc}") from None


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _threshold(tv: ThresholdValue | None, provenance: str) -> dict | None:
    if tv is None:
        return None
    c = tv.counts
    return {"R": tv.R, "r": tv.r, "tp": c.tp, "fp": c.fp, "fn": c.fn, "tn": c.tn,
            "provenance": provenance}


def curve_dict(curve: CurveSeries) -> dict[str, Any]:
    d: dict[str, Any] = {
        "kind": curve.kind,
        "notes": list(curve.notes),
        "points": [{"R": p.R, "x": p.x, "y": p.y} for p in curve.points],
    }
    if curve.auc is not None:
        d["auc"] = curve.auc
    return d


def report_dict(rep: SieveReport, provenance: str = "computed") -> dict[str, Any]:
    return {
        "n_pos": rep.n_pos,
        "n_neg": rep.n_neg,
        "sparse": rep.sparse,
        "auc": rep.auc,
        "best": _threshold(rep.best, provenance),
        "natural": _threshold(rep.natural, provenance),
        "full_recall": _threshold(rep.full_recall, provenance),
        "ceiling": {"r": rep.ceiling.r, "n_pos": rep.n_pos, "n": rep.n_pos + rep.n_neg,
                    "provenance": "closed-form"},
        "annotations": list(rep.annotations),
        "curves": {c.kind: curve_dict(c) for c in rep.curves},
    }


def make_document(rep: SieveReport, input_bytes: bytes, *, seed: int | None = None,
                  command: str = "analyze", provenance: str = "computed",
                  extra: Mapping[str, Any] | None = None,
                  timestamp: str | None = None) -> ReportDocument:
    meta: dict[str, Any] = {"tool": "luckmeter", "version": __version__, "command": command,
                            "seed": seed}
    body = report_dict(rep, provenance)
    if extra:
        body.update(extra)
    return ReportDocument(meta, digest(input_bytes), body, timestamp)


def write_report(doc: ReportDocument, format: Format = "json") -> bytes:
    if format == "json":
        return canonical_json(doc.to_dict())
    if format == "csv":
        rows: list[tuple[str, str]] = []
        _flatten(doc.to_dict(), "", rows)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("key", "value"))
        w.writerows(rows)
        return buf.getvalue().encode("utf-8")
    raise InvalidInputError(f"unknown report format {format!r}")


def read_report(data: bytes, format: Format = "json") -> ReportDocument:
    text = _text(data)
    if format == "json":
        try:
            return ReportDocument.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if format == "csv":
        reader = csv.reader(io.StringIO(text))
        if next(reader, None) != ["key", "value"]:
            raise MalformedHeaderError("expected header 'key,value'", line=1)
        rows = []
        for fields in reader:
            if len(fields) != 2:
                raise ParseError("expected 2 fields", line=reader.line_num)
            rows.append((fields[0], json.loads(fields[1])))
        return ReportDocument.from_dict(_unflatten(rows))
    raise InvalidInputError(f"unknown report format {format!r}")


def write_sidecar(doc: ReportDocument) -> bytes:
    return canonical_json({"timestamp": doc.timestamp, "input_digest": doc.input_digest,
                           **doc.metadata})
