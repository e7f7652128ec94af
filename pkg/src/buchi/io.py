"""Record serialization (JSONL / TSV) and the key=value resume file."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import IO, Iterable, List, Optional

RESUME_KEYS = ("a", "length", "bound", "last_completed_x1")


def _tsv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


class RecordWriter:
    """Single writer for a stream of dict records; fields are fixed on construction."""

    def __init__(self, out: IO[str], fmt: str, fields: List[str], header: bool = True):
        if fmt not in ("jsonl", "tsv"):
            raise ValueError(f"format must be jsonl or tsv, got {fmt!r}")
        self.out = out
        self.fmt = fmt
        self.fields = list(fields)
        if fmt == "tsv" and header:
            out.write("\t".join(self.fields) + "\n")

    def write(self, rec: dict) -> None:
        if self.fmt == "jsonl":
            line = json.dumps({k: rec.get(k) for k in self.fields}, separators=(",", ":"))
        else:
            line = "\t".join(_tsv_cell(rec.get(k)) for k in self.fields)
        self.out.write(line + "\n")

    def write_all(self, recs: Iterable[dict]) -> None:
        for r in recs:
            self.write(r)

    def flush(self) -> None:
        self.out.flush()


def parse_record_line(line: str, fmt: str, fields: List[str]) -> Optional[dict]:
    """Inverse of RecordWriter.write for the fields needed on resume; None for a torn line."""
    if not line.endswith("\n"):
        return None
    line = line[:-1]
    if fmt == "jsonl":
        try:
            return json.loads(line)
        except json.JSONDecodeError:
            return None
    cells = line.split("\t")
    if len(cells) != len(fields):
        return None
    rec = dict(zip(fields, cells))
    rec["seq"] = [int(v) for v in rec["seq"].split(",")]
    return rec


@dataclass(frozen=True)
class ResumeState:
    a: int
    length: int
    bound: int
    last_completed_x1: int

    def matches(self, a: int, length: int, bound: int) -> bool:
        return (self.a, self.length, self.bound) == (a, length, bound)


def write_resume(path: str, state: ResumeState) -> None:
    """Write the state next to its destination, then rename over it."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".resume-", dir=directory)
    try:
        with os.fdopen(fd, "w") as f:
            for k in RESUME_KEYS:
                f.write(f"{k}={getattr(state, k)}\n")
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_resume(path: str) -> Optional[ResumeState]:
    if not os.path.exists(path):
        return None
    vals = {}
    with open(path) as f:
        for raw in f:
            raw = raw.strip()
            if not raw:
                continue
            key, sep, value = raw.partition("=")
            if not sep:
                raise ValueError(f"malformed resume line {raw!r}")
            vals[key.strip()] = int(value)
    missing = [k for k in RESUME_KEYS if k not in vals]
    if missing:
        raise ValueError(f"resume file {path} lacks {', '.join(missing)}")
    return ResumeState(**{k: vals[k] for k in RESUME_KEYS})


def truncate_output(path: str, fmt: str, fields: List[str], last_x1: int) -> int:
    """Drop records whose seed x1 is past ``last_x1`` (and any torn final line).

    Returns the number of records kept.
    """
    if not os.path.exists(path):
        return 0
    keep_bytes = 0
    kept = 0
    with open(path, "rb") as f:
        first = True
        for raw in f:
            line = raw.decode("utf-8")
            if first and fmt == "tsv":
                first = False
                if line.rstrip("\n") == "\t".join(fields):
                    keep_bytes += len(raw)
                    continue
            first = False
            rec = parse_record_line(line, fmt, fields)
            if rec is None or rec["seq"][0] > last_x1:
                break
            keep_bytes += len(raw)
            kept += 1
    with open(path, "r+b") as f:
        f.truncate(keep_bytes)
    return kept
