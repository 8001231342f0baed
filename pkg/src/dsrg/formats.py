"""Persistence formats: matrix text files, JSONL solution records, and
key=value run configuration.

Matrix text: v lines of exactly v characters from {0,1}, one row per
line; lines starting with '#' are comments.  Solution records are one
JSON object per line with fields absent when inapplicable.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .core import AdjacencyMatrix
from .errors import ParseError

THREADS_ENV = "DSRG_THREADS"


def parse_matrix_text(text: str) -> AdjacencyMatrix:
    """Parse the plain 0/1 matrix format; '#' lines are ignored."""
    lines = [ln.strip() for ln in text.splitlines()]
    rows = [ln for ln in lines if ln and not ln.startswith("#")]
    if not rows:
        raise ParseError("no matrix rows found")
    v = len(rows[0])
    bit_rows = []
    for i, ln in enumerate(rows):
        if len(ln) != v or len(rows) != v:
            raise ParseError(
                f"ragged input: expected {v} rows of {v} characters, "
                f"row {i} has {len(ln)} (total rows: {len(rows)})")
        bad = set(ln) - {"0", "1"}
        if bad:
            raise ParseError(f"row {i}: bad character {bad.pop()!r}")
        if ln[i] == "1":
            raise ParseError(f"nonzero diagonal entry at row {i}")
        bit_rows.append(sum(1 << j for j, ch in enumerate(ln) if ch == "1"))
    return AdjacencyMatrix(v, bit_rows)


def parse_binary_matrix(text: str):
    """Lenient variant of parse_matrix_text returning a dense array.

    Allows nonzero diagonals (circulant-block matrices given to
    compactify need not be loop-free).
    """
    import numpy as np
    lines = [ln.strip() for ln in text.splitlines()]
    rows = [ln for ln in lines if ln and not ln.startswith("#")]
    if not rows:
        raise ParseError("no matrix rows found")
    v = len(rows[0])
    out = []
    for i, ln in enumerate(rows):
        if len(ln) != v or len(rows) != v:
            raise ParseError(
                f"ragged input: expected {v} rows of {v} characters, "
                f"row {i} has {len(ln)} (total rows: {len(rows)})")
        bad = set(ln) - {"0", "1"}
        if bad:
            raise ParseError(f"row {i}: bad character {bad.pop()!r}")
        out.append([int(ch) for ch in ln])
    return np.array(out, dtype=np.int64)


def render_matrix_text(a: AdjacencyMatrix) -> str:
    return "\n".join(
        "".join("1" if r >> j & 1 else "0" for j in range(a.v))
        for r in a.rows) + "\n"


def load_matrix_file(path: str) -> AdjacencyMatrix:
    with open(path) as fh:
        return parse_matrix_text(fh.read())


@dataclass(frozen=True)
class SolutionRecord:
    """One JSONL record; kind selects which fields apply."""

    kind: str                    # stage1 | stage2 | class
    c1: tuple | None = None      # n x n integers
    masks: tuple | None = None   # n x n mask integers, bit i = coeff of x^i
    adjacency: tuple | None = None  # v strings of '0'/'1'
    certificate: str | None = None  # lowercase hex
    class_id: int | None = None

    def to_json(self) -> str:
        out = {"kind": self.kind}
        if self.c1 is not None:
            out["c1"] = [list(r) for r in self.c1]
        if self.masks is not None:
            out["masks"] = [list(r) for r in self.masks]
        if self.adjacency is not None:
            out["adjacency"] = list(self.adjacency)
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.class_id is not None:
            out["class_id"] = self.class_id
        return json.dumps(out, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "SolutionRecord":
        try:
            d = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSONL record: {exc}") from exc
        if "kind" not in d:
            raise ParseError("record lacks a 'kind' field")
        return cls(
            kind=d["kind"],
            c1=tuple(tuple(r) for r in d["c1"]) if "c1" in d else None,
            masks=tuple(tuple(r) for r in d["masks"])
            if "masks" in d else None,
            adjacency=tuple(d["adjacency"]) if "adjacency" in d else None,
            certificate=d.get("certificate"),
            class_id=d.get("class_id"),
        )

    def matrix(self) -> AdjacencyMatrix:
        if self.adjacency is None:
            raise ParseError(f"{self.kind} record carries no adjacency")
        return parse_matrix_text("\n".join(self.adjacency))


def adjacency_strings(a: AdjacencyMatrix) -> tuple:
    return tuple(
        "".join("1" if r >> j & 1 else "0" for j in range(a.v))
        for r in a.rows)


def read_records(path: str):
    with open(path) as fh:
        return [SolutionRecord.from_json(ln) for ln in fh
                if ln.strip()]


def write_records(path: str, records, append=False):
    with open(path, "a" if append else "w") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


@dataclass
class RunConfig:
    """Merged key=value config file and command-line flags; flags win."""

    params: tuple | None = None       # (v, k, t, lam, mu)
    block_size: int = 3
    threads: int = field(
        default_factory=lambda: int(os.environ.get(THREADS_ENV, "1")))
    checkpoint: str | None = None
    resume: bool = False
    limit: int | None = None
    subtree: tuple | None = None
    stage1_only: bool = False
    out: str | None = None

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        cfg = cls()
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ParseError(f"{path}:{lineno}: expected key=value")
                key, _, val = line.partition("=")
                cfg.apply(key.strip(), val.strip(),
                          where=f"{path}:{lineno}")
        return cfg

    def apply(self, key: str, val: str, where="flag"):
        try:
            if key == "params":
                self.params = tuple(int(x) for x in val.split())
                if len(self.params) != 5:
                    raise ValueError("need 5 integers")
            elif key == "block_size":
                self.block_size = int(val)
            elif key == "threads":
                self.threads = int(val)
            elif key == "checkpoint":
                self.checkpoint = val
            elif key == "resume":
                self.resume = val.lower() in ("1", "true", "yes")
            elif key == "limit":
                self.limit = int(val)
            elif key == "subtree":
                self.subtree = tuple(int(x) for x in val.split(","))
            elif key == "stage1_only":
                self.stage1_only = val.lower() in ("1", "true", "yes")
            elif key == "out":
                self.out = val
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from exc
