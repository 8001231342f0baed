"""Digraph representation and exact verification of strong regularity.

Two independent verifiers are provided: one checks the matrix equations
A^2 = tI + lam*A + mu*(J - I - A), AJ = JA = kJ with exact integer matrix
arithmetic, the other counts directed 2-paths by explicit neighborhood
intersection (bitwise AND + popcount) without ever squaring a matrix.
Agreement between the two is a standing test invariant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DsrgError, NegativeParameter, TooLarge

VIOLATION_CAP = 16  # per kind; reports are diagnostics, not proofs


@dataclass(frozen=True)
class DsrgParams:
    """Parameter five-tuple (v, k, t, lam, mu) of a strongly regular digraph."""

    v: int
    k: int
    t: int
    lam: int
    mu: int

    def __post_init__(self):
        if not (0 < self.k < self.v):
            raise DsrgError(f"need 0 < k < v, got k={self.k}, v={self.v}")
        if self.t > self.k or self.lam >= self.k or self.mu > self.k:
            raise DsrgError(f"need t <= k, lam < k, mu <= k, got {self}")
        if min(self.v, self.k, self.t, self.lam, self.mu) < 0:
            raise DsrgError(f"parameters must be nonnegative, got {self}")

    def astuple(self):
        return (self.v, self.k, self.t, self.lam, self.mu)

    def __str__(self):
        return f"dsrg({self.v},{self.k},{self.t},{self.lam},{self.mu})"


class AdjacencyMatrix:
    """Loop-free binary digraph matrix with bit-row representation.

    rows[i] holds row i as an integer bitmask (bit j set iff edge i -> j).
    Immutable; column masks are computed once on demand.
    """

    __slots__ = ("v", "rows", "_cols")

    def __init__(self, v, rows):
        self.v = v
        self.rows = tuple(rows)
        if len(self.rows) != v:
            raise DimensionMismatch(f"need {v} rows, got {len(self.rows)}")
        mask = (1 << v) - 1
        for i, r in enumerate(self.rows):
            if r & ~mask:
                raise DimensionMismatch(f"row {i} has bits beyond column {v - 1}")
            if r >> i & 1:
                raise DsrgError(f"loop at vertex {i}")
        self._cols = None

    @classmethod
    def from_dense(cls, matrix):
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"matrix must be square, got {matrix.shape}")
        if not np.isin(matrix, (0, 1)).all():
            raise DsrgError("entries must be 0 or 1")
        v = matrix.shape[0]
        rows = [int(sum(1 << j for j in range(v) if matrix[i, j])) for i in range(v)]
        return cls(v, rows)

    def to_dense(self):
        out = np.zeros((self.v, self.v), dtype=np.int64)
        for i, r in enumerate(self.rows):
            for j in range(self.v):
                out[i, j] = r >> j & 1
        return out

    @property
    def cols(self):
        if self._cols is None:
            cols = [0] * self.v
            for i, r in enumerate(self.rows):
                while r:
                    j = (r & -r).bit_length() - 1
                    cols[j] |= 1 << i
                    r &= r - 1
            self._cols = tuple(cols)
        return self._cols

    def has_edge(self, i, j):
        return bool(self.rows[i] >> j & 1)

    def edges(self):
        for i, r in enumerate(self.rows):
            while r:
                j = (r & -r).bit_length() - 1
                yield (i, j)
                r &= r - 1

    def __eq__(self, other):
        return (isinstance(other, AdjacencyMatrix)
                and self.v == other.v and self.rows == other.rows)

    def __hash__(self):
        return hash((self.v, self.rows))

    def __repr__(self):
        return f"AdjacencyMatrix(v={self.v})"


@dataclass(frozen=True)
class Violation:
    kind: str       # outdegree | indegree | t-count | lambda-count | mu-count
    witness: tuple  # offending vertex or ordered vertex pair
    expected: int
    actual: int


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    violations: tuple = ()
    suppressed: dict = field(default_factory=dict)  # kind -> count beyond cap

    def __bool__(self):
        return self.passed


class _Collector:
    def __init__(self):
        self.by_kind = {}

    def add(self, kind, witness, expected, actual):
        bucket = self.by_kind.setdefault(kind, [])
        bucket.append(Violation(kind, witness, expected, actual))

    def report(self):
        violations = []
        suppressed = {}
        for kind, bucket in self.by_kind.items():
            violations.extend(bucket[:VIOLATION_CAP])
            if len(bucket) > VIOLATION_CAP:
                suppressed[kind] = len(bucket) - VIOLATION_CAP
        return VerificationReport(not violations, tuple(violations), suppressed)


def verify_matrix_equations(a: AdjacencyMatrix, p: DsrgParams) -> VerificationReport:
    """Check A^2 = tI + lam*A + mu*(J - I - A) and AJ = JA = kJ exactly."""
    if a.v != p.v:
        raise DimensionMismatch(f"matrix order {a.v} != v = {p.v}")
    dense = a.to_dense()
    coll = _Collector()

    rowsum = dense.sum(axis=1)
    colsum = dense.sum(axis=0)
    for i in range(p.v):
        if rowsum[i] != p.k:
            coll.add("outdegree", (i,), p.k, int(rowsum[i]))
        if colsum[i] != p.k:
            coll.add("indegree", (i,), p.k, int(colsum[i]))

    sq = dense @ dense
    iv = np.eye(p.v, dtype=np.int64)
    jv = np.ones((p.v, p.v), dtype=np.int64)
    want = p.t * iv + p.lam * dense + p.mu * (jv - iv - dense)
    for i, j in zip(*np.nonzero(sq != want)):
        if i == j:
            coll.add("t-count", (int(i),), int(want[i, j]), int(sq[i, j]))
        elif dense[i, j]:
            coll.add("lambda-count", (int(i), int(j)), int(want[i, j]), int(sq[i, j]))
        else:
            coll.add("mu-count", (int(i), int(j)), int(want[i, j]), int(sq[i, j]))
    return coll.report()


def verify_path_counts(a: AdjacencyMatrix, p: DsrgParams) -> VerificationReport:
    """Check the path-count conditions directly.

    Counts x -> z -> y paths as popcount(out(x) & in(y)); never forms A^2,
    so it is an independent oracle for verify_matrix_equations.
    """
    if a.v != p.v:
        raise DimensionMismatch(f"matrix order {a.v} != v = {p.v}")
    rows, cols = a.rows, a.cols
    coll = _Collector()
    for x in range(p.v):
        out_deg = rows[x].bit_count()
        in_deg = cols[x].bit_count()
        if out_deg != p.k:
            coll.add("outdegree", (x,), p.k, out_deg)
        if in_deg != p.k:
            coll.add("indegree", (x,), p.k, in_deg)
        returns = (rows[x] & cols[x]).bit_count()
        if returns != p.t:
            coll.add("t-count", (x,), p.t, returns)
    for x in range(p.v):
        rx = rows[x]
        for y in range(p.v):
            if x == y:
                continue
            through = (rx & cols[y]).bit_count()
            if rx >> y & 1:
                if through != p.lam:
                    coll.add("lambda-count", (x, y), p.lam, through)
            elif through != p.mu:
                coll.add("mu-count", (x, y), p.mu, through)
    return coll.report()


def enumerate_small_dsrg(p: DsrgParams, limit_v=8):
    """All loop-free binary matrices with row sums k that satisfy the
    path-count conditions, in lexicographic order of their bit rows.

    Naive oracle for tests; guarded to v <= 8.
    """
    if p.v > limit_v:
        raise TooLarge(f"v = {p.v} exceeds enumeration guard {limit_v}")
    v, k = p.v, p.k
    row_choices = []
    for i in range(v):
        others = [j for j in range(v) if j != i]
        choices = []
        for combo in itertools.combinations(others, k):
            choices.append(sum(1 << j for j in combo))
        row_choices.append(sorted(choices))
    found = []
    colsum = [0] * v

    def rec(i, rows):
        if i == v:
            cand = AdjacencyMatrix(v, rows)
            if verify_path_counts(cand, p).passed:
                found.append(cand)
            return
        remaining = v - i - 1  # rows still to be placed after this one
        for r in row_choices[i]:
            ok = True
            for j in range(v):
                c = colsum[j] + (r >> j & 1)
                if c > k or c + remaining < k:
                    ok = False
                    break
            if not ok:
                continue
            for j in range(v):
                colsum[j] += r >> j & 1
            rows.append(r)
            rec(i + 1, rows)
            rows.pop()
            for j in range(v):
                colsum[j] -= r >> j & 1
    rec(0, [])
    return found


def complement(a: AdjacencyMatrix) -> AdjacencyMatrix:
    """J - I - A: edge x -> y iff x != y and no edge in A."""
    mask = (1 << a.v) - 1
    return AdjacencyMatrix(a.v, tuple(
        ~r & mask & ~(1 << i) for i, r in enumerate(a.rows)
    ))


def complement_params(p: DsrgParams) -> DsrgParams:
    """(v, v-k-1, v-2k+t-1, v-2k+mu-2, v-2k+lam)."""
    vals = (p.v, p.v - p.k - 1, p.v - 2 * p.k + p.t - 1,
            p.v - 2 * p.k + p.mu - 2, p.v - 2 * p.k + p.lam)
    if min(vals) < 0:
        raise NegativeParameter(f"complement of {p} has a negative parameter")
    return DsrgParams(*vals)


def reverse(a: AdjacencyMatrix) -> AdjacencyMatrix:
    """Transpose: reverse the direction of every edge."""
    return AdjacencyMatrix(a.v, a.cols)
