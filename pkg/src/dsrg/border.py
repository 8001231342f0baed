"""Fixed first row/column of the target adjacency matrix and the derived
constraint model for the compactified search.

Writing the adjacency matrix as [[0, B], [D, C]] with C built from m x m
circulant blocks, the defining equations collapse to

    C^2 + (mu - lam) C = (t - mu) I + H,      H = mu*J - D.B (outer product)

together with four families of linear sum constraints on C coming from
B C + (mu - lam) B = mu * J and C D + (mu - lam) D = mu * J plus degree
regularity.  Because B and D are constant on each block of m consecutive
positions, everything descends to the compactified matrix M = C(1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DsrgParams
from .errors import DsrgError, IndivisibleParameters


@dataclass(frozen=True)
class BorderPattern:
    """First row B and first column D of the bordered matrix (corner removed).

    Both are 0/1 tuples of length v - 1, constant on each block of m
    consecutive positions so the Z_m block symmetry survives.
    """

    v: int
    m: int
    b: tuple
    d: tuple

    def __post_init__(self):
        n = self.v - 1
        if len(self.b) != n or len(self.d) != n:
            raise DsrgError(f"border vectors must have length {n}")
        for name, vec in (("B", self.b), ("D", self.d)):
            if any(x not in (0, 1) for x in vec):
                raise DsrgError(f"{name} must be a 0/1 vector")
            for blk in range(n // self.m):
                seg = vec[blk * self.m:(blk + 1) * self.m]
                if len(set(seg)) != 1:
                    raise DsrgError(
                        f"{name} is not constant on block {blk}; the border "
                        f"must respect the {self.m}-blocks"
                    )

    @property
    def n(self):
        """Number of blocks per side of the compactified matrix."""
        return (self.v - 1) // self.m

    def block_bits(self):
        """(b_blocks, d_blocks): the per-block border bits."""
        bb = tuple(self.b[i * self.m] for i in range(self.n))
        db = tuple(self.d[i * self.m] for i in range(self.n))
        return bb, db

    def validate(self, p: DsrgParams):
        if self.v != p.v:
            raise DsrgError(f"border is for v={self.v}, params have v={p.v}")
        if sum(self.b) != p.k or sum(self.d) != p.k:
            raise DsrgError(
                f"border popcounts ({sum(self.b)}, {sum(self.d)}) != k = {p.k}"
            )
        dot = sum(x * y for x, y in zip(self.b, self.d))
        if dot != p.t:
            raise DsrgError(f"B.D = {dot} != t = {p.t}")


@dataclass(frozen=True)
class SumConstraints:
    """The four families of block-sum constraints on M = C(1).

    Column family: sum of M[I, J] over I in s_b equals col_in[J]; over the
    complement of s_b equals col_out[J].  Row family likewise with s_d and
    row_in/row_out.
    """

    s_b: tuple
    col_in: tuple
    col_out: tuple
    s_d: tuple
    row_in: tuple
    row_out: tuple

    def check(self, matrix) -> bool:
        matrix = np.asarray(matrix)
        n = matrix.shape[0]
        sb = list(self.s_b)
        sbc = [i for i in range(n) if i not in self.s_b]
        sd = list(self.s_d)
        sdc = [j for j in range(n) if j not in self.s_d]
        return (
            all(matrix[sb, j].sum() == self.col_in[j] for j in range(n))
            and all(matrix[sbc, j].sum() == self.col_out[j] for j in range(n))
            and all(matrix[i, sd].sum() == self.row_in[i] for i in range(n))
            and all(matrix[i, sdc].sum() == self.row_out[i] for i in range(n))
        )


def default_border(p: DsrgParams, m: int = 3) -> BorderPattern:
    """The canonical border: B = 1^k 0^(v-1-k); D places its t ones on the
    first blocks under B and its remaining k - t ones on the first blocks
    after B.
    """
    if (p.v - 1) % m or p.k % m or p.t % m:
        raise IndivisibleParameters(
            f"block size {m} must divide v-1={p.v - 1}, k={p.k}, t={p.t}"
        )
    if (p.k - p.t) > (p.v - 1 - p.k):
        raise IndivisibleParameters(
            f"no room for the {p.k - p.t} D-ones outside the support of B"
        )
    n = p.v - 1
    b = tuple(1 if i < p.k else 0 for i in range(n))
    d = [0] * n
    for i in range(p.t):
        d[i] = 1
    for i in range(p.k, p.k + (p.k - p.t)):
        d[i] = 1
    return BorderPattern(p.v, m, b, tuple(d))


def h_compact(p: DsrgParams, border: BorderPattern):
    """n x n integer matrix H with H[I, J] = mu - d_I * b_J.

    Expanding each entry h to an m x m block h*J_m reproduces
    mu * J_{v-1} - D.B.  Works for any floor-respecting border; the
    degree identities are only enforced where they are used
    (sum_constraints).
    """
    bb, db = border.block_bits()
    n = border.n
    return np.array(
        [[p.mu - db[i] * bb[j] for j in range(n)] for i in range(n)],
        dtype=np.int64,
    )


def sum_constraints(p: DsrgParams, border: BorderPattern) -> SumConstraints:
    """Block-sum constraint families implied by the border.

    Per scalar column j in block J:  sum_{i in supp B} C[i, j] =
    mu - (mu - lam) * b_j, and the full column sums to k - b_j; rows
    likewise with D.  Every row and column of a circulant sums to the
    coefficient sum, so the scalar constraints collapse block-wise.
    """
    border.validate(p)
    bb, db = border.block_bits()
    n = border.n
    delta = p.mu - p.lam
    s_b = tuple(i for i in range(n) if bb[i])
    s_d = tuple(j for j in range(n) if db[j])
    col_in = tuple(p.mu - delta * bb[j] for j in range(n))
    col_out = tuple(p.k - bb[j] - col_in[j] for j in range(n))
    row_in = tuple(p.mu - delta * db[i] for i in range(n))
    row_out = tuple(p.k - db[i] - row_in[i] for i in range(n))
    return SumConstraints(s_b, col_in, col_out, s_d, row_in, row_out)


@dataclass(frozen=True)
class Stage1Constraints:
    """Everything stage 1 needs: the quadratic target for
    M^2 + (mu - lam) M, entry bounds, and the four sum families."""

    target: np.ndarray          # (t - mu) I + m * H
    delta: int                  # mu - lam
    offdiag_bound: int          # entries in [0, m]
    diag_bound: int             # diagonal entries in [0, m - 1]
    sums: SumConstraints

    def holds(self, matrix) -> bool:
        matrix = np.asarray(matrix, dtype=np.int64)
        n = matrix.shape[0]
        if not np.array_equal(matrix @ matrix + self.delta * matrix, self.target):
            return False
        for i in range(n):
            for j in range(n):
                bound = self.diag_bound if i == j else self.offdiag_bound
                if not 0 <= matrix[i, j] <= bound:
                    return False
        return self.sums.check(matrix)


def stage1_constraints(p: DsrgParams, border: BorderPattern) -> Stage1Constraints:
    h = h_compact(p, border)
    n = border.n
    target = (p.t - p.mu) * np.eye(n, dtype=np.int64) + border.m * h
    return Stage1Constraints(
        target=target,
        delta=p.mu - p.lam,
        offdiag_bound=border.m,
        diag_bound=border.m - 1,
        sums=sum_constraints(p, border),
    )
