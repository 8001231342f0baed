"""Exact arithmetic for circulant matrices and their images in Z[x]/(x^m - 1).

A circulant of order m is determined by its first row; the map sending it
to the polynomial a_0 + a_1 x + ... + a_{m-1} x^{m-1} is a ring
isomorphism onto Z[x]/(x^m - 1).  A block matrix whose m x m blocks are
all circulant can therefore be "compactified" into a smaller matrix of
polynomials, and matrix addition/multiplication commute with
compactification.  All arithmetic here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, DimensionMismatch, ModulusMismatch, NotCirculant


@dataclass(frozen=True)
class CycPoly:
    """Element of Z[x]/(x^m - 1); coeffs[i] is the coefficient of x^i."""

    m: int
    coeffs: tuple

    def __post_init__(self):
        if self.m <= 0:
            raise BadDimension(f"modulus must be positive, got {self.m}")
        if len(self.coeffs) != self.m:
            raise BadDimension(
                f"need exactly {self.m} coefficients, got {len(self.coeffs)}"
            )
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def zero(cls, m):
        return cls(m, (0,) * m)

    @classmethod
    def one(cls, m):
        return cls(m, (1,) + (0,) * (m - 1))

    @classmethod
    def x(cls, m, power=1):
        c = [0] * m
        c[power % m] = 1
        return cls(m, tuple(c))

    def __add__(self, other):
        return poly_add(self, other)

    def __mul__(self, other):
        return poly_mul(self, other)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                xi = "x" if i == 1 else f"x^{i}"
                terms.append(xi if c == 1 else f"{c}{xi}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class CirculantBlock:
    """Circulant of order m given by its first row; row r is the first row
    cyclically shifted r positions to the right."""

    m: int
    first_row: tuple

    def to_matrix(self):
        n = self.m
        out = np.empty((n, n), dtype=np.int64)
        for r in range(n):
            for c in range(n):
                out[r, c] = self.first_row[(c - r) % n]
        return out


@dataclass(frozen=True)
class CompactMatrix:
    """n x n matrix over Z[x]/(x^m - 1): the compactification of a block
    matrix built from m x m circulants."""

    n: int
    m: int
    entries: tuple  # n-tuple of n-tuples of CycPoly

    def __post_init__(self):
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise DimensionMismatch(f"entries must form an {self.n}x{self.n} grid")
        for row in self.entries:
            for p in row:
                if p.m != self.m:
                    raise ModulusMismatch(
                        f"entry modulus {p.m} differs from matrix modulus {self.m}"
                    )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @classmethod
    def from_lists(cls, entries, m=None):
        entries = tuple(tuple(row) for row in entries)
        if m is None:
            m = entries[0][0].m
        return cls(len(entries), m, entries)

    @classmethod
    def identity(cls, n, m):
        one, zero = CycPoly.one(m), CycPoly.zero(m)
        return cls(n, m, tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)
        ))


def poly_from_block(block) -> CycPoly:
    """Polynomial image of a circulant block (coefficients = first row).

    Verifies the circulant structure and raises NotCirculant otherwise.
    """
    block = np.asarray(block)
    if block.ndim != 2 or block.shape[0] != block.shape[1]:
        raise BadDimension(f"block must be square, got shape {block.shape}")
    m = block.shape[0]
    first = block[0]
    for r in range(1, m):
        for c in range(m):
            if block[r, c] != first[(c - r) % m]:
                raise NotCirculant(
                    f"row {r} is not the {r}-fold right shift of row 0"
                )
    return CycPoly(m, tuple(int(v) for v in first))


def block_from_poly(p: CycPoly):
    """Circulant matrix with first row equal to the coefficient vector."""
    return CirculantBlock(p.m, p.coeffs).to_matrix()


def compactify(matrix, m: int) -> CompactMatrix:
    """Replace every m x m block of a square matrix by its polynomial image."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise BadDimension(f"matrix must be square, got shape {matrix.shape}")
    v = matrix.shape[0]
    if v % m != 0:
        raise BadDimension(f"block size {m} does not divide order {v}")
    n = v // m
    rows = []
    for bi in range(n):
        row = []
        for bj in range(n):
            block = matrix[bi * m:(bi + 1) * m, bj * m:(bj + 1) * m]
            try:
                row.append(poly_from_block(block))
            except NotCirculant as exc:
                raise NotCirculant(
                    f"block ({bi}, {bj}) is not circulant", block=(bi, bj)
                ) from exc
        rows.append(tuple(row))
    return CompactMatrix(n, m, tuple(rows))


def expand(cm: CompactMatrix):
    """Inverse of compactify: rebuild the full (n*m) x (n*m) integer matrix."""
    v = cm.n * cm.m
    out = np.empty((v, v), dtype=np.int64)
    for bi in range(cm.n):
        for bj in range(cm.n):
            out[bi * cm.m:(bi + 1) * cm.m, bj * cm.m:(bj + 1) * cm.m] = \
                block_from_poly(cm.entries[bi][bj])
    return out


def poly_add(p: CycPoly, q: CycPoly) -> CycPoly:
    if p.m != q.m:
        raise ModulusMismatch(f"moduli differ: {p.m} vs {q.m}")
    return CycPoly(p.m, tuple(a + b for a, b in zip(p.coeffs, q.coeffs)))


def poly_mul(p: CycPoly, q: CycPoly) -> CycPoly:
    """Convolution with exponents reduced mod m; integer coefficients."""
    if p.m != q.m:
        raise ModulusMismatch(f"moduli differ: {p.m} vs {q.m}")
    m = p.m
    out = [0] * m
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            if b:
                out[(i + j) % m] += a * b
    return CycPoly(m, tuple(out))


def _check_compat(a: CompactMatrix, b: CompactMatrix):
    if a.n != b.n:
        raise DimensionMismatch(f"block dimensions differ: {a.n} vs {b.n}")
    if a.m != b.m:
        raise ModulusMismatch(f"moduli differ: {a.m} vs {b.m}")


def compact_mat_add(a: CompactMatrix, b: CompactMatrix) -> CompactMatrix:
    _check_compat(a, b)
    return CompactMatrix(a.n, a.m, tuple(
        tuple(poly_add(a.entries[i][j], b.entries[i][j]) for j in range(a.n))
        for i in range(a.n)
    ))


def compact_mat_mul(a: CompactMatrix, b: CompactMatrix) -> CompactMatrix:
    """Ordinary matrix product over the quotient ring."""
    _check_compat(a, b)
    n, m = a.n, a.m
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = CycPoly.zero(m)
            for k in range(n):
                acc = poly_add(acc, poly_mul(a.entries[i][k], b.entries[k][j]))
            row.append(acc)
        rows.append(tuple(row))
    return CompactMatrix(n, m, tuple(rows))


def eval_at_one(cm: CompactMatrix):
    """Substitute x = 1: entry (i, j) becomes the coefficient sum."""
    out = np.empty((cm.n, cm.n), dtype=np.int64)
    for i in range(cm.n):
        for j in range(cm.n):
            out[i, j] = sum(cm.entries[i][j].coeffs)
    return out
