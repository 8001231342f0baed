"""Two-stage exhaustive search for bordered circulant-block adjacency
matrices.

Stage 1 enumerates the integer matrices M = C(1) satisfying the quadratic
equation M^2 + (mu-lam)M = (t-mu)I + m*H together with the border sum
constraints, by depth-first search over whole rows with running-sum
propagation and interval bounds on the partial products.

Stage 2 lifts a stage-1 matrix to matrices of 0/1-coefficient polynomials
C(x) with coefficient sums M and zero constant term on the diagonal,
satisfying C(x)^2 + (mu-lam)C(x) = (t-mu)I + (1+x+...+x^(m-1))H in
Z[x]/(x^m - 1), and assembles each into a full adjacency matrix via the
border.

Per-floor cyclic relabelings (rotating the m vertices inside one block
simultaneously in rows and columns) preserve the border, the circulant
block structure and C(1), and act on lifts by rotating block coefficient
masks.  Lifts therefore come in rotation orbits.  Stage 2 emits every
lift by default; pass representatives=True to get one canonical member
(the lexicographically least mask matrix) per orbit.

Both search cores are numba-compiled; the stage-1 driver can partition
the search tree over worker processes by the first two rows, with a
deterministic merge and a line-oriented checkpoint file.
"""

from __future__ import annotations

import itertools
import math
import multiprocessing
import os
from dataclasses import dataclass

import numpy as np
from numba import njit

from .border import BorderPattern, Stage1Constraints, stage1_constraints
from .circulant import CompactMatrix, CycPoly
from .core import AdjacencyMatrix, DsrgParams, verify_matrix_equations, \
    verify_path_counts
from .errors import CheckpointCorrupt, DsrgError, InfeasibleEntry


@dataclass(frozen=True)
class Stage1Solution:
    """An n x n integer matrix suitable as C(1)."""

    entries: tuple  # n-tuple of n-tuples of ints

    @property
    def n(self):
        return len(self.entries)

    def to_numpy(self):
        return np.array(self.entries, dtype=np.int64)

    @classmethod
    def from_numpy(cls, m):
        return cls(tuple(tuple(int(x) for x in row) for row in m))

    def flat(self):
        return tuple(x for row in self.entries for x in row)


@dataclass(frozen=True)
class Stage2Solution:
    """A lifted solution: coefficient masks, the compact matrix C(x), and
    the assembled full adjacency matrix."""

    c1: Stage1Solution
    masks: tuple        # n x n of ints; bit i of the mask = coefficient of x^i
    cx: CompactMatrix
    a: AdjacencyMatrix


@dataclass
class SearchConfig:
    threads: int = 1
    checkpoint: str | None = None
    resume: bool = False
    subtree: tuple | None = None   # prefix of row-major C(1) entries
    limit: int | None = None


# ---------------------------------------------------------------------------
# stage 1


@njit(cache=True)
def _s1_place(m, p, colsum, colsum_in, r, c, inb, n):
    for j in range(n):
        m[r, j] = c[j]
        colsum[j] += c[j]
        if inb[r]:
            colsum_in[j] += c[j]
    for i in range(r):
        w = m[i, r]
        if w != 0:
            for j in range(n):
                p[i, j] += w * c[j]
    for j in range(n):
        s = 0
        for k in range(r + 1):
            s += m[r, k] * m[k, j]
        p[r, j] = s


@njit(cache=True)
def _s1_unplace(m, p, colsum, colsum_in, r, inb, n):
    for i in range(r):
        w = m[i, r]
        if w != 0:
            for j in range(n):
                p[i, j] -= w * m[r, j]
    for j in range(n):
        colsum[j] -= m[r, j]
        if inb[r]:
            colsum_in[j] -= m[r, j]
        m[r, j] = 0
        p[r, j] = 0


@njit(cache=True)
def _s1_col_ok(colsum, colsum_in, c, r, inb, n, col_in, coltot, rem_in, rem_out,
               cap):
    """Running-sum window check for the two column-sum families after row r
    would be placed; rem_in/rem_out count in/out-group rows strictly below."""
    for j in range(n):
        ci = colsum_in[j] + (c[j] if inb[r] else 0)
        ct = colsum[j] + c[j]
        co = ct - ci
        if ci > col_in[j] or ci + cap * rem_in < col_in[j]:
            return False
        out_t = coltot[j] - col_in[j]
        if co > out_t or co + cap * rem_out < out_t:
            return False
    return True


@njit(cache=True)
def _s1_quad_ok(m, p, colsum, r, n, target, coltot, diag_cap, off_cap,
                delta, w, cp):
    """Interval check of the partial products against the quadratic target.

    For each placed row i and column j the future contribution to
    (M^2)[i,j] is sum over unplaced rows k of m[i,k]*m[k,j], where the
    m[k,j] are unknown but sum to the remaining column total and are
    individually capped.  Greedy assignment over the sorted known weights
    gives sharp bounds.
    """
    last = r == n - 1
    for i in range(r + 1):
        for j in range(n):
            tgt = target[i, j] - delta * m[i, j]
            val = p[i, j]
            if last:
                if val != tgt:
                    return False
                continue
            if val > tgt:
                return False
            rem = coltot[j] - colsum[j]
            nf = n - 1 - r
            for q in range(nf):
                k = r + 1 + q
                w[q] = m[i, k]
                cp[q] = diag_cap if k == j else off_cap
            for a in range(1, nf):
                ww = w[a]
                cc = cp[a]
                bq = a - 1
                while bq >= 0 and w[bq] < ww:
                    w[bq + 1] = w[bq]
                    cp[bq + 1] = cp[bq]
                    bq -= 1
                w[bq + 1] = ww
                cp[bq + 1] = cc
            rr = rem
            fmax = 0
            for q in range(nf):
                a = cp[q] if cp[q] < rr else rr
                fmax += w[q] * a
                rr -= a
                if rr == 0:
                    break
            if val + fmax < tgt:
                return False
            rr = rem
            fmin = 0
            for q in range(nf - 1, -1, -1):
                a = cp[q] if cp[q] < rr else rr
                fmin += w[q] * a
                rr -= a
                if rr == 0:
                    break
            if val + fmin > tgt:
                return False
    return True


# the recursive kernels must not use the on-disk cache: numba segfaults
# when a self-recursive function is loaded from cache instead of compiled
@njit
def _s1_rec(r, m, p, colsum, colsum_in, n, cands, ncands, inb, col_in, coltot,
            target, diag_cap, off_cap, delta, rem_in_below, rem_out_below,
            w, cp, out, cnt):
    if r == n:
        if cnt[0] < out.shape[0]:
            k = 0
            for i in range(n):
                for j in range(n):
                    out[cnt[0], k] = m[i, j]
                    k += 1
        cnt[0] += 1
        return
    rem_in = rem_in_below[r]
    rem_out = rem_out_below[r]
    for ci in range(ncands[r]):
        c = cands[r, ci]
        if not _s1_col_ok(colsum, colsum_in, c, r, inb, n, col_in, coltot,
                          rem_in, rem_out, off_cap):
            continue
        _s1_place(m, p, colsum, colsum_in, r, c, inb, n)
        if _s1_quad_ok(m, p, colsum, r, n, target, coltot, diag_cap, off_cap,
                       delta, w, cp):
            _s1_rec(r + 1, m, p, colsum, colsum_in, n, cands, ncands, inb,
                    col_in, coltot, target, diag_cap, off_cap, delta,
                    rem_in_below, rem_out_below, w, cp, out, cnt)
        _s1_unplace(m, p, colsum, colsum_in, r, inb, n)


@njit
def _s1_subtree(c0, c1row, m, p, colsum, colsum_in, n, cands, ncands, inb,
                col_in, coltot, target, diag_cap, off_cap, delta,
                rem_in_below, rem_out_below, w, cp, out, cnt):
    """Explore the subtree with rows 0 and 1 fixed to c0, c1row."""
    if not _s1_col_ok(colsum, colsum_in, c0, 0, inb, n, col_in, coltot,
                      rem_in_below[0], rem_out_below[0], off_cap):
        return
    _s1_place(m, p, colsum, colsum_in, 0, c0, inb, n)
    if _s1_quad_ok(m, p, colsum, 0, n, target, coltot, diag_cap, off_cap,
                   delta, w, cp):
        if _s1_col_ok(colsum, colsum_in, c1row, 1, inb, n, col_in, coltot,
                      rem_in_below[1], rem_out_below[1], off_cap):
            _s1_place(m, p, colsum, colsum_in, 1, c1row, inb, n)
            if _s1_quad_ok(m, p, colsum, 1, n, target, coltot, diag_cap,
                           off_cap, delta, w, cp):
                _s1_rec(2, m, p, colsum, colsum_in, n, cands, ncands, inb,
                        col_in, coltot, target, diag_cap, off_cap, delta,
                        rem_in_below, rem_out_below, w, cp, out, cnt)
            _s1_unplace(m, p, colsum, colsum_in, 1, inb, n)
    _s1_unplace(m, p, colsum, colsum_in, 0, inb, n)


class _Stage1Model:
    """Precomputed constraint model shared by all stage-1 workers."""

    def __init__(self, p: DsrgParams, border: BorderPattern,
                 subtree: tuple | None = None):
        cons = stage1_constraints(p, border)
        self.cons = cons
        self.n = border.n
        self.m = border.m
        n = self.n
        sums = cons.sums
        self.inb = np.array([1 if i in sums.s_b else 0 for i in range(n)],
                            dtype=np.int64)
        self.col_in = np.array(sums.col_in, dtype=np.int64)
        self.coltot = np.array(
            [sums.col_in[j] + sums.col_out[j] for j in range(n)],
            dtype=np.int64)
        self.target = cons.target
        self.diag_cap = cons.diag_bound
        self.off_cap = cons.offdiag_bound
        # rows of each group strictly below row r
        self.rem_in_below = np.array(
            [sum(self.inb[r + 1:]) for r in range(n)], dtype=np.int64)
        self.rem_out_below = np.array(
            [(n - 1 - r) - self.rem_in_below[r] for r in range(n)],
            dtype=np.int64)
        self.row_cands = [self._row_candidates(i, subtree) for i in range(n)]
        maxc = max(len(c) for c in self.row_cands) or 1
        self.cands = np.zeros((n, maxc, n), dtype=np.int64)
        self.ncands = np.zeros(n, dtype=np.int64)
        for i, rc in enumerate(self.row_cands):
            self.ncands[i] = len(rc)
            for q, row in enumerate(rc):
                self.cands[i, q] = row

    def _row_candidates(self, i, subtree):
        """All rows with the right split sums and diagonal bound, in
        lexicographic order, filtered by the subtree prefix."""
        n = self.n
        sums = self.cons.sums
        sd = list(sums.s_d)
        sdc = [j for j in range(n) if j not in sums.s_d]
        t_in, t_out = sums.row_in[i], sums.row_out[i]
        out = []
        for vals_in in itertools.product(range(self.off_cap + 1),
                                         repeat=len(sd)):
            if sum(vals_in) != t_in:
                continue
            for vals_out in itertools.product(range(self.off_cap + 1),
                                              repeat=len(sdc)):
                if sum(vals_out) != t_out:
                    continue
                row = [0] * n
                for v, j in zip(vals_in, sd):
                    row[j] = v
                for v, j in zip(vals_out, sdc):
                    row[j] = v
                if row[i] > self.diag_cap:
                    continue
                out.append(tuple(row))
        out.sort()
        if subtree is not None:
            lo, hi = i * n, (i + 1) * n
            pref = subtree[lo:min(hi, len(subtree))]
            if pref:
                out = [r for r in out if r[:len(pref)] == tuple(pref)]
        return out

    def kernel_args(self):
        n = self.n
        return (np.zeros((n, n), np.int64), np.zeros((n, n), np.int64),
                np.zeros(n, np.int64), np.zeros(n, np.int64), n,
                self.cands, self.ncands, self.inb, self.col_in, self.coltot,
                self.target, self.diag_cap, self.off_cap, self.cons.delta,
                self.rem_in_below, self.rem_out_below,
                np.zeros(n, np.int64), np.zeros(n, np.int64))

    def tasks(self):
        """Feasible (row0, row1) candidate index pairs, in lex order."""
        n = self.n
        out = []
        for i0, c0 in enumerate(self.row_cands[0]):
            for i1, c1row in enumerate(self.row_cands[1]):
                ok = True
                for j in range(n):
                    ci = (c0[j] if self.inb[0] else 0) + \
                         (c1row[j] if self.inb[1] else 0)
                    ct = c0[j] + c1row[j]
                    if ci > self.col_in[j] or ct > self.coltot[j]:
                        ok = False
                        break
                if ok:
                    out.append((i0, i1))
        return out

    def run_task(self, task, cap=8192):
        i0, i1 = task
        c0 = np.array(self.row_cands[0][i0], dtype=np.int64)
        c1row = np.array(self.row_cands[1][i1], dtype=np.int64)
        while True:
            out = np.zeros((cap, self.n * self.n), dtype=np.int64)
            cnt = np.zeros(1, dtype=np.int64)
            _s1_subtree(c0, c1row, *self.kernel_args(), out, cnt)
            if cnt[0] <= cap:
                return out[:cnt[0]]
            cap = int(cnt[0]) + 1

    def prefix_line(self, task):
        i0, i1 = task
        vals = list(self.row_cands[0][i0]) + list(self.row_cands[1][i1])
        return ",".join(str(v) for v in vals)


_WORKER_MODEL = None


def _pool_init(p, border, subtree):
    global _WORKER_MODEL
    _WORKER_MODEL = _Stage1Model(p, border, subtree)


def _pool_task(task):
    return task, _WORKER_MODEL.run_task(task)


def _load_checkpoint(path, width):
    done = set()
    if not path or not os.path.exists(path):
        return done
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                vals = tuple(int(x) for x in line.split(","))
            except ValueError as exc:
                raise CheckpointCorrupt(
                    f"{path}:{lineno}: unparsable prefix line") from exc
            if len(vals) != width:
                raise CheckpointCorrupt(
                    f"{path}:{lineno}: expected {width} entries, "
                    f"got {len(vals)}")
            done.add(vals)
    return done


def stage1_enumerate(p: DsrgParams, border: BorderPattern,
                     cfg: SearchConfig | None = None):
    """Yield every Stage1Solution in lexicographic row-major order.

    The output sequence is identical for any thread count; parallelism
    partitions the tree on the first two rows and merges in task order.
    """
    cfg = cfg or SearchConfig()
    model = _Stage1Model(p, border, cfg.subtree)
    tasks = model.tasks()
    done = set()
    if cfg.checkpoint and cfg.resume:
        done = _load_checkpoint(cfg.checkpoint, 2 * model.n)
    pending = [t for t in tasks
               if tuple(model.row_cands[0][t[0]] + model.row_cands[1][t[1]])
               not in done]
    ckpt = open(cfg.checkpoint, "a") if cfg.checkpoint else None
    emitted = 0
    try:
        if cfg.threads <= 1:
            stream = ((t, model.run_task(t)) for t in pending)
            for task, sols in stream:
                for row in sols:
                    yield Stage1Solution.from_numpy(row.reshape(model.n,
                                                                model.n))
                    emitted += 1
                    if cfg.limit is not None and emitted >= cfg.limit:
                        return
                if ckpt:
                    ckpt.write(model.prefix_line(task) + "\n")
                    ckpt.flush()
        else:
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(cfg.threads, initializer=_pool_init,
                          initargs=(p, border, cfg.subtree)) as pool:
                for task, sols in pool.imap(_pool_task, pending,
                                            chunksize=64):
                    for row in sols:
                        yield Stage1Solution.from_numpy(
                            row.reshape(model.n, model.n))
                        emitted += 1
                        if cfg.limit is not None and emitted >= cfg.limit:
                            return
                    if ckpt:
                        ckpt.write(model.prefix_line(task) + "\n")
                        ckpt.flush()
    finally:
        if ckpt:
            ckpt.close()


# ---------------------------------------------------------------------------
# stage 2


@njit(cache=True)
def _uf_find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


@njit(cache=True)
def _s2_check_prod(i, j, cm, placed, m1, tt, conv, delta):
    """Window check for entry (i, j) of C(x)^2 + delta*C(x) against the
    target, given the currently placed blocks."""
    m = tt.shape[2]
    q = np.zeros(m, np.int64)
    srem = 0
    urem = 0
    n = m1.shape[0]
    for k in range(n):
        if placed[i, k] and placed[k, j]:
            for t in range(m):
                q[t] += conv[cm[i, k], cm[k, j], t]
        else:
            srem += m1[i, k] * m1[k, j]
            urem += min(m1[i, k], m1[k, j])
    for t in range(m):
        g = tt[i, j, t]
        if placed[i, j]:
            g -= delta * ((cm[i, j] >> t) & 1)
        if q[t] > g:
            return False
        if placed[i, j]:
            if q[t] + srem < g:
                return False
            if urem < g - q[t]:
                return False
    return True


# no cache=True: see the note above _s1_rec
@njit
def _s2_rec(depth, cm, placed, parent, m1, tt, conv, delta, order, cand,
            ncand, pincand, pin_enabled, out, cnt):
    n = m1.shape[0]
    if depth == order.shape[0]:
        if cnt[0] < out.shape[0]:
            k = 0
            for i in range(n):
                for j in range(n):
                    out[cnt[0], k] = cm[i, j]
                    k += 1
        cnt[0] += 1
        return
    a = order[depth, 0]
    b = order[depth, 1]
    isdiag = 1 if a == b else 0
    c = m1[a, b]
    # gauge pinning: if this block links two floors whose relative phase is
    # still free and every candidate mask has a full-size rotation class,
    # restrict to the canonical rotation and merge the phase classes.
    pin = False
    ra = 0
    rb = 0
    if pin_enabled and not isdiag and pincand[c] >= 0:
        ra = _uf_find(parent, a)
        rb = _uf_find(parent, b)
        if ra != rb:
            pin = True
    if pin:
        cm[a, b] = pincand[c]
        placed[a, b] = True
        parent[rb] = ra
        ok = True
        for j in range(n):
            if not _s2_check_prod(a, j, cm, placed, m1, tt, conv, delta):
                ok = False
                break
        if ok:
            for i in range(n):
                if i != a and not _s2_check_prod(i, b, cm, placed, m1, tt,
                                                 conv, delta):
                    ok = False
                    break
        if ok:
            _s2_rec(depth + 1, cm, placed, parent, m1, tt, conv, delta,
                    order, cand, ncand, pincand, pin_enabled, out, cnt)
        parent[rb] = rb
        placed[a, b] = False
        cm[a, b] = 0
        return
    for qi in range(ncand[isdiag, c]):
        cm[a, b] = cand[isdiag, c, qi]
        placed[a, b] = True
        ok = True
        for j in range(n):
            if not _s2_check_prod(a, j, cm, placed, m1, tt, conv, delta):
                ok = False
                break
        if ok:
            for i in range(n):
                if i != a and not _s2_check_prod(i, b, cm, placed, m1, tt,
                                                 conv, delta):
                    ok = False
                    break
        if ok:
            _s2_rec(depth + 1, cm, placed, parent, m1, tt, conv, delta,
                    order, cand, ncand, pincand, pin_enabled, out, cnt)
        placed[a, b] = False
    cm[a, b] = 0


class _Stage2Model:
    """Tables for the lift search, built once per (params, border)."""

    def __init__(self, p: DsrgParams, border: BorderPattern):
        from .border import h_compact
        self.p = p
        self.border = border
        self.n = border.n
        self.m = border.m
        n, m = self.n, self.m
        h = h_compact(p, border)
        self.delta = p.mu - p.lam
        tt = np.zeros((n, n, m), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                for t in range(m):
                    tt[i, j, t] = h[i, j]
            tt[i, i, 0] += p.t - p.mu
        self.tt = tt
        masks = [[] for _ in range(m + 1)]
        dmasks = [[] for _ in range(m + 1)]
        for mask in range(1 << m):
            c = bin(mask).count("1")
            masks[c].append(mask)
            if not mask & 1:
                dmasks[c].append(mask)
        maxc = max(len(x) for x in masks)
        self.cand = np.full((2, m + 1, maxc), -1, dtype=np.int64)
        self.ncand = np.zeros((2, m + 1), dtype=np.int64)
        for c in range(m + 1):
            for q, mk in enumerate(masks[c]):
                self.cand[0, c, q] = mk
            self.ncand[0, c] = len(masks[c])
            for q, mk in enumerate(dmasks[c]):
                self.cand[1, c, q] = mk
            self.ncand[1, c] = len(dmasks[c])
        conv = np.zeros((1 << m, 1 << m, m), dtype=np.int64)
        for m1 in range(1 << m):
            for m2 in range(1 << m):
                for u in range(m):
                    if not m1 >> u & 1:
                        continue
                    for w in range(m):
                        if m2 >> w & 1:
                            conv[m1, m2, (u + w) % m] += 1
        self.conv = conv
        order = []
        for r in range(n):
            for j in range(r, n):
                order.append((r, j))
            for i in range(r + 1, n):
                order.append((i, r))
        self.order = np.array(order, dtype=np.int64)
        # popcounts whose rotation class is full-size (phase-pinning safe):
        # the canonical (minimal) rotation, or -1 when unusable
        pincand = np.full(m + 1, -1, dtype=np.int64)
        for c in range(m + 1):
            if not masks[c]:
                continue
            classes = {}
            for mk in masks[c]:
                rots = [_rotate_mask(mk, r, m) for r in range(m)]
                classes.setdefault(min(rots), set()).update(rots)
            if all(len(cl) == m for cl in classes.values()) \
                    and len(classes) == 1:
                pincand[c] = min(masks[c])
        self.pincand = pincand
        self.pin_enabled = True

    def run(self, c1: Stage1Solution, cap=4096):
        m1 = c1.to_numpy()
        if m1.max() > self.m:
            raise InfeasibleEntry(
                f"entry {int(m1.max())} exceeds block size {self.m}")
        n = self.n
        while True:
            out = np.zeros((cap, n * n), dtype=np.int64)
            cnt = np.zeros(1, dtype=np.int64)
            _s2_rec(0, np.zeros((n, n), np.int64),
                    np.zeros((n, n), np.bool_),
                    np.arange(n, dtype=np.int64), m1, self.tt, self.conv,
                    self.delta, self.order, self.cand, self.ncand,
                    self.pincand, self.pin_enabled, out, cnt)
            if cnt[0] <= cap:
                return out[:cnt[0]]
            cap = int(cnt[0]) + 1


def _rotate_mask(mask, r, m):
    r %= m
    full = (1 << m) - 1
    return ((mask << r) | (mask >> (m - r))) & full


def phase_transforms(masks, m):
    """All images of an n x n mask matrix under per-floor cyclic
    relabelings; block (i, j) rotates by p[j] - p[i]."""
    n = len(masks)
    for p in itertools.product(range(m), repeat=n):
        yield tuple(
            tuple(_rotate_mask(masks[i][j], (p[j] - p[i]) % m, m)
                  for j in range(n))
            for i in range(n)
        )


def canonical_masks(masks, m):
    """Lexicographically least mask matrix in the rotation orbit."""
    return min(phase_transforms(masks, m))


def assemble(masks, p: DsrgParams, border: BorderPattern) -> AdjacencyMatrix:
    """Build the full v x v adjacency matrix from block masks and border."""
    n, m = border.n, border.m
    v = p.v
    dense = np.zeros((v, v), dtype=np.int64)
    dense[0, 1:] = border.b
    dense[1:, 0] = border.d
    for bi in range(n):
        for bj in range(n):
            mk = masks[bi][bj]
            for r in range(m):
                for c in range(m):
                    dense[1 + bi * m + r, 1 + bj * m + c] = \
                        mk >> ((c - r) % m) & 1
    return AdjacencyMatrix.from_dense(dense)


def masks_to_compact(masks, m) -> CompactMatrix:
    return CompactMatrix.from_lists(
        [[CycPoly(m, tuple(mk >> t & 1 for t in range(m))) for mk in row]
         for row in masks], m)


_S2_MODELS = {}


def _stage2_model(p, border):
    key = (p, border)
    if key not in _S2_MODELS:
        _S2_MODELS[key] = _Stage2Model(p, border)
    return _S2_MODELS[key]


def lift_masks(c1: Stage1Solution, p: DsrgParams, border: BorderPattern,
               representatives=False):
    """All block mask matrices lifting c1 to a congruence solution.

    Returned in lexicographic row-major order, which is exactly the
    emission order of a depth-first search over blocks in row-major order
    with coefficient masks tried in increasing binary value.  With
    representatives=True only the lexicographically least member of each
    per-floor-rotation orbit is returned.

    The search core explores a gauge slice (relative floor phases pinned
    along a spanning forest of complete-support blocks) and recovers the
    full solution set as the union of rotation orbits; the congruence is
    invariant under floor rotations, so this is an exact reconstruction.
    """
    model = _stage2_model(p, border)
    found = model.run(c1)
    n, m = model.n, model.m
    mask_mats = {tuple(tuple(int(x) for x in row.reshape(n, n)[i])
                       for i in range(n)) for row in found}
    if representatives:
        return sorted({canonical_masks(mm, m) for mm in mask_mats})
    full = set()
    for mm in mask_mats:
        full.update(phase_transforms(mm, m))
    return sorted(full)


def stage2_lift(c1: Stage1Solution, p: DsrgParams, border: BorderPattern,
                cfg: SearchConfig | None = None, representatives=False,
                verify="reps"):
    """Lift a stage-1 solution to full adjacency matrices.

    Yields every Stage2Solution whose cx satisfies the polynomial
    congruence, in deterministic order: blocks row-major, coefficient
    masks in increasing binary value (equivalently, lexicographic order
    of the row-major mask sequence).  With representatives=True only one
    canonical member per floor-rotation orbit is yielded.

    verify selects the re-verification postcondition: "reps" (default)
    runs both dsrg-core verifiers on each orbit's canonical
    representative — the remaining orbit members are conjugates by a
    vertex permutation, so they satisfy the same equations; "all" checks
    every yielded matrix; "none" skips the check.
    """
    cfg = cfg or SearchConfig()
    m = border.m
    chosen = lift_masks(c1, p, border, representatives=representatives)
    checked = set()
    emitted = 0
    for mm in chosen:
        if cfg.limit is not None and emitted >= cfg.limit:
            return
        a = assemble(mm, p, border)
        if verify == "all":
            _check_lift(a, p)
        elif verify == "reps":
            rep = mm if representatives else canonical_masks(mm, m)
            if rep not in checked:
                checked.add(rep)
                _check_lift(assemble(rep, p, border) if rep != mm else a, p)
        yield Stage2Solution(c1=c1, masks=mm,
                             cx=masks_to_compact(mm, m), a=a)
        emitted += 1


def _check_lift(a: AdjacencyMatrix, p: DsrgParams):
    if not verify_matrix_equations(a, p).passed:
        raise DsrgError("lifted matrix fails the matrix equations")
    if not verify_path_counts(a, p).passed:
        raise DsrgError("lifted matrix fails path counting")


def branch_count(c1: Stage1Solution, m: int) -> int:
    """Size of the raw lift space before congruence pruning: product over
    blocks of binomial(m, entry), with binomial(m-1, entry) on the
    diagonal."""
    total = 1
    for i, row in enumerate(c1.entries):
        for j, e in enumerate(row):
            total *= math.comb(m - 1 if i == j else m, e)
    return total
