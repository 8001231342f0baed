"""Skeleton/rigging decomposition of digraphs with a Z_3 automorphism.

A digraph on 3n + 1 vertices with an order-3 automorphism fixing one
vertex (the special vertex) and rotating n vertex triples (the floors)
is determined by shift-invariant data: the intra-floor edge pattern of
each floor (one of four legal colors), the complete transitions between
node pairs (the skeleton), and the partial transitions labeled by their
shift sets (the rigging).  A canonical byte encoding of this data,
minimized over floor permutations, per-floor phase rotations and the
global orientation flip, serves as an isomorphism certificate for
digraphs whose automorphism group is exactly Z_3.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .core import AdjacencyMatrix
from .errors import DsrgError, IllegalFloorInterior, NoZ3Structure, \
    NotShiftInvariant

SPECIAL_NODE = 7        # skeleton node id of the special vertex (floors: 0-6)
CERT_VERSION = 1


class FloorColor(enum.Enum):
    """Intra-floor edge pattern of a floor (a0, a1, a2).

    ForwardCycle is the 3-cycle a0 -> a1 -> a2 -> a0 (shift 1),
    BackwardCycle its reverse (shift 2), Double is both.
    """

    EMPTY = 0
    FORWARD_CYCLE = 1
    BACKWARD_CYCLE = 2
    DOUBLE = 3


_FLIP_COLOR = {
    FloorColor.EMPTY: FloorColor.EMPTY,
    FloorColor.FORWARD_CYCLE: FloorColor.BACKWARD_CYCLE,
    FloorColor.BACKWARD_CYCLE: FloorColor.FORWARD_CYCLE,
    FloorColor.DOUBLE: FloorColor.DOUBLE,
}

_SHIFTS_TO_COLOR = {
    frozenset(): FloorColor.EMPTY,
    frozenset({1}): FloorColor.FORWARD_CYCLE,
    frozenset({2}): FloorColor.BACKWARD_CYCLE,
    frozenset({1, 2}): FloorColor.DOUBLE,
}


@dataclass(frozen=True)
class FloorStructure:
    """The orbit partition of an order-3 automorphism with one fixed point.

    special is the fixed vertex; floors are ordered triples (a0, a1, a2)
    meaning the automorphism maps a0 -> a1 -> a2 -> a0.  Vertex ids are
    0-based.
    """

    special: int
    floors: tuple  # tuple of 3-tuples of vertex ids

    def permutation(self):
        """The generating automorphism as an image tuple."""
        v = 1 + 3 * len(self.floors)
        perm = [None] * v
        perm[self.special] = self.special
        for (a0, a1, a2) in self.floors:
            perm[a0], perm[a1], perm[a2] = a1, a2, a0
        return tuple(perm)

    def is_automorphism_of(self, a: AdjacencyMatrix) -> bool:
        perm = self.permutation()
        return all(a.has_edge(perm[i], perm[j]) == a.has_edge(i, j)
                   for i in range(a.v) for j in range(a.v))


@dataclass(frozen=True)
class SkeletonRigging:
    """Shift-invariant description of a digraph with Z_3 structure.

    Skeleton nodes are floor indices 0..6 plus SPECIAL_NODE for the
    special vertex; skeleton edges are complete transitions.  Rigging
    edges are ordered floor pairs labeled with a nonempty proper subset
    of {0, 1, 2}: shift s in the label of F -> G means edges from the
    i-th vertex of F to the (i+s)-th vertex of G for all i.
    """

    structure: FloorStructure
    colors: tuple            # 7 FloorColors
    skeleton: frozenset      # ordered pairs over 8 nodes
    rigging: tuple           # sorted ((f, g), frozenset of shifts) pairs

    def rigging_dict(self):
        return dict(self.rigging)


def construction_floor_structure(v: int) -> FloorStructure:
    """Special vertex 0, floors = consecutive triples (1,2,3), (4,5,6), ..."""
    if v % 3 != 1:
        raise NoZ3Structure(f"order {v} is not 3n + 1")
    n = (v - 1) // 3
    return FloorStructure(0, tuple(
        (1 + 3 * k, 2 + 3 * k, 3 + 3 * k) for k in range(n)))


def find_floor_structure(a: AdjacencyMatrix) -> FloorStructure:
    """Orbit partition of the lexicographically least order-3 automorphism
    of A with exactly one fixed point.

    Matrices produced by the search carry the construction-order floors
    (special vertex 0, consecutive triples), which are checked first;
    for arbitrary input a backtracking search over image tuples is run in
    lexicographic order.  Raises NoZ3Structure when no such automorphism
    exists.
    """
    if a.v % 3 != 1:
        raise NoZ3Structure(f"order {a.v} is not 3n + 1")
    fs = construction_floor_structure(a.v)
    if fs.is_automorphism_of(a):
        return fs
    perm = _least_z3_automorphism(a)
    if perm is None:
        raise NoZ3Structure(
            "no order-3 automorphism with a single fixed point")
    return _orbits_to_structure(perm)


def _orbits_to_structure(perm) -> FloorStructure:
    v = len(perm)
    seen = [False] * v
    special = None
    floors = []
    for i in range(v):
        if seen[i]:
            continue
        if perm[i] == i:
            special = i
            seen[i] = True
        else:
            cyc = (i, perm[i], perm[perm[i]])
            for x in cyc:
                seen[x] = True
            floors.append(cyc)
    return FloorStructure(special, tuple(floors))


def _least_z3_automorphism(a: AdjacencyMatrix):
    """First image tuple, in lexicographic order, of an automorphism of A
    consisting of one fixed point and (v-1)/3 three-cycles.

    Positions are filled in increasing order with increasing candidate
    values, so the first complete assignment is the lexicographically
    least.  Assigning p(i) = j closes the cycle p(p(j)) = i by force when
    p(j) is already set, keeping every cycle of length 1 or 3.
    """
    v = a.v
    dense = a.to_dense()
    perm = [-1] * v
    inv = [-1] * v

    def consistent(i, j):
        # all edges between i and previously assigned vertices must map
        for x in range(v):
            px = perm[x]
            if px < 0:
                continue
            if dense[i, x] != dense[j, px] or dense[x, i] != dense[px, j]:
                return False
        return True

    def cycle_ok(i):
        """The chain through i must be a closed 1- or 3-cycle, or an open
        chain of at most 2 edges (still completable to a 3-cycle)."""
        fwd = 0
        x = i
        while perm[x] >= 0 and fwd < 4:
            x = perm[x]
            fwd += 1
            if x == i:
                return fwd in (1, 3)
        back = 0
        x = i
        while inv[x] >= 0 and back < 4:
            x = inv[x]
            back += 1
        return fwd + back <= 2

    def rec(fixed_used):
        i = next((x for x in range(v) if perm[x] < 0), None)
        if i is None:
            return True
        for j in range(v):
            if (j == i and fixed_used) or inv[j] >= 0:
                continue
            if not consistent(i, j):
                continue
            perm[i] = j
            inv[j] = i
            if cycle_ok(i) and rec(fixed_used or j == i):
                return True
            perm[i] = -1
            inv[j] = -1
        return False

    if rec(False):
        return tuple(perm)
    return None


def _floor_index(fs: FloorStructure):
    """vertex -> (floor, position); the special vertex maps to (None, None)."""
    where = {fs.special: (None, None)}
    for f, triple in enumerate(fs.floors):
        for pos, vtx in enumerate(triple):
            where[vtx] = (f, pos)
    return where


def extract_skeleton_rigging(a: AdjacencyMatrix,
                             fs: FloorStructure) -> SkeletonRigging:
    """Decompose A into floor colors, skeleton and rigging.

    Raises IllegalFloorInterior when a floor's internal edges are not one
    of the four legal patterns and NotShiftInvariant when some transition
    is not a union of shift classes.
    """
    if sorted([fs.special] + [x for t in fs.floors for x in t]) \
            != list(range(a.v)):
        raise DsrgError("floor structure does not partition the vertex set")
    n = len(fs.floors)
    colors = []
    for f, (a0, a1, a2) in enumerate(fs.floors):
        shifts = set()
        tri = (a0, a1, a2)
        for s in (1, 2):
            present = [a.has_edge(tri[i], tri[(i + s) % 3]) for i in range(3)]
            if all(present):
                shifts.add(s)
            elif any(present):
                raise IllegalFloorInterior(
                    f"floor {f} has a partial shift-{s} cycle")
        # a full shift-0 class would be loops, which AdjacencyMatrix forbids
        colors.append(_SHIFTS_TO_COLOR[frozenset(shifts)])
    skeleton = set()
    rigging = []
    for f, g in itertools.permutations(range(n), 2):
        tf, tg = fs.floors[f], fs.floors[g]
        shifts = set()
        for s in range(3):
            present = [a.has_edge(tf[i], tg[(i + s) % 3]) for i in range(3)]
            if all(present):
                shifts.add(s)
            elif any(present):
                raise NotShiftInvariant(
                    f"transition {f} -> {g} breaks shift class {s}")
        if len(shifts) == 3:
            skeleton.add((f, g))
        elif shifts:
            rigging.append(((f, g), frozenset(shifts)))
    for f in range(n):
        tri = fs.floors[f]
        out = [a.has_edge(fs.special, x) for x in tri]
        if all(out):
            skeleton.add((SPECIAL_NODE, f))
        elif any(out):
            raise NotShiftInvariant(
                f"special -> floor {f} is a partial transition")
        inc = [a.has_edge(x, fs.special) for x in tri]
        if all(inc):
            skeleton.add((f, SPECIAL_NODE))
        elif any(inc):
            raise NotShiftInvariant(
                f"floor {f} -> special is a partial transition")
    return SkeletonRigging(fs, tuple(colors), frozenset(skeleton),
                           tuple(sorted(rigging)))


def expand_skeleton_rigging(sr: SkeletonRigging) -> AdjacencyMatrix:
    """Rebuild the adjacency matrix; inverse of extract_skeleton_rigging."""
    fs = sr.structure
    n = len(fs.floors)
    v = 1 + 3 * n
    dense = np.zeros((v, v), dtype=np.int64)
    color_shifts = {v: k for k, v in _SHIFTS_TO_COLOR.items()}
    for f, tri in enumerate(fs.floors):
        for s in color_shifts[sr.colors[f]]:
            for i in range(3):
                dense[tri[i], tri[(i + s) % 3]] = 1
    for (u, w) in sr.skeleton:
        if u == SPECIAL_NODE:
            for x in fs.floors[w]:
                dense[fs.special, x] = 1
        elif w == SPECIAL_NODE:
            for x in fs.floors[u]:
                dense[x, fs.special] = 1
        else:
            for x in fs.floors[u]:
                for y in fs.floors[w]:
                    dense[x, y] = 1
    for (f, g), shifts in sr.rigging:
        tf, tg = fs.floors[f], fs.floors[g]
        for s in shifts:
            for i in range(3):
                dense[tf[i], tg[(i + s) % 3]] = 1
    return AdjacencyMatrix.from_dense(dense)


# ---------------------------------------------------------------------------
# canonical certificate


def _color_codes(sr: SkeletonRigging, flip: bool):
    if flip:
        return [_FLIP_COLOR[c].value for c in sr.colors]
    return [c.value for c in sr.colors]


def _shift_masks(sr: SkeletonRigging, flip: bool):
    """7 x 7 matrix of 3-bit shift masks (rigging edges only)."""
    n = len(sr.structure.floors)
    masks = np.zeros((n, n), dtype=np.int64)
    for (f, g), shifts in sr.rigging:
        m = 0
        for s in shifts:
            m |= 1 << ((-s) % 3 if flip else s)
        masks[f, g] = m
    return masks


def _skeleton_matrix(sr: SkeletonRigging):
    adj = np.zeros((8, 8), dtype=np.int64)
    for (u, w) in sr.skeleton:
        adj[u, w] = 1
    return adj


def _refine_floor_classes(key0, skel, masks, n):
    """Iterated neighborhood refinement of floors under an initial key.

    Uses only relabeling-invariant data (phase-independent: the popcount
    of a shift mask survives phase rotation).  Returns a list of keys.
    """
    keys = list(key0)
    for _ in range(n):
        new = []
        for f in range(n):
            prof = sorted(
                (keys[g], int(skel[f, g]), int(skel[g, f]),
                 bin(int(masks[f, g])).count("1"),
                 bin(int(masks[g, f])).count("1"))
                for g in range(n) if g != f)
            new.append((keys[f], tuple(prof)))
        ranks = {k: i for i, k in enumerate(sorted(set(new)))}
        nxt = [ranks[k] for k in new]
        stable = len(set(nxt)) == len(set(keys))
        keys = nxt
        if stable:
            break
    return keys


def _candidate_perms(keys):
    """Permutations (new position -> old floor) that list floors in
    non-decreasing refinement-key order; only floors with equal keys may
    be interchanged."""
    n = len(keys)
    groups = {}
    for f in range(n):
        groups.setdefault(keys[f], []).append(f)
    ordered_groups = [groups[k] for k in sorted(groups)]
    pools = [itertools.permutations(g) for g in ordered_groups]
    for combo in itertools.product(*pools):
        yield tuple(x for g in combo for x in g)


_PHASES_CACHE = {}


def _all_phases(n):
    """(3^n, n) array of phase vectors and the rotation table."""
    if n not in _PHASES_CACHE:
        phases = np.array(list(itertools.product(range(3), repeat=n)),
                          dtype=np.int64)
        rot = np.zeros((8, 3), dtype=np.int64)
        for m in range(8):
            for r in range(3):
                x = 0
                for s in range(3):
                    if m >> s & 1:
                        x |= 1 << ((s + r) % 3)
                rot[m, r] = x
        _PHASES_CACHE[n] = (phases, rot)
    return _PHASES_CACHE[n]


def certificate(sr: SkeletonRigging) -> bytes:
    """Minimum byte encoding over floor permutations, per-floor phase
    rotations, and the orientation flip.

    Encoding: version byte, 7 floor-color codes, 8 skeleton-adjacency row
    bytes (floors 0-6 then the special node), 49 rigging shift-mask bytes
    in row-major floor order.  For digraphs whose automorphism group is
    exactly Z_3, equal certificates characterize isomorphism.
    """
    n = len(sr.structure.floors)
    best = None
    phases, rot = _all_phases(n)
    for flip in (False, True):
        colors = _color_codes(sr, flip)
        masks = _shift_masks(sr, flip)
        skel = _skeleton_matrix(sr)
        key0 = [(colors[f], int(skel[SPECIAL_NODE, f]),
                 int(skel[f, SPECIAL_NODE])) for f in range(n)]
        keys = _refine_floor_classes(key0, skel, masks, n)
        for perm in _candidate_perms(keys):
            head = bytes([CERT_VERSION]) + bytes(colors[f] for f in perm)
            nodes = list(perm) + [SPECIAL_NODE]
            skel_rows = bytes(
                int("".join(str(int(skel[nodes[i], nodes[j]]))
                            for j in range(8)), 2)
                for i in range(8))
            head += skel_rows
            if best is not None and head > best[:len(head)]:
                continue
            pm = masks[np.ix_(perm, perm)]
            # phase p rotates the mask of F -> G by p[F] - p[G]
            diff = (phases[:, :, None] - phases[:, None, :]) % 3
            rotated = rot[pm[None, :, :], diff]
            flat = rotated.reshape(len(phases), n * n)
            idx = np.lexsort(flat[:, ::-1].T)
            body = bytes(int(x) for x in flat[idx[0]])
            cand = head + body
            if best is None or cand < best:
                best = cand
    return best
