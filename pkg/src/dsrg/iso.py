"""General digraph isomorphism oracle and isomorphism classification.

The oracle uses iterated degree/neighborhood color refinement plus
backtracking over refinement cells and is fully independent of the
skeleton/rigging certificate machinery; classify() partitions a family
by certificate and then witnesses every within-class and cross-class
relation through the oracle, aborting loudly on any disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import AdjacencyMatrix, reverse
from .errors import CertificateOracleDisagreement, DimensionMismatch, \
    NoZ3Structure
from .skeleton import certificate, extract_skeleton_rigging, \
    find_floor_structure


def _refined_colors(a: AdjacencyMatrix, naming: dict, initial=None):
    """Iterated neighborhood color refinement.

    naming maps signature tuples to small integers and is shared between
    the two graphs of an isomorphism test so that equal signatures get
    equal color ids in both.
    """
    v = a.v
    rows, cols = a.rows, a.cols
    if initial is None:
        colors = [0] * v
    else:
        colors = list(initial)
    for _ in range(v):
        sigs = []
        for x in range(v):
            out_prof = sorted(colors[j] for j in _bits(rows[x]))
            in_prof = sorted(colors[j] for j in _bits(cols[x]))
            both = rows[x] & cols[x]
            both_prof = sorted(colors[j] for j in _bits(both))
            sigs.append((colors[x], tuple(out_prof), tuple(in_prof),
                         tuple(both_prof)))
        for s in sigs:
            if s not in naming:
                naming[s] = len(naming)
        new = [naming[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new
    return colors


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask &= mask - 1


def _iso_search(a1: AdjacencyMatrix, a2: AdjacencyMatrix, fixed=()):
    """One isomorphism a1 -> a2 extending the fixed (i, j) pairs, or None.

    Vertices of a1 are mapped in order of ascending refinement-cell size;
    candidates are confined to the matching cell of a2 and checked
    edge-by-edge against the partial map.
    """
    v = a1.v
    naming = {}
    init1 = [0] * v
    init2 = [0] * v
    # individualize the fixed vertices so refinement propagates them
    for rank, (i, j) in enumerate(fixed, start=1):
        init1[i] = rank
        init2[j] = rank
    c1 = _refined_colors(a1, naming, init1)
    c2 = _refined_colors(a2, naming, init2)
    if sorted(c1) != sorted(c2):
        return None
    perm = [-1] * v
    used = [False] * v
    for i, j in fixed:
        perm[i] = j
        used[j] = True
    rows1, cols1 = a1.rows, a1.cols
    rows2, cols2 = a2.rows, a2.cols

    cell_size = {}
    for c in c1:
        cell_size[c] = cell_size.get(c, 0) + 1
    order = sorted((x for x in range(v) if perm[x] < 0),
                   key=lambda x: (cell_size[c1[x]], c1[x], x))

    def consistent(i, j):
        for x in range(v):
            px = perm[x]
            if px < 0:
                continue
            if (rows1[i] >> x & 1) != (rows2[j] >> px & 1):
                return False
            if (cols1[i] >> x & 1) != (cols2[j] >> px & 1):
                return False
        return True

    def rec(d):
        if d == len(order):
            return True
        i = order[d]
        for j in range(v):
            if used[j] or c2[j] != c1[i]:
                continue
            if not consistent(i, j):
                continue
            perm[i] = j
            used[j] = True
            if rec(d + 1):
                return True
            perm[i] = -1
            used[j] = False
        return False

    if rec(0):
        return tuple(perm)
    return None


def isomorphism(a1: AdjacencyMatrix, a2: AdjacencyMatrix):
    """A vertex bijection pi with a2[pi(i), pi(j)] = a1[i, j], or None."""
    if a1.v != a2.v:
        raise DimensionMismatch(f"orders differ: {a1.v} vs {a2.v}")
    return _iso_search(a1, a2)


def automorphism_count(a: AdjacencyMatrix) -> int:
    """Exact order of the automorphism group, by orbit-stabilizer
    accumulation along the base 0, 1, ..., v-1 (never enumerates the
    group element-by-element)."""
    count = 1
    fixed = []
    for b in range(a.v):
        orbit = 0
        for u in range(a.v):
            if _iso_search(a, a, tuple(fixed) + ((b, u),)) is not None:
                orbit += 1
        count *= orbit
        fixed.append((b, b))
    return count


@dataclass(frozen=True)
class IsoClass:
    """One isomorphism class of a classified family."""

    index: int
    members: tuple           # indices into the input family
    representative: int      # index of the class representative
    certificate: bytes | None
    reverse_class: int | None = None

    @property
    def size(self):
        return len(self.members)


def _certificate_of(a: AdjacencyMatrix):
    try:
        fs = find_floor_structure(a)
    except NoZ3Structure:
        return None
    return certificate(extract_skeleton_rigging(a, fs))


def classify(family) -> list:
    """Partition a family of digraphs into isomorphism classes.

    Groups by canonical certificate, then witnesses the partition with
    the independent oracle: every member is checked isomorphic to its
    class representative and every cross-class representative pair is
    checked non-isomorphic.  Any contradiction raises
    CertificateOracleDisagreement.  Matrices without a Z_3 structure get
    no certificate and are placed by the oracle alone.
    """
    family = list(family)
    certs = [_certificate_of(a) for a in family]
    groups = {}
    nocert = []
    for i, c in enumerate(certs):
        if c is None:
            nocert.append(i)
        else:
            groups.setdefault(c, []).append(i)
    classes = [[c, members] for c, members in
               sorted(groups.items(), key=lambda kv: kv[0])]
    for i in nocert:
        for cls in classes:
            if cls[0] is None \
                    and isomorphism(family[cls[1][0]], family[i]) is not None:
                cls[1].append(i)
                break
        else:
            classes.append([None, [i]])

    # oracle cross-check: members match their representative ...
    for c, members in classes:
        rep = members[0]
        for i in members[1:]:
            if isomorphism(family[i], family[rep]) is None:
                raise CertificateOracleDisagreement(
                    f"family[{i}] and family[{rep}] share a certificate "
                    f"but the oracle finds no isomorphism")
    # ... and representatives of distinct classes do not
    for x in range(len(classes)):
        for y in range(x + 1, len(classes)):
            rx, ry = classes[x][1][0], classes[y][1][0]
            if isomorphism(family[rx], family[ry]) is not None:
                raise CertificateOracleDisagreement(
                    f"family[{rx}] and family[{ry}] have distinct "
                    f"certificates but the oracle finds an isomorphism")

    out = []
    rev_lookup = {}
    for idx, (c, members) in enumerate(classes):
        rev_lookup[c] = idx
        out.append([idx, tuple(members), members[0], c])
    result = []
    for idx, members, rep, c in out:
        rc = None
        if c is not None:
            rcert = _certificate_of(reverse(family[rep]))
            rc = rev_lookup.get(rcert)
        result.append(IsoClass(index=idx, members=members,
                               representative=rep, certificate=c,
                               reverse_class=rc))
    return result
