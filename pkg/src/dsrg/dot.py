"""DOT export of skeletons and riggings, following the figure notation:
Empty floors are unfilled solid ellipses, Double floors filled ellipses,
ForwardCycle floors dashed ellipses, BackwardCycle floors rectangles;
rigging edges carry their shift sets as concatenated digit labels.

Node labels use 1-based vertex numbers to match the printed figures.
"""

from __future__ import annotations

from .skeleton import FloorColor, SkeletonRigging, SPECIAL_NODE

_STYLE = {
    FloorColor.EMPTY: 'shape=ellipse, style=solid',
    FloorColor.DOUBLE: 'shape=ellipse, style=filled',
    FloorColor.FORWARD_CYCLE: 'shape=ellipse, style=dashed',
    FloorColor.BACKWARD_CYCLE: 'shape=box, style=solid',
}


def _floor_label(sr: SkeletonRigging, f: int) -> str:
    return "(" + ",".join(str(x + 1) for x in sr.structure.floors[f]) + ")"


def skeleton_dot(sr: SkeletonRigging) -> str:
    """8-node digraph of complete transitions with styled floor nodes."""
    n = len(sr.structure.floors)
    lines = ["digraph skeleton {"]
    lines.append(
        f'  s [label="{sr.structure.special + 1}", shape=circle];')
    for f in range(n):
        lines.append(
            f'  f{f} [label="{_floor_label(sr, f)}", {_STYLE[sr.colors[f]]}];')
    for (u, w) in sorted(sr.skeleton):
        nu = "s" if u == SPECIAL_NODE else f"f{u}"
        nw = "s" if w == SPECIAL_NODE else f"f{w}"
        lines.append(f"  {nu} -> {nw};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def rigging_dot(sr: SkeletonRigging) -> str:
    """7 floor nodes (the isolated special vertex is not shown); edges
    labeled with concatenated shift digits, e.g. "12"."""
    n = len(sr.structure.floors)
    lines = ["digraph rigging {"]
    for f in range(n):
        lines.append(
            f'  f{f} [label="{_floor_label(sr, f)}", {_STYLE[sr.colors[f]]}];')
    for (f, g), shifts in sr.rigging:
        label = "".join(str(s) for s in sorted(shifts))
        lines.append(f'  f{f} -> f{g} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
