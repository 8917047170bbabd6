"""Twisted orientations, crossing signs, and canonical generators.

A twisted orientation assigns an arrow to every arc so that arrows are
consistent through crossings and reverse at every wall pass.  A component
admits one exactly when it crosses the wall an even number of times, so a
diagram carries 2^{|L|} twisted orientations when every component is null
homologous and none otherwise.

The canonical generator attached to a twisted orientation labels each
circle of the oriented resolution through the double cover: a lifted
circle separated from the basepoint by ``d`` circles and running
counterclockwise as seen from the basepoint region (``o = 1``) gets the
label ``d + o`` mod 2, which both lifts agree on.  Label 0 means the
diagonal element 1 + x, label 1 means x.
"""

from __future__ import annotations

from itertools import product
from typing import Dict, FrozenSet, List, Optional, Tuple

from .diagram import Diagram, DiagramError

__all__ = [
    "TwistedOrientation",
    "orientation_exists",
    "all_orientations",
    "orientation_from_bits",
    "crossing_sign",
    "writhe_counts",
    "oriented_resolution",
    "circle_labels",
    "canonical_generator_labels",
]


class TwistedOrientation:
    """Arrow assignment per arc; True points from arc end 0 to arc end 1."""

    __slots__ = ("arrows", "bits")

    def __init__(self, arrows: Dict[int, bool], bits: Tuple[int, ...]):
        self.arrows = arrows
        self.bits = bits  # one reversal bit per component, in component order

    def reverse(self) -> "TwistedOrientation":
        return TwistedOrientation(
            {a: not v for a, v in self.arrows.items()},
            tuple(1 - b for b in self.bits),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TwistedOrientation):
            return NotImplemented
        return self.arrows == other.arrows

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"TwistedOrientation(bits={self.bits})"


def _component_walk(d: Diagram, start_arc: int) -> List[Tuple[int, int, int]]:
    """Visit (arc, entry end, wall flips so far) around one component."""
    sites_of = d.arc_sites()
    out = []
    arc, end, flips = start_arc, 0, 0
    while True:
        out.append((arc, end, flips))
        exit_site = sites_of[arc][1 - end]
        entry_site = d.strand_next(exit_site)
        if exit_site[0] == "b":
            flips += 1
        arc, end = d.site_end(entry_site)
        if arc == start_arc:
            break
    return out


def orientation_exists(d: Diagram) -> bool:
    """True when every component is null homologous (even wall passes)."""
    return all(c == 0 for c in d.component_classes())


def all_orientations(d: Diagram) -> List[TwistedOrientation]:
    """All 2^{|L|} twisted orientations, empty if some component is essential.

    Orientations are ordered by their reversal bit tuples; components are
    ordered by smallest arc id, and bit 0 orients the smallest arc of the
    component from its end 0 to its end 1.
    """
    comps = sorted(d.components(), key=lambda c: min(c["arcs"]))
    if any(c["passes"] % 2 for c in comps):
        return []
    walks = [_component_walk(d, min(c["arcs"])) for c in comps]
    out = []
    for bits in product((0, 1), repeat=len(comps)):
        arrows: Dict[int, bool] = {}
        for walk, bit in zip(walks, bits):
            for arc, end, flips in walk:
                forward = (end == 0) == (flips % 2 == 0)
                arrows[arc] = forward != bool(bit)
        out.append(TwistedOrientation(arrows, bits))
    return out


def orientation_from_bits(d: Diagram, bits: Tuple[int, ...]) -> TwistedOrientation:
    orientations = all_orientations(d)
    if not orientations:
        raise DiagramError("diagram has an essential component; no twisted orientation")
    for o in orientations:
        if o.bits == tuple(bits):
            return o
    raise DiagramError(f"orientation bits {bits} do not match component count")


def _entering_port(d: Diagram, o: TwistedOrientation, c: int, candidates) -> int:
    ports = d.crossings[c]
    into = []
    for p in candidates:
        arc = ports[p]
        sites = d.arc_sites()[arc]
        end = sites.index(("x", c, p))
        # the arrow points into the crossing when it points toward this end
        if o.arrows[arc] == (end == 1):
            into.append(p)
    if len(into) != 1:
        raise DiagramError(f"strand through crossing {c} is not consistently oriented")
    return into[0]


def crossing_sign(d: Diagram, o: TwistedOrientation, c: int) -> int:
    """Sign of a crossing: +1 when the over-strand enters one step clockwise
    of the under-strand's entry port, -1 otherwise."""
    under_in = _entering_port(d, o, c, (0, 2))
    over_in = _entering_port(d, o, c, (1, 3))
    return 1 if over_in == (under_in + 3) % 4 else -1


def writhe_counts(d: Diagram, o: TwistedOrientation) -> Tuple[int, int]:
    """(n_plus, n_minus) with respect to the twisted orientation."""
    np_, nm = 0, 0
    for c in d.crossing_ids:
        if crossing_sign(d, o, c) > 0:
            np_ += 1
        else:
            nm += 1
    return np_, nm


def oriented_resolution(d: Diagram, o: TwistedOrientation) -> Tuple[int, ...]:
    """Smoothing vector of the oriented resolution: 0 at positive crossings."""
    return tuple(0 if crossing_sign(d, o, c) > 0 else 1 for c in d.crossing_ids)


def circle_labels(
    d: Diagram, o: TwistedOrientation, v: Optional[Tuple[int, ...]] = None
) -> Dict[FrozenSet[int], int]:
    """Label (0 or 1) of every circle in the resolution ``v``.

    Defaults to the oriented resolution.  The label is computed upstairs on
    both lifts of each circle and must agree; disagreement would mean the
    embedding bookkeeping is wrong and raises immediately.
    """
    if v is None:
        v = oriented_resolution(d, o)
    geo = d.cover_geometry(v)
    labels: Dict[FrozenSet[int], int] = {}
    for circle in geo.circles:
        aligned = None
        for (copy_arc, end) in circle.darts:
            copy, arc = copy_arc
            effective = o.arrows[arc] if copy == "A" else not o.arrows[arc]
            this = effective == (end == 0)
            if aligned is None:
                aligned = this
            elif aligned != this:
                raise DiagramError(
                    "twisted orientation does not orient a lifted circle"
                )
        # counterclockwise from the basepoint side: far side on the left
        o_bit = 1 if (circle.left_is_far == aligned) else 0
        label = (circle.depth + o_bit) % 2
        prev = labels.get(circle.base_key)
        if prev is not None and prev != label:
            raise DiagramError(
                "the two lifts of a circle disagree on its label; "
                "cover embedding is inconsistent"
            )
        labels[circle.base_key] = label
    base_keys = {key for key, _ in d.resolution_circles(v)}
    if set(labels) != base_keys:
        raise DiagramError("labeling missed a resolution circle")
    return labels


def canonical_generator_labels(
    d: Diagram, o: TwistedOrientation
) -> Tuple[Tuple[int, ...], Dict[FrozenSet[int], int]]:
    """Oriented resolution vertex and circle labels for one orientation."""
    v = oriented_resolution(d, o)
    return v, circle_labels(d, o, v)
