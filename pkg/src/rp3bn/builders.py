"""Constructors for diagram families used by the catalog, demos, and tests.

All builders return validated diagrams.  Braids are laid out bottom to top
with strand slots numbered left to right; closures either cap braid ends
against each other inside the disk or route them out to the boundary, where
position i is glued to position i + m by the antipodal identification.

Crossing chirality follows the port convention (under-strand on ports 0
and 2, counterclockwise order): a braid generator with both strands
travelling upward is positive when the under-strand runs along the SE-NW
diagonal, giving the port tuple (SE, NE, NW, SW).
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .diagram import Diagram, DiagramError

__all__ = [
    "loop_unknot",
    "wall_unknot",
    "split_wall_pair",
    "curl_unknot",
    "essential_pair",
    "hopf_link",
    "trefoil",
    "braid_closure",
    "braid_wall_closure",
    "wall_plat_closure",
    "twist_wall_knot",
    "rational_wall_closure",
]


def loop_unknot() -> Diagram:
    """Crossingless local unknot."""
    return Diagram(0, {}, {}, [0])


def wall_unknot() -> Diagram:
    """Unknot crossing the wall twice (the null homologous wall pushoff)."""
    return Diagram(4, {}, {0: 0, 1: 0, 2: 1, 3: 1}, [])


def split_wall_pair() -> Diagram:
    """Two disjoint 2-pass unknots; null homologous components, no crossings."""
    return Diagram(8, {}, {0: 0, 1: 0, 2: 1, 3: 1, 4: 2, 5: 2, 6: 3, 7: 3}, [])


def curl_unknot(sign: int = 1) -> Diagram:
    """Local unknot with one curl; writhe +1 or -1 as requested.

    One crossing, two arcs: arc 1 is the curl loop on two adjacent ports,
    arc 0 closes the remaining ports around the outside.
    """
    from .orient import all_orientations, crossing_sign

    d = Diagram(0, {0: (0, 0, 1, 1)}, {}, [])
    if crossing_sign(d, all_orientations(d)[0], 0) != (1 if sign > 0 else -1):
        d = d.mirror()
    return d


def essential_pair() -> Diagram:
    """Two essential components sharing one crossing; null homologous link."""
    return Diagram(4, {0: (0, 1, 2, 3)}, {0: 0, 1: 1, 2: 2, 3: 3}, [])


def hopf_link(positive: bool = True) -> Diagram:
    """Local Hopf link as the closure of a two-crossing braid."""
    word = [1, 1] if positive else [-1, -1]
    return braid_closure(word)


def trefoil(right: bool = True) -> Diagram:
    """Local trefoil closed from the four-crossing torus braid on three strands.

    This form keeps triangle faces in the diagram, so slide moves are
    available directly on the catalog entry.
    """
    word = [1, 2, 1, 2] if right else [-1, -2, -1, -2]
    return braid_closure(word, 3)


Ends = Tuple[str, int]  # ("b", slot) or ("t", slot)


def _braid(
    word: Sequence[int], strands: int
) -> Tuple[Dict[int, Tuple[int, int, int, int]], List[int], List[int]]:
    """Crossings plus bottom and top arc ids of a braid on the given strands.

    Word letters are nonzero integers: letter g crosses slots |g| - 1 and
    |g| with the chirality of its sign.
    """
    if strands < 2:
        raise DiagramError("a braid needs at least two strands")
    cur = list(range(strands))
    nxt = strands
    crossings: Dict[int, Tuple[int, int, int, int]] = {}
    for cid, g in enumerate(word):
        j = abs(g) - 1
        if g == 0 or j + 1 >= strands:
            raise DiagramError(f"braid letter {g} out of range for {strands} strands")
        li, ri = cur[j], cur[j + 1]
        lo, ro = nxt, nxt + 1
        nxt += 2
        if g > 0:
            crossings[cid] = (ri, ro, lo, li)
        else:
            crossings[cid] = (li, ri, ro, lo)
        cur[j], cur[j + 1] = lo, ro
    return crossings, list(range(strands)), cur


def braid_closure(word: Sequence[int], strands: int = 2) -> Diagram:
    """Local trace closure of a braid: top ends return to their bottoms."""
    if not word:
        raise ValueError("empty braid word has no closure here; use loop_unknot")
    crossings, bottoms, tops = _braid(word, strands)
    subs = dict(zip(tops, bottoms))
    crossings = {
        c: tuple(subs.get(a, a) for a in ports) for c, ports in crossings.items()
    }
    loops = [b for t, b in zip(tops, bottoms) if t == b]
    return Diagram(0, crossings, {}, loops)


def wall_plat_closure(
    word: Sequence[int], strands: int, caps: Sequence[Tuple[Ends, Ends]] = ()
) -> Diagram:
    """Close a braid by capping some end pairs and walling the rest.

    Ends are named ("b", slot) or ("t", slot).  Capped pairs join inside
    the disk; every other end exits to the boundary, in the cyclic
    counterclockwise order t0, b0, .., b_{strands-1}, t_{strands-1}, .., t1
    starting from the first uncapped end, and is glued antipodally.
    """
    crossings, bottoms, tops = _braid(word, strands)

    def end_arc(e: Ends) -> int:
        kind, j = e
        return bottoms[j] if kind == "b" else tops[j]

    subs: Dict[int, int] = {}
    for e1, e2 in caps:
        a1, a2 = end_arc(e1), end_arc(e2)
        if a1 == a2:
            raise DiagramError("cap would close a strand onto itself")
        subs[max(a1, a2)] = min(a1, a2)
    crossings = {
        c: tuple(subs.get(a, a) for a in ports) for c, ports in crossings.items()
    }
    capped = {e for pair in caps for e in pair}
    cyclic: List[Ends] = [("t", 0)]
    cyclic += [("b", j) for j in range(strands)]
    cyclic += [("t", j) for j in range(strands - 1, 0, -1)]
    free = [e for e in cyclic if e not in capped]
    if len(free) + 2 * len(caps) != 2 * strands:
        raise DiagramError("caps must pair distinct braid ends")
    endpoints = {}
    for pos, e in enumerate(free):
        a = end_arc(e)
        endpoints[pos] = subs.get(a, a)
    return Diagram(len(free), crossings, endpoints, [])


def braid_wall_closure(word: Sequence[int]) -> Diagram:
    """Wall closure of a two-strand braid: all four ends exit to the wall.

    The closure is a knot exactly when the braid word has even length.
    """
    if not word:
        return wall_unknot()
    return wall_plat_closure(word, 2)


def twist_wall_knot(n: int) -> Diagram:
    """Knot with a (2n+1)-crossing twist region and a clasp, 4 wall passes.

    Built from the three-strand word (1,)*(2n+1) + (-2,) with the bottoms
    of slots 1 and 2 capped.  All 2n+2 crossings are positive with respect
    to one twisted orientation and the twisted oriented resolution has two
    circles, so the positive-knot formula gives s = -2 + (2n+2) + 1 = 2n+1;
    with respect to the honest orientation all crossings are negative and
    the oriented resolution has 2n+1 circles.
    """
    if n < 1:
        raise DiagramError("the twist-wall family starts at one full twist")
    word = [1] * (2 * n + 1) + [-2]
    return wall_plat_closure(word, 3, caps=[(("b", 1), ("b", 2))])


def rational_wall_closure(twists: Sequence[int]) -> Diagram:
    """Wall closure of the rational tangle built from a twist vector.

    Starting from the 0-tangle (two horizontal strands), entries are applied
    alternately: even indices twist the bottom pair of ends, odd indices
    twist the right pair; the sign of an entry picks the crossing chirality.
    The four final ends exit to boundary positions NW=0, SW=1, SE=2, NE=3.
    """
    crossings: Dict[int, Tuple[int, int, int, int]] = {}
    next_arc = 2
    # current arc hanging off each tangle corner
    corner = {"NW": 0, "NE": 0, "SW": 1, "SE": 1}

    def new_arc() -> int:
        nonlocal next_arc
        next_arc += 1
        return next_arc - 1

    cid = 0
    for i, t in enumerate(twists):
        for _ in range(abs(t)):
            positive = t > 0
            a, b = new_arc(), new_arc()
            if i % 2 == 0:
                # bottom twist: the crossing hangs below the SW and SE ends,
                # which enter at its NW and NE; each strand exits diagonally
                sw, se = corner["SW"], corner["SE"]
                if positive:
                    crossings[cid] = (a, se, sw, b)  # under: sw in, a out
                else:
                    crossings[cid] = (b, a, se, sw)  # under: se in, b out
                corner["SW"], corner["SE"] = b, a
            else:
                # right twist: the crossing sits right of the NE and SE ends,
                # which enter at its NW and SW
                ne, se = corner["NE"], corner["SE"]
                if positive:
                    crossings[cid] = (a, b, ne, se)  # under: ne in, a out
                else:
                    crossings[cid] = (se, a, b, ne)  # under: se in, b out
                corner["NE"], corner["SE"] = b, a
            cid += 1
    endpoints = {0: corner["NW"], 1: corner["SW"], 2: corner["SE"], 3: corner["NE"]}
    return Diagram(4, crossings, endpoints, [])
