"""Link diagrams in the twisted disk model of the projective plane.

A diagram lives in a disk whose boundary circle is glued to itself by the
antipodal map: position ``i`` is identified with position ``i + m`` (out of
``2m`` marked endpoints).  The image of the boundary circle is an essential
unknot, called the wall here; strands may cross it, and the marked point
between positions ``2m - 1`` and ``0`` is the reference basepoint.

Crossings store their four incident arc ids counterclockwise, with the
under-strand entering at ports 0 and 2.  The 0-smoothing joins port pairs
(0, 1) and (2, 3); the 1-smoothing joins (0, 3) and (1, 2).

Crossing-free closed components are recorded as loops.  A loop, like every
connected piece of the diagram not attached to the wall, is drawn inside
the basepoint region by default; in-memory placements can override this,
but serialization always canonicalizes back to the default placement.
"""

from __future__ import annotations

import hashlib
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

__all__ = [
    "DiagramError",
    "ParseError",
    "Diagram",
    "DoubleCover",
    "PlanarMap",
    "CoverGeometry",
    "CoverCircle",
    "parse_diagram",
    "OUTER_REGION",
]

Site = Tuple  # ("x", crossing, port) | ("b", position) | ("l", arc)
Dart = Tuple  # (edge_key, end) with end in {0, 1}

# sentinel region id for the outside of a local diagram; shaped like a dart
# so it stays comparable with real face ids inside union-find
OUTER_REGION = (("~outer", 0), 0)


class DiagramError(ValueError):
    """Raised when diagram data or an operation on it is invalid."""


class ParseError(DiagramError):
    """Raised on malformed diagram text; carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnionFind:
    """Plain union-find over hashable keys."""

    def __init__(self):
        self.parent: Dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != x:
            self.parent[x] = p = self.parent.setdefault(p, p)
            x, p = p, self.parent[p]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> Dict:
        out: Dict = {}
        for x in list(self.parent):
            out.setdefault(self.find(x), []).append(x)
        return out


class PlanarMap:
    """A combinatorial map: counterclockwise dart rotations at each vertex.

    Darts are (edge_key, end) pairs pointing away from their source vertex;
    every edge contributes exactly two darts.  Faces are the orbits of
    sigma(alpha(d)) and lie to the left of their darts.
    """

    def __init__(self, rotations: Dict[Tuple, List[Dart]]):
        self.rotations = rotations
        self.source: Dict[Dart, Tuple] = {}
        self._next_at_vertex: Dict[Dart, Dart] = {}
        self._prev_at_vertex: Dict[Dart, Dart] = {}
        for v, darts in rotations.items():
            for i, d in enumerate(darts):
                if d in self.source:
                    raise DiagramError(f"dart {d} attached at two vertices")
                self.source[d] = v
                self._next_at_vertex[d] = darts[(i + 1) % len(darts)]
                self._prev_at_vertex[d] = darts[(i - 1) % len(darts)]
        for (edge, end) in self.source:
            if (edge, 1 - end) not in self.source:
                raise DiagramError(f"edge {edge} has a dangling end")
        self._faces: Optional[List[List[Dart]]] = None
        self._face_of: Optional[Dict[Dart, Tuple]] = None

    def alpha(self, dart: Dart) -> Dart:
        return (dart[0], 1 - dart[1])

    def sigma(self, dart: Dart) -> Dart:
        return self._next_at_vertex[dart]

    def faces(self) -> List[List[Dart]]:
        """Orbits of sigma^{-1}(alpha(d)): the face to the left of each dart."""
        if self._faces is None:
            seen: Set[Dart] = set()
            faces = []
            for start in sorted(self.source):
                if start in seen:
                    continue
                orbit = []
                d = start
                while d not in seen:
                    seen.add(d)
                    orbit.append(d)
                    d = self._prev_at_vertex[self.alpha(d)]
                if d != start:
                    raise DiagramError("face traversal does not close up")
                faces.append(orbit)
            self._faces = faces
            self._face_of = {}
            for orbit in faces:
                key = min(orbit)
                for d in orbit:
                    self._face_of[d] = key
        return self._faces

    def face_of(self, dart: Dart) -> Tuple:
        """The id (minimal dart) of the face to the left of ``dart``."""
        if self._face_of is None:
            self.faces()
        return self._face_of[dart]

    def pieces(self) -> Dict[Tuple, Tuple]:
        """Map each vertex to its connected component id (minimal vertex)."""
        uf = UnionFind()
        for v in self.rotations:
            uf.find(v)
        for (edge, end), v in self.source.items():
            uf.union(v, self.source[(edge, 1 - end)])
        return {v: uf.find(v) for v in self.rotations}

    def check_spherical(self) -> None:
        """Require V - E + F = 2 on every connected piece (disk embeddability)."""
        piece_of = self.pieces()
        verts: Dict[Tuple, int] = {}
        edges: Dict[Tuple, Set] = {}
        face_count: Dict[Tuple, int] = {}
        for v, p in piece_of.items():
            verts[p] = verts.get(p, 0) + 1
        for d, v in self.source.items():
            edges.setdefault(piece_of[v], set()).add(d[0])
        for orbit in self.faces():
            p = piece_of[self.source[orbit[0]]]
            face_count[p] = face_count.get(p, 0) + 1
        for p in verts:
            euler = verts[p] - len(edges.get(p, ())) + face_count.get(p, 0)
            if euler != 2:
                raise DiagramError(
                    f"piece {p} is not planar: V - E + F = {euler}, expected 2"
                )


class CoverCircle:
    """One circle of a resolved diagram lifted to the orientation double cover."""

    __slots__ = ("key", "base_key", "darts", "depth", "left_is_far")

    def __init__(self, key, base_key, darts, depth, left_is_far):
        self.key = key            # frozenset of (copy, arc)
        self.base_key = base_key  # frozenset of arcs downstairs
        self.darts = darts        # strand-ordered darts of the cover map
        self.depth = depth        # circles separating this one from the basepoint
        self.left_is_far = left_is_far  # True if the left of darts faces away from the root

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"CoverCircle({sorted(self.key)}, d={self.depth}, far_left={self.left_is_far})"


class DoubleCover:
    """Preimage link diagram in the sphere with its deck involution."""

    def __init__(
        self,
        diagram: "Diagram",
        tau_arcs: Dict[int, int],
        tau_crossings: Dict[int, int],
    ):
        self.diagram = diagram
        self.tau_arcs = tau_arcs
        self.tau_crossings = tau_crossings

    def components(self) -> List[Dict]:
        return self.diagram.components()


class CoverGeometry:
    """Embedded double cover of one full resolution, with nesting depths."""

    def __init__(self, circles: List[CoverCircle]):
        self.circles = circles
        self.by_key = {c.key: c for c in circles}

    def lift_pair(self, base_key: FrozenSet[int]) -> Tuple[CoverCircle, CoverCircle]:
        pair = [c for c in self.circles if c.base_key == base_key]
        if len(pair) != 2:
            raise DiagramError(
                f"resolution circle {sorted(base_key)} does not lift to two circles"
            )
        return pair[0], pair[1]


def _canon_sites(sites: List[Site]) -> List[Site]:
    return sorted(sites)


class Diagram:
    """A link diagram in the twisted disk, with 2m wall endpoints."""

    def __init__(
        self,
        boundary: int,
        crossings: Dict[int, Tuple[int, int, int, int]],
        endpoints: Dict[int, int],
        loops: Iterable[int] = (),
        placements: Optional[Dict[Tuple, Tuple[Tuple, Tuple]]] = None,
    ):
        self.boundary = int(boundary)
        # rotating a port tuple by two is the same crossing (the under-strand
        # stays on ports 0 and 2); keep the lexicographically smaller anchor
        self.crossings = {}
        for c, ports in crossings.items():
            t = tuple(int(a) for a in ports)
            if len(t) == 4:
                t = min(t, t[2:] + t[:2])
            self.crossings[int(c)] = t
        self.endpoints = {int(p): int(a) for p, a in endpoints.items()}
        self.loops = sorted(int(a) for a in loops)
        # optional overrides: piece id -> (host face id, own outer face id)
        self.placements = dict(placements or {})
        self._arc_sites: Optional[Dict[int, List[Site]]] = None
        self._circle_cache: Dict[Tuple[int, ...], List[Tuple[FrozenSet[int], int]]] = {}
        self._disk_map: Optional[PlanarMap] = None
        self.validate()

    # -- basic views --------------------------------------------------------

    @property
    def m(self) -> int:
        return self.boundary // 2

    @property
    def crossing_ids(self) -> List[int]:
        return sorted(self.crossings)

    def n_crossings(self) -> int:
        return len(self.crossings)

    def arcs(self) -> List[int]:
        return sorted(self.arc_sites())

    def arc_sites(self) -> Dict[int, List[Site]]:
        """Map each arc to its two attachment sites in canonical order."""
        if self._arc_sites is None:
            sites: Dict[int, List[Site]] = {}
            for c, ports in self.crossings.items():
                for p, arc in enumerate(ports):
                    sites.setdefault(arc, []).append(("x", c, p))
            for pos, arc in self.endpoints.items():
                sites.setdefault(arc, []).append(("b", pos))
            for arc in self.loops:
                sites.setdefault(arc, []).extend([("l", arc), ("l", arc)])
            self._arc_sites = {a: _canon_sites(s) for a, s in sites.items()}
        return self._arc_sites

    def site_end(self, site: Site) -> Tuple[int, int]:
        """Resolve an attachment site to (arc, end index)."""
        if site[0] == "x":
            arc = self.crossings[site[1]][site[2]]
        elif site[0] == "b":
            arc = self.endpoints[site[1]]
        else:
            arc = site[1]
        ends = self.arc_sites()[arc]
        return arc, ends.index(site)

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        if self.boundary < 0 or self.boundary % 2:
            raise DiagramError("boundary endpoint count must be even and nonnegative")
        if self.m % 2:
            raise DiagramError(
                "diagram class in H_1 is 1 (odd number of wall passes); "
                "homology is defined for null homologous links only"
            )
        expected = set(range(self.boundary))
        if set(self.endpoints) != expected:
            raise DiagramError("endpoints must cover positions 0..2m-1 exactly once")
        for c, ports in self.crossings.items():
            if len(ports) != 4:
                raise DiagramError(f"crossing {c} needs exactly 4 ports")
        loop_set = set(self.loops)
        if len(loop_set) != len(self.loops):
            raise DiagramError("duplicate loop arc")
        counts: Dict[int, int] = {}
        for ports in self.crossings.values():
            for arc in ports:
                counts[arc] = counts.get(arc, 0) + 1
        for arc in self.endpoints.values():
            counts[arc] = counts.get(arc, 0) + 1
        for arc, n in counts.items():
            if arc in loop_set:
                raise DiagramError(f"arc {arc} is declared as a loop but also attached")
            if n != 2:
                raise DiagramError(f"arc {arc} has {n} attachments, expected 2")
        self._arc_sites = None
        self.disk_map().check_spherical()

    # -- embedding ------------------------------------------------------------

    def disk_map(self) -> PlanarMap:
        """Planar map of the diagram drawn in the disk, wall circle included."""
        if self._disk_map is not None:
            return self._disk_map
        rot: Dict[Tuple, List[Dart]] = {}
        for c, ports in self.crossings.items():
            darts = []
            for p in range(4):
                arc, end = self.site_end(("x", c, p))
                darts.append((("a", arc), end))
            rot[("x", c)] = darts
        n = self.boundary
        for pos in range(n):
            arc, end = self.site_end(("b", pos))
            rot[("b", pos)] = [
                (("g", pos), 0),
                (("a", arc), end),
                (("g", (pos - 1) % n), 1),
            ]
        for arc in self.loops:
            rot[("l", arc)] = [(("a", arc), 0), (("a", arc), 1)]
        self._disk_map = PlanarMap(rot)
        return self._disk_map

    def base_face(self) -> Tuple:
        """Face id of the basepoint region in the disk map (None when m = 0)."""
        if self.boundary == 0:
            return None
        return self.disk_map().face_of((("g", self.boundary - 1), 0))

    def piece_placements(self) -> Dict[Tuple, Tuple[Optional[Tuple], Tuple]]:
        """(host face, own outer face) for every non-root piece of the disk map.

        The root piece is the wall circle's piece when m > 0; with m = 0 every
        piece is placed in the virtual outer region.  Defaults put each piece
        in the basepoint region with its minimal-dart face turned outward.
        """
        pm = self.disk_map()
        piece_of = pm.pieces()
        root_piece = piece_of[("b", 0)] if self.boundary else None
        base = self.base_face()
        out: Dict[Tuple, Tuple[Optional[Tuple], Tuple]] = {}
        piece_min_dart: Dict[Tuple, Dart] = {}
        for d, v in sorted(pm.source.items()):
            piece_min_dart.setdefault(piece_of[v], d)
        for piece, min_dart in piece_min_dart.items():
            if piece == root_piece:
                continue
            if piece in self.placements:
                host, outer = self.placements[piece]
            else:
                host, outer = base, pm.face_of(min_dart)
            out[piece] = (host, outer)
        return out

    def quotient_regions(self) -> Tuple[UnionFind, Tuple]:
        """Union-find of disk faces giving the regions of the quotient surface.

        Returns (uf, root_region_rep); faces merge across each wall segment
        (antipodal gap pair) and across piece placements.
        """
        pm = self.disk_map()
        pm.faces()
        uf = UnionFind()
        for orbit in pm.faces():
            uf.find(min(orbit))
        virtual_root = OUTER_REGION
        if self.boundary == 0:
            uf.find(virtual_root)
        n, m = self.boundary, self.m
        for g in range(m):
            uf.union(pm.face_of((("g", g), 0)), pm.face_of((("g", (g + m) % n), 0)))
        for piece, (host, outer) in self.piece_placements().items():
            uf.union(virtual_root if host is None else host, outer)
        root = uf.find(virtual_root if self.boundary == 0 else self.base_face())
        return uf, root

    # -- strands and components -------------------------------------------------

    def strand_next(self, site: Site) -> Site:
        """Follow the strand through a crossing, wall jump, or loop closure."""
        if site[0] == "x":
            return ("x", site[1], (site[2] + 2) % 4)
        if site[0] == "b":
            return ("b", (site[1] + self.m) % self.boundary)
        return site

    def components(self) -> List[Dict]:
        """Strand components: arcs, wall positions, and pass count per component."""
        sites_of: Dict[int, List[Site]] = self.arc_sites()
        seen: Set[int] = set()
        out = []
        for start_arc in self.arcs():
            if start_arc in seen:
                continue
            arcs_here: List[int] = []
            positions: List[int] = []
            arc, end = start_arc, 0
            while arc not in seen:
                seen.add(arc)
                arcs_here.append(arc)
                exit_site = sites_of[arc][1 - end]
                if exit_site[0] == "b":
                    positions.append(exit_site[1])
                entry_site = self.strand_next(exit_site)
                if entry_site[0] == "b":
                    positions.append(entry_site[1])
                arc, end = self.site_end(entry_site)
            out.append(
                {
                    "arcs": frozenset(arcs_here),
                    "positions": frozenset(positions),
                    "passes": len(positions) // 2,
                }
            )
        return out

    def component_classes(self) -> List[int]:
        """Per-component homology class in H_1(RP^3; Z/2) = passes mod 2."""
        return [comp["passes"] % 2 for comp in self.components()]

    def link_class(self) -> int:
        return self.m % 2

    def is_knot(self) -> bool:
        return len(self.components()) == 1

    # -- resolutions -------------------------------------------------------------

    def vertex_key(self, v: Sequence[int]) -> Tuple[int, ...]:
        v = tuple(int(b) for b in v)
        if len(v) != len(self.crossings):
            raise DiagramError("smoothing vector length must equal crossing count")
        return v

    def smoothing_pairs(self, bit: int) -> List[Tuple[int, int]]:
        return [(0, 1), (2, 3)] if bit == 0 else [(0, 3), (1, 2)]

    def resolution_circles(self, v: Sequence[int]) -> List[Tuple[FrozenSet[int], int]]:
        """Circles of the full resolution at smoothing vector ``v``.

        Returns (arc set, wall pass count) per circle.  Every circle of a
        null homologous diagram must cross the wall an even number of times;
        a violation means corrupted data and raises.
        """
        v = self.vertex_key(v)
        if v in self._circle_cache:
            return self._circle_cache[v]
        uf = UnionFind()
        sites_of = self.arc_sites()
        for arc, sites in sites_of.items():
            uf.union((arc, 0), (arc, 1))
        for ci, c in enumerate(self.crossing_ids):
            ports = self.crossings[c]
            for pa, pb in self.smoothing_pairs(v[ci]):
                uf.union(self.site_end(("x", c, pa)), self.site_end(("x", c, pb)))
        for pos in range(self.m):
            a = self.site_end(("b", pos))
            b = self.site_end(("b", pos + self.m))
            uf.union(a, b)
        groups: Dict[Tuple, Set[int]] = {}
        for arc in sites_of:
            groups.setdefault(uf.find((arc, 0)), set()).add(arc)
        circles = []
        for arcs in groups.values():
            positions = [
                s[1] for a in arcs for s in sites_of[a] if s[0] == "b"
            ]
            if len(positions) % 2:
                raise DiagramError("circle with an odd number of wall endpoints")
            passes = len(positions) // 2
            if passes % 2:
                raise DiagramError(
                    "resolution circle crosses the wall an odd number of times; "
                    "diagram is not null homologous"
                )
            circles.append((frozenset(arcs), passes))
        circles.sort(key=lambda t: min(t[0]))
        self._circle_cache[v] = circles
        return circles

    def classify_edge(self, v: Sequence[int], ci: int) -> Dict:
        """Classify the cube edge flipping crossing index ``ci`` at vertex ``v``.

        Returns a dict with the bifurcation kind ("merge", "split", "twist"),
        the source circles involved, and the target circles produced.
        """
        v = self.vertex_key(v)
        if v[ci] != 0:
            raise DiagramError("edge classification expects a 0 bit to flip")
        w = v[:ci] + (1,) + v[ci + 1 :]
        c = self.crossing_ids[ci]
        port_arcs = set(self.crossings[c])
        before = [circ for circ, _ in self.resolution_circles(v) if circ & port_arcs]
        after = [circ for circ, _ in self.resolution_circles(w) if circ & port_arcs]
        if len(before) == 2 and len(after) == 1:
            kind = "merge"
        elif len(before) == 1 and len(after) == 2:
            kind = "split"
        elif len(before) == 1 and len(after) == 1:
            kind = "twist"
            passes = next(
                p for circ, p in self.resolution_circles(v) if circ == before[0]
            )
            if passes == 0:
                raise DiagramError(
                    "one-to-one bifurcation away from the wall cannot happen"
                )
        else:
            raise DiagramError("smoothing change must involve one or two circles")
        return {"kind": kind, "before": before, "after": after}

    # -- double cover ---------------------------------------------------------------

    def cover_map(self, v: Optional[Sequence[int]] = None) -> PlanarMap:
        """Planar map of the orientation double cover on the sphere.

        Copy "A" carries the disk orientation, copy "B" the reversed one;
        position i of copy A is glued to position i + m of copy B along the
        equator.  When ``v`` is given, crossings are replaced by the joints
        of that smoothing, so strand orbits are the resolved circles.
        """
        n, m = self.boundary, self.m
        rot: Dict[Tuple, List[Dart]] = {}
        vbits = None if v is None else self.vertex_key(v)

        def lift(copy: str, dart: Dart) -> Dart:
            (kind, key), end = dart
            if kind != "a":
                raise DiagramError("only arc darts lift through this helper")
            return ((copy, key), end)

        for copy in ("A", "B"):
            for ci, c in enumerate(self.crossing_ids):
                base_darts = []
                for p in range(4):
                    arc, end = self.site_end(("x", c, p))
                    base_darts.append((("a", arc), end))
                if vbits is None:
                    darts = [lift(copy, d) for d in base_darts]
                    if copy == "B":
                        darts = [darts[0]] + darts[1:][::-1]
                    rot[(copy, ("x", c))] = darts
                else:
                    for j, (pa, pb) in enumerate(self.smoothing_pairs(vbits[ci])):
                        rot[(copy, ("j", c, j))] = [
                            lift(copy, base_darts[pa]),
                            lift(copy, base_darts[pb]),
                        ]
            for arc in self.loops:
                rot[(copy, ("l", arc))] = [
                    ((copy, arc), 0),
                    ((copy, arc), 1),
                ]
        for pos in range(n):
            arc_a, end_a = self.site_end(("b", pos))
            arc_b, end_b = self.site_end(("b", (pos + m) % n))
            rot[("P", pos)] = [
                (("eq", pos), 0),
                (("A", arc_a), end_a),
                (("eq", (pos - 1) % n), 1),
                (("B", arc_b), end_b),
            ]
        return PlanarMap(rot)

    def _cover_strand_orbits(
        self, pm: PlanarMap, v: Tuple[int, ...]
    ) -> List[List[Dart]]:
        """Strand-ordered dart cycles of the resolved cover circles."""
        arc_darts = sorted(d for d in pm.source if d[0][0] in ("A", "B"))
        seen: Set[Dart] = set()
        orbits = []
        for start in arc_darts:
            if start in seen:
                continue
            cycle = []
            d = start
            while d not in seen:
                seen.add(d)
                cycle.append(d)
                tip = pm.alpha(d)  # dart at the far vertex, pointing back
                vertex = pm.source[tip]
                darts_here = pm.rotations[vertex]
                if vertex[0] == "P":
                    candidates = [
                        x for x in darts_here if x[0][0] in ("A", "B") and x != tip
                    ]
                else:
                    candidates = [x for x in darts_here if x != tip]
                if len(candidates) != 1:
                    raise DiagramError("strand continuation is ambiguous")
                d = candidates[0]
            if d != start:
                raise DiagramError("strand traversal did not close up")
            seen.update(pm.alpha(x) for x in cycle)
            orbits.append(cycle)
        return orbits

    def cover_geometry(self, v: Sequence[int]) -> CoverGeometry:
        """Embed the resolved double cover and measure nesting from the basepoint.

        For each cover circle this computes the number of circles separating
        it from the basepoint region (its depth) and which of its two sides
        faces away from the basepoint.
        """
        v = self.vertex_key(v)
        full = self.cover_map()  # crossings intact: reference face structure
        full.faces()
        resolved = self.cover_map(v)
        uf = UnionFind()
        for orbit in full.faces():
            uf.find(min(orbit))
        n, m = self.boundary, self.m
        if n == 0:
            uf.find(OUTER_REGION)
        # regions communicate across the equator
        for g in range(n):
            uf.union(full.face_of((("eq", g), 0)), full.face_of((("eq", g), 1)))
        # split-off pieces sit inside their host faces, in both lifts
        for piece, (host, outer) in self.piece_placements().items():
            for copy in ("A", "B"):
                lifted_outer = self._lift_face(full, copy, outer)
                if host is None:
                    uf.union(OUTER_REGION, lifted_outer)
                else:
                    uf.union(self._lift_face(full, copy, host), lifted_outer)
        # smoothing a crossing merges the two faces its new arcs do not cut off
        for copy in ("A", "B"):
            for ci, c in enumerate(self.crossing_ids):
                open_corners = [(1, 2), (3, 0)] if v[ci] == 0 else [(0, 1), (2, 3)]
                fa = self._corner_face(full, copy, c, open_corners[0])
                fb = self._corner_face(full, copy, c, open_corners[1])
                uf.union(fa, fb)

        if n == 0:
            root = uf.find(OUTER_REGION)
        else:
            root = uf.find(full.face_of((("eq", n - 1), 0)))

        orbits = self._cover_strand_orbits(resolved, v)
        sides = []
        for cycle in orbits:
            lefts = {uf.find(full.face_of(d)) for d in cycle}
            rights = {uf.find(full.face_of(resolved_alpha)) for resolved_alpha in
                      ((d[0], 1 - d[1]) for d in cycle)}
            if len(lefts) != 1 or len(rights) != 1:
                raise DiagramError("circle side is not a single region")
            sides.append((next(iter(lefts)), next(iter(rights))))

        regions = {uf.find(k) for k in uf.parent}
        if len(regions) != len(orbits) + 1:
            raise DiagramError(
                f"{len(orbits)} circles should cut the sphere into "
                f"{len(orbits) + 1} regions, found {len(regions)}"
            )
        # breadth-first depths over the region tree
        adjacency: Dict[Tuple, List[Tuple]] = {r: [] for r in regions}
        for left, right in sides:
            adjacency[left].append(right)
            adjacency[right].append(left)
        depth = {root: 0}
        frontier = [root]
        while frontier:
            nxt = []
            for r in frontier:
                for s in adjacency[r]:
                    if s not in depth:
                        depth[s] = depth[r] + 1
                        nxt.append(s)
            frontier = nxt
        if len(depth) != len(regions):
            raise DiagramError("region adjacency graph is not connected")

        circles = []
        for cycle, (left, right) in zip(orbits, sides):
            dl, dr = depth[left], depth[right]
            if abs(dl - dr) != 1:
                raise DiagramError("adjacent regions must differ in depth by one")
            arcs = frozenset(d[0] for d in cycle)
            base_key = frozenset(a[1] for a in arcs)
            circles.append(
                CoverCircle(
                    key=arcs,
                    base_key=base_key,
                    darts=cycle,
                    depth=min(dl, dr),
                    left_is_far=dl > dr,
                )
            )
        return CoverGeometry(circles)

    def _lift_face(self, full: PlanarMap, copy: str, face: Tuple) -> Tuple:
        """Face of the cover map containing the lift of a disk-map face.

        Face ids downstairs are darts; copy B reverses all rotations, which
        swaps the sides of every dart, so the B lift of the face left of a
        dart is the face left of the reversed lifted dart.
        """
        (kind, key), end = face
        if kind == "g":
            eq = key if copy == "A" else (key + self.m) % self.boundary
            lifted = (("eq", eq), end)
        else:
            lifted = ((copy, key), end)
        if copy == "B":
            lifted = full.alpha(lifted)
        return full.face_of(lifted)

    def _corner_face(
        self, full: PlanarMap, copy: str, c: int, corner: Tuple[int, int]
    ) -> Tuple:
        """Face in the sector between two adjacent ports of a cover crossing.

        The face left of an outgoing dart is the sector between it and the
        next dart counterclockwise, so the corner face is the left face of
        whichever corner port comes first in the rotation.
        """
        vertex = (copy, ("x", c))
        darts = full.rotations[vertex]
        port_dart = {}
        for p in range(4):
            arc, end = self.site_end(("x", c, p))
            port_dart[p] = ((copy, arc), end)
        a, b = corner
        da, db = port_dart[a], port_dart[b]
        k = darts.index(da)
        if darts[(k + 1) % 4] == db:
            return full.face_of(da)
        k = darts.index(db)
        if darts[(k + 1) % 4] == da:
            return full.face_of(db)
        raise DiagramError(f"ports {corner} are not adjacent at crossing {c}")

    def double_cover(self) -> "DoubleCover":
        """The preimage diagram in the sphere, with its deck involution.

        Arc ids are renumbered; copy A keeps each crossing's rotation while
        copy B reverses it, and strands are spliced across the old wall.
        The involution swaps the two copies; it is free on crossings, and
        free on arcs except for the lift of a bare arc joining antipodal
        boundary positions, which it maps to itself.
        """
        arcs = self.arcs()
        index = {a: i for i, a in enumerate(arcs)}
        na = len(arcs)

        def arc_id(copy: str, arc: int) -> int:
            return index[arc] + (0 if copy == "A" else na)

        uf = UnionFind()
        for copy in ("A", "B"):
            for a in arcs:
                uf.find(arc_id(copy, a))
        for pos in range(self.m):
            a0 = self.endpoints[pos]
            a1 = self.endpoints[pos + self.m]
            uf.union(arc_id("A", a0), arc_id("B", a1))
            uf.union(arc_id("B", a0), arc_id("A", a1))
        crossings = {}
        for i, c in enumerate(self.crossing_ids):
            ports = self.crossings[c]
            pa = tuple(uf.find(arc_id("A", a)) for a in ports)
            rev = [ports[0]] + list(ports[1:])[::-1]
            pb = tuple(uf.find(arc_id("B", a)) for a in rev)
            crossings[2 * i] = pa
            crossings[2 * i + 1] = pb
        loops = set()
        for arc in self.loops:
            loops.add(uf.find(arc_id("A", arc)))
            loops.add(uf.find(arc_id("B", arc)))
        # wall-passing crossing-free strands close into loops upstairs
        attached = set()
        for ports in crossings.values():
            attached.update(ports)
        for pos in range(self.boundary):
            for copy in ("A", "B"):
                rep = uf.find(arc_id(copy, self.endpoints[pos]))
                if rep not in attached:
                    loops.add(rep)
        tau_arcs = {}
        for a in arcs:
            tau_arcs[uf.find(arc_id("A", a))] = uf.find(arc_id("B", a))
            tau_arcs[uf.find(arc_id("B", a))] = uf.find(arc_id("A", a))
        tau_crossings = {}
        for i in range(len(self.crossing_ids)):
            tau_crossings[2 * i] = 2 * i + 1
            tau_crossings[2 * i + 1] = 2 * i
        return DoubleCover(
            Diagram(0, crossings, {}, sorted(loops)), tau_arcs, tau_crossings
        )

    # -- symmetries and sums -----------------------------------------------------------

    def mirror(self) -> "Diagram":
        """Mirror image: over- and under-strands swap at every crossing."""
        crossings = {
            c: (p[1], p[2], p[3], p[0]) for c, p in self.crossings.items()
        }
        return Diagram(self.boundary, crossings, dict(self.endpoints), self.loops)

    def connected_sum(self, arc: int, other: "Diagram", other_arc: int) -> "Diagram":
        """Splice a local diagram into this one along the chosen arcs.

        Both arcs are cut; the host arc keeps its id on the end-0 side and a
        fresh id bridges the guest's end-1 side back to the host's end-1 side.
        """
        if other.boundary != 0:
            raise DiagramError("connected summand must be a local diagram")
        if arc not in self.arc_sites() or other_arc not in other.arc_sites():
            raise DiagramError("unknown arc for connected sum")
        if arc in self.loops or other_arc in other.loops:
            raise DiagramError("cannot splice along a crossing-free loop")
        shift = max(self.arcs(), default=-1) + 1
        fresh = shift + max(other.arcs(), default=-1) + 1

        new_cross = dict(self.crossings)
        endpoints = dict(self.endpoints)
        guest_index: Dict[int, int] = {}
        cid = max(self.crossing_ids, default=-1) + 1
        for c in sorted(other.crossings):
            guest_index[c] = cid
            new_cross[cid] = tuple(a + shift for a in other.crossings[c])
            cid += 1
        loops = list(self.loops) + [a + shift for a in other.loops]

        def rewrite(site: Site, new_arc: int, index: Optional[Dict[int, int]]) -> None:
            if site[0] == "x":
                key = site[1] if index is None else index[site[1]]
                ports = list(new_cross[key])
                ports[site[2]] = new_arc
                new_cross[key] = tuple(ports)
            else:
                endpoints[site[1]] = new_arc

        host_end1 = self.arc_sites()[arc][1]
        guest_end0, guest_end1 = other.arc_sites()[other_arc]
        rewrite(host_end1, fresh, None)
        rewrite(guest_end0, arc, guest_index)
        rewrite(guest_end1, fresh, guest_index)
        return Diagram(self.boundary, new_cross, endpoints, loops)

    # -- serialization ------------------------------------------------------------------

    def serialize(self) -> str:
        lines = ["rp2diagram v1", f"boundary {self.boundary}"]
        for c in sorted(self.crossings):
            lines.append("crossing {} {} {} {} {}".format(c, *self.crossings[c]))
        for pos in sorted(self.endpoints):
            lines.append(f"endpoint {pos} {self.endpoints[pos]}")
        for arc in self.loops:
            lines.append(f"loop {arc}")
        return "\n".join(lines) + "\n"

    def sha(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            self.boundary == other.boundary
            and self.crossings == other.crossings
            and self.endpoints == other.endpoints
            and self.loops == other.loops
        )

    def __hash__(self):
        return hash(self.serialize())

    def __repr__(self):  # pragma: no cover - debugging aid
        return (
            f"Diagram(boundary={self.boundary}, crossings={len(self.crossings)}, "
            f"loops={len(self.loops)})"
        )


def parse_diagram(text: str) -> Diagram:
    """Parse the line-oriented rp2diagram format; see the module docstring."""
    boundary = None
    crossings: Dict[int, Tuple[int, int, int, int]] = {}
    endpoints: Dict[int, int] = {}
    loops: List[int] = []
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if not saw_header:
            if fields != ["rp2diagram", "v1"]:
                raise ParseError(lineno, "expected header 'rp2diagram v1'")
            saw_header = True
            continue
        kind, args = fields[0], fields[1:]
        try:
            values = [int(a) for a in args]
        except ValueError:
            raise ParseError(lineno, f"non-integer field in {kind!r} line")
        if kind == "boundary":
            if boundary is not None:
                raise ParseError(lineno, "duplicate boundary line")
            if len(values) != 1 or values[0] < 0:
                raise ParseError(lineno, "boundary expects one nonnegative count")
            boundary = values[0]
        elif kind == "crossing":
            if len(values) != 5:
                raise ParseError(lineno, "crossing expects id and four arcs")
            if values[0] in crossings:
                raise ParseError(lineno, f"duplicate crossing id {values[0]}")
            crossings[values[0]] = tuple(values[1:])
        elif kind == "endpoint":
            if len(values) != 2:
                raise ParseError(lineno, "endpoint expects position and arc")
            if values[0] in endpoints:
                raise ParseError(lineno, f"duplicate endpoint position {values[0]}")
            endpoints[values[0]] = values[1]
        elif kind == "loop":
            if len(values) != 1:
                raise ParseError(lineno, "loop expects one arc id")
            loops.append(values[0])
        else:
            raise ParseError(lineno, f"unknown directive {kind!r}")
    if not saw_header:
        raise ParseError(1, "missing 'rp2diagram v1' header")
    if boundary is None:
        raise ParseError(1, "missing boundary line")
    return Diagram(boundary, crossings, endpoints, loops)
