"""Cube complex of resolutions with the deformed Frobenius algebra over GF(2).

Each smoothing vector ``v`` of a diagram contributes the module
``V^{tensor c(v)}`` where ``V`` has basis ``1`` (quantum weight +1) and ``x``
(quantum weight -1) and ``c(v)`` counts resolution circles.  Cube edges carry
one of three maps depending on how the changed smoothing reorganises circles:

* merge: the multiplication ``1*1 = 1``, ``1*x = x*1 = x``, ``x*x = x``;
* split: the comultiplication ``1 -> 1(x)x + x(x)1 + 1(x)1``, ``x -> x(x)x``;
* twist: a circle crossing the wall returns to itself; the edge map is the
  identity, the unique choice compatible with the rest of the structure
  (see ``enumerate_twist_maps``).

The total differential adds all edge maps leaving a vertex; over GF(2) no
edge signs are needed.  The homological grading is ``|v| - n_minus`` and the
quantum grading of a basis state is the sum of its label weights plus
``|v| + n_plus - 2 * n_minus``, where ``n_plus`` and ``n_minus`` count
crossing signs of a chosen twisted orientation.  The differential never
lowers the quantum grading, so ``q`` induces a filtration; its graded pieces
recover the undeformed (Khovanov-style) complex, in which all twist edge
maps vanish.

Basis states are encoded as label tuples over the circle list of their
vertex, circles sorted by smallest arc id, with ``0`` meaning ``1`` and
``1`` meaning ``x``.  Within one homological degree the generators are
ordered by vertex (lexicographically) and then by label tuple.
"""

from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .diagram import Diagram, DiagramError
from .f2la import BitMatrix, cancel_dims, homology_dims
from .orient import TwistedOrientation, all_orientations, writhe_counts

Label = int
State = Tuple[int, ...]

LABEL_WEIGHT = {0: 1, 1: -1}


def merge_labels(a: Label, b: Label) -> Label:
    """Multiplication on basis labels; x is absorbing."""
    return a | b


def split_label(a: Label) -> List[Tuple[Label, Label]]:
    """Comultiplication on basis labels, as a list of summands."""
    if a == 0:
        return [(0, 1), (1, 0), (0, 0)]
    return [(1, 1)]


def twist_label(a: Label) -> Label:
    return a


# -- uniqueness of the twist edge map ---------------------------------------

# elements of the rank-2 algebra as coefficient pairs (coeff of 1, coeff of x)
_BASIS = ((1, 0), (0, 1))


def _mul(variant: str, i: int, j: int) -> Tuple[int, int]:
    if i == 0:
        return _BASIS[j]
    if j == 0:
        return _BASIS[1]
    return (0, 1) if variant == "deformed" else (0, 0)


def _apply(f: Tuple[Tuple[int, int], Tuple[int, int]], el: Tuple[int, int]):
    out = [0, 0]
    for i, c in enumerate(el):
        if c:
            out[0] ^= f[i][0]
            out[1] ^= f[i][1]
    return (out[0], out[1])


def enumerate_twist_maps(variant: str = "deformed") -> List[Tuple]:
    """All linear self-maps of V satisfying the twist edge constraints.

    The constraints are: the map does not lower the quantum filtration
    (each edge shifts the homological normalisation by one, so the label
    part may drop by at most one, ruling out an x component in the image
    of 1); composing the map with itself equals merge-after-split on the
    same circle; and the map commutes with merging a neighbouring circle.
    For the deformed algebra exactly the identity survives; for the
    undeformed variant only the zero map does.
    """
    if variant not in ("deformed", "undeformed"):
        raise ValueError(f"unknown algebra variant: {variant!r}")

    def merge_after_split(i: int) -> Tuple[int, int]:
        acc = [0, 0]
        for left, right in _split_pairs(variant, i):
            prod = _mul(variant, left, right)
            acc[0] ^= prod[0]
            acc[1] ^= prod[1]
        return (acc[0], acc[1])

    survivors = []
    for f1 in itertools.product((0, 1), repeat=2):
        if f1[1]:
            continue  # image of 1 may not contain x: filtration would drop
        for fx in itertools.product((0, 1), repeat=2):
            f = (f1, fx)
            if any(
                _apply(f, _apply(f, _BASIS[i])) != merge_after_split(i)
                for i in range(2)
            ):
                continue
            # commuting with a merge: f(u * w) == u * f(w) on basis elements
            ok = True
            for i in range(2):
                for j in range(2):
                    lhs = _apply(f, _mul(variant, i, j))
                    rhs = [0, 0]
                    img = _apply(f, _BASIS[j])
                    for k, c in enumerate(img):
                        if c:
                            p = _mul(variant, i, k)
                            rhs[0] ^= p[0]
                            rhs[1] ^= p[1]
                    if lhs != (rhs[0], rhs[1]):
                        ok = False
            if ok:
                survivors.append(f)
    return survivors


def _split_pairs(variant: str, i: int) -> List[Tuple[int, int]]:
    """Comultiplication summands as pairs of basis indices."""
    if i == 0:
        pairs = [(0, 1), (1, 0)]
        if variant == "deformed":
            pairs.append((0, 0))
        return pairs
    return [(1, 1)]


# -- the cube complex --------------------------------------------------------


class CubeComplex:
    """The filtered complex of a diagram, with optional grading normalisation.

    ``orientation`` fixes the crossing signs used to normalise gradings; when
    omitted the first twisted orientation is used.  Diagrams without any
    twisted orientation (some component crosses the wall an odd number of
    times) get unnormalised gradings and ``normalized`` is False.
    """

    def __init__(
        self, diagram: Diagram, orientation: Optional[TwistedOrientation] = None
    ):
        self.diagram = diagram
        self.n = len(diagram.crossing_ids)
        if orientation is None:
            choices = all_orientations(diagram)
            orientation = choices[0] if choices else None
        self.orientation = orientation
        self.normalized = orientation is not None
        if orientation is not None:
            self.n_plus, self.n_minus = writhe_counts(diagram, orientation)
        else:
            self.n_plus, self.n_minus = 0, 0

        self._circles: Dict[Tuple[int, ...], List[FrozenSet[int]]] = {}
        self._offsets: Dict[Tuple[int, ...], int] = {}
        self._vertices_by_weight: List[List[Tuple[int, ...]]] = [
            [] for _ in range(self.n + 1)
        ]
        for v in itertools.product((0, 1), repeat=self.n):
            self._vertices_by_weight[sum(v)].append(v)
        self._dims: List[int] = []
        for w, vs in enumerate(self._vertices_by_weight):
            offset = 0
            for v in vs:
                circles = [key for key, _ in diagram.resolution_circles(v)]
                self._circles[v] = circles
                self._offsets[v] = offset
                offset += 1 << len(circles)
            self._dims.append(offset)
        self._boundaries: List[Optional[BitMatrix]] = [None] * (self.n + 1)

    # -- gradings ------------------------------------------------------------

    @property
    def h_range(self) -> range:
        return range(-self.n_minus, self.n - self.n_minus + 1)

    def weight_of_h(self, h: int) -> int:
        return h + self.n_minus

    def dim(self, h: int) -> int:
        w = self.weight_of_h(h)
        if not 0 <= w <= self.n:
            return 0
        return self._dims[w]

    def circles(self, v: Sequence[int]) -> List[FrozenSet[int]]:
        return self._circles[self.diagram.vertex_key(v)]

    def q_of(self, v: Sequence[int], state: State) -> int:
        v = self.diagram.vertex_key(v)
        weight = sum(LABEL_WEIGHT[l] for l in state)
        return weight + sum(v) + self.n_plus - 2 * self.n_minus

    def index_of(self, v: Sequence[int], state: State) -> int:
        """Position of a basis state within its homological degree."""
        v = self.diagram.vertex_key(v)
        circles = self._circles[v]
        if len(state) != len(circles):
            raise ValueError("label tuple does not match the circle count")
        idx = 0
        for l in state:
            idx = (idx << 1) | (l & 1)
        return self._offsets[v] + idx

    def state_at(self, h: int, index: int) -> Tuple[Tuple[int, ...], State]:
        """Inverse of ``index_of`` within homological degree ``h``."""
        w = self.weight_of_h(h)
        for v in self._vertices_by_weight[w]:
            k = len(self._circles[v])
            if self._offsets[v] <= index < self._offsets[v] + (1 << k):
                bits = index - self._offsets[v]
                state = tuple((bits >> (k - 1 - i)) & 1 for i in range(k))
                return v, state
        raise IndexError(f"generator index {index} out of range in degree {h}")

    def generators(self, h: int) -> Iterable[Tuple[Tuple[int, ...], State]]:
        w = self.weight_of_h(h)
        if not 0 <= w <= self.n:
            return
        for v in self._vertices_by_weight[w]:
            for state in itertools.product((0, 1), repeat=len(self._circles[v])):
                yield v, state

    # -- the differential ----------------------------------------------------

    def _edge_images(
        self, v: Tuple[int, ...], ci: int, state: State
    ) -> List[Tuple[Tuple[int, ...], State]]:
        """Summands of one edge map applied to one basis state."""
        w = v[:ci] + (1,) + v[ci + 1 :]
        info = self.diagram.classify_edge(v, ci)
        src = self._circles[v]
        tgt = self._circles[w]
        labels = dict(zip(src, state))
        out: List[Tuple[Tuple[int, ...], State]] = []
        if info["kind"] == "merge":
            a, b = info["before"]
            merged = info["after"][0]
            if merged != a | b:
                raise DiagramError("merged circle is not the union of its halves")
            base = {k: l for k, l in labels.items() if k not in (a, b)}
            base[merged] = merge_labels(labels[a], labels[b])
            out.append((w, tuple(base[k] for k in tgt)))
        elif info["kind"] == "split":
            before = info["before"][0]
            p, r = info["after"]
            if p | r != before or p & r:
                raise DiagramError("split circles do not partition the source")
            base = {k: l for k, l in labels.items() if k != before}
            for lp, lr in split_label(labels[before]):
                term = dict(base)
                term[p], term[r] = lp, lr
                out.append((w, tuple(term[k] for k in tgt)))
        else:
            before = info["before"][0]
            after = info["after"][0]
            if before != after:
                raise DiagramError("twist edge must preserve the circle")
            base = dict(labels)
            base[after] = twist_label(labels[before])
            out.append((w, tuple(base[k] for k in tgt)))
        return out

    def _sparse_edges(self, h: int) -> List[Tuple[int, int]]:
        """(source index, target index) pairs of the degree-``h`` differential."""
        w = self.weight_of_h(h)
        if not 0 <= w < self.n:
            return []
        edges = []
        for v in self._vertices_by_weight[w]:
            zeros = [i for i, bit in enumerate(v) if bit == 0]
            for state in itertools.product((0, 1), repeat=len(self._circles[v])):
                col = self.index_of(v, state)
                for ci in zeros:
                    for tv, tstate in self._edge_images(v, ci, state):
                        edges.append((col, self.index_of(tv, tstate)))
        return edges

    def boundary(self, h: int) -> Optional[BitMatrix]:
        """Matrix of the differential from degree ``h`` to ``h + 1``."""
        w = self.weight_of_h(h)
        if not 0 <= w < self.n:
            return None
        if self._boundaries[w] is None:
            entries = [(row, col) for col, row in self._sparse_edges(h)]
            self._boundaries[w] = BitMatrix.from_entries(
                self._dims[w + 1], self._dims[w], entries
            )
        return self._boundaries[w]

    def homology(self, method: str = "cancel") -> Dict[int, int]:
        """Total homology dimensions per homological degree.

        The default reduces the sparse differential by pair cancellation;
        ``method="dense"`` runs bit-packed elimination instead and also
        verifies that consecutive differentials compose to zero.
        """
        if method == "dense":
            dims = [self._dims[w] for w in range(self.n + 1)]
            mats = [self.boundary(w - self.n_minus) for w in range(self.n + 1)]
            hs = homology_dims(dims, mats)
            return {w - self.n_minus: d for w, d in enumerate(hs) if dims[w]}
        if method != "cancel":
            raise ValueError(f"unknown homology method {method!r}")
        grading = {}
        edges = []
        for h in self.h_range:
            for idx in range(self.dim(h)):
                grading[(h, idx)] = h
            for col, row in self._sparse_edges(h):
                edges.append(((h, col), (h + 1, row)))
        counts = cancel_dims(grading, edges)
        return {h: counts.get(h, 0) for h in self.h_range if self.dim(h)}

    def filtration_check(self) -> None:
        """Assert that every differential entry has non-negative q shift."""
        for h in self.h_range:
            mat = self.boundary(h)
            if mat is None:
                continue
            for col in range(mat.ncols):
                v, state = self.state_at(h, col)
                qs = self.q_of(v, state)
                for row in _column_rows(mat, col):
                    tv, tstate = self.state_at(h + 1, row)
                    if self.q_of(tv, tstate) < qs:
                        raise DiagramError(
                            "differential entry lowers the quantum filtration"
                        )

    # -- associated graded ----------------------------------------------------

    def edge_kind_counts(self, graded: bool = False) -> Dict[str, int]:
        """Differential entries tallied by edge kind.

        With ``graded=True`` only q-preserving entries are counted; twist
        edges raise q by exactly one, so their tally must come back zero.
        """
        counts: Dict[str, int] = {}
        for h in self.h_range:
            w = self.weight_of_h(h)
            if not 0 <= w < self.n:
                continue
            for v in self._vertices_by_weight[w]:
                zeros = [i for i, bit in enumerate(v) if bit == 0]
                kinds = {
                    ci: self.diagram.classify_edge(v, ci)["kind"] for ci in zeros
                }
                for state in itertools.product(
                    (0, 1), repeat=len(self._circles[v])
                ):
                    q = self.q_of(v, state)
                    for ci in zeros:
                        for tv, tstate in self._edge_images(v, ci, state):
                            if graded and self.q_of(tv, tstate) != q:
                                continue
                            counts[kinds[ci]] = counts.get(kinds[ci], 0) + 1
        return counts

    def graded_homology(self, method: str = "cancel") -> Dict[Tuple[int, int], int]:
        """Bigraded homology of the associated graded complex.

        Keeps only differential entries that preserve q; this is the
        undeformed theory, in which every twist edge map vanishes.
        """
        if method == "cancel":
            qs_by_h = {
                h: [self.q_of(*self.state_at(h, i)) for i in range(self.dim(h))]
                for h in self.h_range
            }
            grading = {}
            edges = []
            for h in self.h_range:
                for idx, q in enumerate(qs_by_h[h]):
                    grading[(h, idx)] = (h, q)
                if h + 1 not in qs_by_h:
                    continue
                src_q, tgt_q = qs_by_h[h], qs_by_h[h + 1]
                for col, row in self._sparse_edges(h):
                    if src_q[col] == tgt_q[row]:
                        edges.append(((h, col), (h + 1, row)))
            counts = cancel_dims(grading, edges)
            return {hq: d for hq, d in sorted(counts.items()) if d}
        if method != "dense":
            raise ValueError(f"unknown homology method {method!r}")
        levels: Dict[int, Dict[int, List[int]]] = {}
        for h in self.h_range:
            levels[h] = {}
            for idx in range(self.dim(h)):
                v, state = self.state_at(h, idx)
                levels[h].setdefault(self.q_of(v, state), []).append(idx)
        out: Dict[Tuple[int, int], int] = {}
        qs = sorted({q for by_q in levels.values() for q in by_q})
        for q in qs:
            dims = []
            mats: List[Optional[BitMatrix]] = []
            hs = sorted(levels)
            for h in hs:
                rows = levels[h].get(q, [])
                dims.append(len(rows))
            for pos, h in enumerate(hs[:-1]):
                src = levels[h].get(q, [])
                tgt = levels[h + 1].get(q, [])
                mat = self.boundary(h)
                entries = []
                if mat is not None and src and tgt:
                    tpos = {idx: i for i, idx in enumerate(tgt)}
                    for j, col in enumerate(src):
                        for row in _column_rows(mat, col):
                            if row in tpos:
                                entries.append((tpos[row], j))
                mats.append(
                    BitMatrix.from_entries(len(tgt), len(src), entries)
                )
            for h, d in zip(hs, homology_dims(dims, mats)):
                if d:
                    out[(h, q)] = d
        return out


def _column_rows(mat: BitMatrix, col: int) -> List[int]:
    """Rows holding a 1 in the given column."""
    rows = []
    for i in range(mat.nrows):
        if mat.get(i, col):
            rows.append(i)
    return rows
