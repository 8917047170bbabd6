"""Top-level invariants: homology dimensions, the s-invariant, genus bounds.

The s-invariant of a null homologous knot is read off the quantum
filtration of the deformed complex in homological degree zero.  With
``F_q`` the subcomplex spanned by basis states of quantum grading at least
``q``, let ``r(q)`` be the dimension of the image of ``H^0(F_q)`` inside
``H^0``; then ``s_min`` is the largest ``q`` with ``r(q) = 2``, ``s_max``
the largest with ``r(q) >= 1``, and ``s = s_min + 1``.  The gap
``s_max - s_min = 2`` holds for every knot and is asserted here.

Reports are plain dictionaries ready for JSON serialisation, tagged with a
schema version, the diagram hash, and the conventions version, so stored
outputs stay comparable across releases.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .chain import CubeComplex
from .diagram import Diagram, DiagramError
from .f2la import BitMatrix
from .orient import (
    TwistedOrientation,
    all_orientations,
    canonical_generator_labels,
    oriented_resolution,
    writhe_counts,
)

SCHEMA = "rp3bn/1"
CONVENTIONS = "rp3bn-conventions-1"


def canonical_cycle(cx: CubeComplex, o: TwistedOrientation) -> List[int]:
    """Generator indices of the canonical cycle of ``o``, in degree h(v_o).

    Expands the diagonal labels (a = 1 + x on label 0, b = x on label 1)
    into the monomial state basis: one term per choice of 1-or-x on each
    a-labelled circle.
    """
    d = cx.diagram
    v, labels = canonical_generator_labels(d, o)
    circles = cx.circles(v)
    free = [i for i, key in enumerate(circles) if labels[key] == 0]
    base = [1] * len(circles)
    terms = []
    for mask in range(1 << len(free)):
        state = list(base)
        for j, i in enumerate(free):
            state[i] = (mask >> j) & 1
        terms.append(cx.index_of(v, tuple(state)))
    return sorted(terms)


def canonical_degree(cx: CubeComplex, o: TwistedOrientation) -> int:
    """Homological degree of the canonical cycle of ``o``."""
    v = oriented_resolution(cx.diagram, o)
    return sum(v) - cx.n_minus


def _rows_from_index_sets(sets: Sequence[Sequence[int]], dim: int) -> BitMatrix:
    """Matrix whose rows are indicator vectors of the given index sets."""
    return BitMatrix.from_entries(
        len(sets), dim, ((r, i) for r, s in enumerate(sets) for i in s)
    )


def _boundary_rows(cx: CubeComplex, h: int) -> Optional[BitMatrix]:
    """Image of the incoming differential as a matrix of row vectors."""
    prev = cx.boundary(h - 1)
    if prev is None or prev.is_zero():
        return None
    return prev.transpose()


def _rank_modulo(rows: BitMatrix, modulo: Optional[BitMatrix]) -> int:
    """Rank of the row space of ``rows`` modulo another row space."""
    if modulo is None:
        return rows.rank()
    return rows.stack(modulo).rank() - modulo.rank()


def verify_canonical_cycles(cx: CubeComplex) -> Dict[int, List[List[int]]]:
    """Check the canonical classes are cycles, independent, and a basis.

    Returns the cycles grouped by homological degree.  Raises on any
    failure; with no twisted orientations the homology must vanish.
    """
    d = cx.diagram
    orientations = all_orientations(d)
    total_hom = sum(cx.homology().values())
    if not orientations:
        if total_hom != 0:
            raise DiagramError("homology must vanish without twisted orientations")
        return {}
    by_h: Dict[int, List[List[int]]] = {}
    for o in orientations:
        h = canonical_degree(cx, o)
        by_h.setdefault(h, []).append(canonical_cycle(cx, o))
    if total_hom != len(orientations):
        raise DiagramError("homology dimension differs from the orientation count")
    for h, cycles in by_h.items():
        dim = cx.dim(h)
        mat = cx.boundary(h)
        if mat is not None:
            cols = mat.transpose()  # rows of this are columns of the boundary
            for z in cycles:
                if cols.matvec_entries(z).any():
                    raise DiagramError("canonical chain is not a cycle")
        rows = _rows_from_index_sets(cycles, dim)
        if _rank_modulo(rows, _boundary_rows(cx, h)) != len(cycles):
            raise DiagramError("canonical classes are dependent in homology")
    return by_h


def filtered_image_rank(cx: CubeComplex, h: int, q: int) -> int:
    """Rank of H(F_q) -> H in degree ``h`` for the q-filtration."""
    dim = cx.dim(h)
    if dim == 0:
        return 0
    keep = [i for i in range(dim) if cx.q_of(*cx.state_at(h, i)) >= q]
    if not keep:
        return 0
    mat = cx.boundary(h)
    if mat is None:
        kernel_sets = [[c] for c in keep]
    else:
        sub_kernel = mat.select_columns(keep).kernel_basis()
        kernel_sets = [
            [keep[int(j)] for j in np.nonzero(sub_kernel.row_bits(r))[0]]
            for r in range(sub_kernel.nrows)
        ]
    if not kernel_sets:
        return 0
    rows = _rows_from_index_sets(kernel_sets, dim)
    return _rank_modulo(rows, _boundary_rows(cx, h))


def s_invariant(
    d: Diagram, orientation: Optional[TwistedOrientation] = None
) -> Tuple[int, int, int]:
    """(s_min, s_max, s) of a null homologous knot."""
    if not d.is_knot():
        raise DiagramError("the s-invariant is defined for knots only")
    cx = CubeComplex(d, orientation)
    qs = sorted(
        {cx.q_of(*cx.state_at(0, i)) for i in range(cx.dim(0))}, reverse=True
    )
    s_min = None
    s_max = None
    for q in qs:
        r = filtered_image_rank(cx, 0, q)
        if r >= 1 and s_max is None:
            s_max = q
        if r == 2:
            s_min = q
            break
    if s_min is None or s_max is None:
        raise DiagramError("knot homology in degree 0 has rank below 2")
    if s_max != s_min + 2:
        raise DiagramError(
            f"filtration gap violated: s_min={s_min}, s_max={s_max}"
        )
    return s_min, s_max, s_min + 1


def positive_formula(d: Diagram, o: TwistedOrientation) -> int:
    """s of a positive diagram from its oriented-resolution circle count."""
    n_plus, n_minus = writhe_counts(d, o)
    if n_minus:
        raise DiagramError("positive formula requires all crossings positive")
    v = oriented_resolution(d, o)
    k = len(d.resolution_circles(v))
    return -k + len(d.crossing_ids) + 1


def genus_bounds(s: int) -> Tuple[int, int]:
    """(unorientable, orientable) genus lower bounds from the s-invariant."""
    return abs(s), (abs(s) + 1) // 2


def double_cover_dims(d: Diagram) -> Tuple[int, int]:
    """(dim HBN of the diagram, dim HBN of its double cover).

    The cover dimension follows the standard sphere-side count, two to the
    number of components; the inequality dim(L) <= dim(cover) is asserted.
    """
    dim_l = sum(CubeComplex(d).homology().values())
    cover = d.double_cover()
    dim_cover = 2 ** len(cover.components())
    if dim_l > dim_cover:
        raise DiagramError("double cover dimension inequality failed")
    return dim_l, dim_cover


def hbn_report(d: Diagram, orientation: Optional[TwistedOrientation] = None) -> Dict:
    """Full invariant report as a JSON-ready dictionary."""
    cx = CubeComplex(d, orientation)
    hom = cx.homology()
    graded = cx.graded_homology()
    comps = d.components()
    report = {
        "schema": SCHEMA,
        "conventions": CONVENTIONS,
        "diagram_sha": d.sha(),
        "link_class": d.link_class(),
        "components": len(comps),
        "component_classes": d.component_classes(),
        "crossings": len(d.crossing_ids),
        "orientation_count": len(all_orientations(d)),
        "gradings_normalized": cx.normalized,
        "n_plus": cx.n_plus,
        "n_minus": cx.n_minus,
        "hbn_total": sum(hom.values()),
        "hbn_by_degree": {str(h): v for h, v in sorted(hom.items()) if v},
        "khovanov_poincare": _poincare(graded),
    }
    if d.is_knot() and cx.normalized:
        s_min, s_max, s = s_invariant(d, orientation)
        unor, orient = genus_bounds(s)
        report.update(
            {
                "s_min": s_min,
                "s_max": s_max,
                "s": s,
                "genus_bound_unorientable": unor,
                "genus_bound_orientable": orient,
            }
        )
    return report


def _poincare(graded: Dict[Tuple[int, int], int]) -> List[Dict[str, int]]:
    return [
        {"h": h, "q": q, "dim": dim}
        for (h, q), dim in sorted(graded.items())
        if dim
    ]
