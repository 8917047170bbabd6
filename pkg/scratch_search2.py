import itertools
import sys

sys.path.insert(0, "src")
from rp3bn import builders
from rp3bn.diagram import DiagramError
from rp3bn.invariants import s_invariant
from rp3bn.orient import all_orientations, oriented_resolution, writhe_counts


def candidates():
    for word in itertools.product((1, -1), repeat=4):
        yield ("braid", word, lambda w=word: builders.braid_wall_closure(w))
    comps = [
        (4,), (3, 1), (1, 3), (2, 2), (2, 1, 1), (1, 2, 1), (1, 1, 2),
        (1, 1, 1, 1),
    ]
    for comp in comps:
        for signs in itertools.product((1, -1), repeat=len(comp)):
            tw = tuple(c * s for c, s in zip(comp, signs))
            yield ("rational", tw, lambda t=tw: builders.rational_wall_closure(t))


for kind, tag, make in candidates():
    try:
        d = make()
    except DiagramError as e:
        print(kind, tag, "INVALID", e)
        continue
    knot = d.is_knot()
    ors = all_orientations(d)
    row = [kind, tag, "knot" if knot else f"{len(d.components())}comp",
           f"{len(ors)}or"]
    if knot and ors:
        o = ors[0]
        np_, nm = writhe_counts(d, o)
        v = oriented_resolution(d, o)
        k = len(d.resolution_circles(v))
        row += [f"n=({np_},{nm})", f"k={k}"]
    print(*row)
