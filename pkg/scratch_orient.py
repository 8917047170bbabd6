import sys

sys.path.insert(0, "src")
from rp3bn.diagram import Diagram, parse_diagram
from rp3bn.orient import (
    all_orientations,
    canonical_generator_labels,
    circle_labels,
    crossing_sign,
    orientation_exists,
    oriented_resolution,
    writhe_counts,
)

# two-pass unknot: one component, boundary 2, arcs 0 (pos0->pos1 through disk)
u2 = parse_diagram("""rp2diagram v1
boundary 4
endpoint 0 0
endpoint 1 0
endpoint 2 1
endpoint 3 1
""")
ors = all_orientations(u2)
print("u2 orientations:", [(o.bits, o.arrows) for o in ors])
assert len(ors) == 2
for o in ors:
    labels = circle_labels(u2, o, v=())
    print("  labels:", labels)
labs = sorted(circle_labels(u2, o, v=())[k] for o in ors for k in circle_labels(u2, o, v=()))
print("u2 label multiset over both orientations:", labs)
assert labs == [0, 1], labs

# local unknot: a single loop
u1 = parse_diagram("""rp2diagram v1
boundary 0
loop 0
""")
ors = all_orientations(u1)
assert len(ors) == 2
for o in ors:
    print("u1 labels:", circle_labels(u1, o, v=()))

# essential pair: no twisted orientation exists (components have odd passes)
ep = parse_diagram("""rp2diagram v1
boundary 4
crossing 0 0 1 2 3
endpoint 0 0
endpoint 1 1
endpoint 2 2
endpoint 3 3
""")
assert not orientation_exists(ep)
assert all_orientations(ep) == []
print("ep: no twisted orientation, as expected")

# right trefoil: braid closure, under-strand on the SE-NW diagonal
tr = Diagram(
    boundary=0,
    crossings={0: (5, 1, 0, 4), 1: (1, 3, 2, 0), 2: (3, 5, 4, 2)},
    endpoints={},
    loops=[],
)
print("trefoil components:", tr.components())
assert tr.is_knot()
ors = all_orientations(tr)
assert len(ors) == 2
for o in ors:
    signs = {c: crossing_sign(tr, o, c) for c in tr.crossing_ids}
    np, nm = writhe_counts(tr, o)
    print("right trefoil signs:", signs, "n+ =", np, "n- =", nm)
    assert signs == {0: 1, 1: 1, 2: 1}
    v = oriented_resolution(tr, o)
    print("  oriented resolution:", v)
    assert v == (0, 0, 0)
    labels = circle_labels(tr, o, v)
    print("  labels at oriented res:", labels)

# left trefoil: mirror image, all crossings negative
tl = tr.mirror()
ors = all_orientations(tl)
for o in ors:
    np, nm = writhe_counts(tl, o)
    assert (np, nm) == (0, 3), (np, nm)
    assert oriented_resolution(tl, o) == (1, 1, 1)
print("left trefoil: all negative, oriented res = (1,1,1)")
assert tl.mirror() == tr
print("mirror involution on canonical data: ok")

bits, labels = canonical_generator_labels(tr, all_orientations(tr)[0])
print("canonical generator:", bits, labels)
print("ALL ORIENT SMOKE TESTS PASSED")
