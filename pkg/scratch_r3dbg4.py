from rp3bn.builders import braid_closure
from rp3bn.cobord import rmove_map, transported_orientations, same_class
from rp3bn.invariants import canonical_cycle, canonical_degree
from rp3bn.orient import all_orientations

d = braid_closure((1, 2, 1, 2), 3)
cm = rmove_map(d, ("III", 3, 1), check="full")
new = cm.target_diagram
for o in all_orientations(d):
    h = canonical_degree(cm.source, o)
    img = cm.apply(h, canonical_cycle(cm.source, o))
    cands = transported_orientations(d, o, new, cm.trace)
    print("orientation", o.bits, "h", h, "cands", [c.bits for c in cands])
    for o2 in all_orientations(new):
        h2 = canonical_degree(cm.target, o2)
        if h2 != h:
            print("   tgt", o2.bits, "h2", h2, "(degree differs)")
            continue
        hit = same_class(cm.target, h, img, canonical_cycle(cm.target, o2))
        print("   tgt", o2.bits, "h2", h2, "match", hit)
