from rp3bn.builders import braid_closure
from rp3bn.cobord import r3_surgery, r1_remove_surgery, transported_orientations
from rp3bn.orient import all_orientations

d = braid_closure((1, 2, 1, 2), 3)
new, _ = r3_surgery(d, 3, 1)
print("new:", new.crossings)
new2, info = r1_remove_surgery(new, 1)
print("new2:", new2.crossings, "loops", new2.loops)
print("trace:", info["trace"])
print("orients new:")
for o in all_orientations(new):
    print("  bits", o.bits, "arrows", dict(sorted(o.arrows.items())))
print("orients new2:")
for o in all_orientations(new2):
    print("  bits", o.bits, "arrows", dict(sorted(o.arrows.items())))
for o in all_orientations(new):
    got = transported_orientations(new, o, new2, info["trace"])
    print("transport of", o.bits, "->", [t.bits for t in got])
