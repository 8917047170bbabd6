from rp3bn.builders import braid_closure
from rp3bn.cobord import r3_surgery
from rp3bn.orient import all_orientations

d = braid_closure((1, 2, 1, 2), 3)
new, info = r3_surgery(d, 3, 1)
print("d  ", d.crossings)
print("new", new.crossings)
print("trace", info["trace"])
o = all_orientations(d)[0]
print("src arrows", o.arrows)
for cand in all_orientations(new):
    print("cand", cand.bits, cand.arrows)
    for na, oa, oe, ne in info["trace"]:
        outward_old = o.arrows[oa] == (oe == 0)
        outward_new = cand.arrows[na] == (ne == 0)
        print("   entry", (na, oa, oe, ne), "old-out", outward_old, "new-out", outward_new,
              "OK" if outward_old == outward_new else "KILL")
