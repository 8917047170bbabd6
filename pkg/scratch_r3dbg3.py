import itertools
from rp3bn.builders import braid_closure
from rp3bn.chain import CubeComplex
from rp3bn.cobord import r3_surgery

d = braid_closure((1, 2, 1, 2), 3)
new, info = r3_surgery(d, 0, 0)
c_opp, delta = info["c_opp"], info["delta"]
src, tgt = CubeComplex(d), CubeComplex(new)
i0 = d.crossing_ids.index(c_opp)
stable = set(d.arcs()) & set(new.arcs())
print("stable", sorted(stable), "delta", delta, "i0", i0)
print("d", d.crossings)
print("new", new.crossings)
for v in itertools.product((0, 1), repeat=4):
    if v[i0] == delta:
        continue
    a = [(sorted(cc), sorted(cc & stable)) for cc in src.circles(v)]
    b = [(sorted(cc), sorted(cc & stable)) for cc in tgt.circles(v)]
    flag = ""
    ka = sorted(tuple(k) for _, k in a)
    kb = sorted(tuple(k) for _, k in b)
    if ka != kb:
        flag = "  <-- MISMATCH"
    print(v, "src", a, "tgt", b, flag)
