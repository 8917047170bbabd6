import itertools
from rp3bn.builders import braid_closure
from rp3bn.chain import CubeComplex
from rp3bn.cobord import (
    BigonRetract, SurvivorMatch, r3_surgery, remove_crossings, smooth_crossing,
)

d = braid_closure((1, 2, 1, 2), 3)
print("crossings", d.crossings)
new, info = r3_surgery(d, 0, 0)
print("new crossings", new.crossings)
print("m_crossings", info["m_crossings"], "c_opp", info["c_opp"], "delta", info["delta"])
cm1, cm2 = info["m_crossings"]
d0, sm0 = smooth_crossing(d, info["c_opp"], info["delta"])
print("d0 crossings", d0.crossings, "expand", sm0["expand"])
sub0 = CubeComplex(d0)
ret0 = BigonRetract(sub0, cm1, cm2)
print("joins", ret0.joins, "e1 e2", ret0.e1, ret0.e2, "i1 i2", ret0.i1, ret0.i2)
s0, rem0 = remove_crossings(d0, [cm1, cm2], "strand")
print("s0 crossings", s0.crossings, "contract", rem0["contract"])
cs0 = CubeComplex(s0)
bits0 = {ret0.i1: 1 - ret0.joins[0], ret0.i2: 1 - ret0.joins[1]}
print("bits0", bits0)
# compare circles at every small vertex
amap = dict(rem0["contract"])
order = sorted(bits0)
def host_vertex(v_small):
    v = list(v_small)
    for i in order:
        v.insert(i, bits0[i])
    return tuple(v)
for v_small in itertools.product((0, 1), repeat=len(s0.crossing_ids)):
    vh = host_vertex(v_small)
    hc = sub0.circles(vh)
    sc = cs0.circles(v_small)
    mapped = [frozenset(amap.get(a, a) for a in cc) for cc in hc]
    print(v_small, "host", [sorted(c) for c in hc], "->", [sorted(c) for c in mapped], "small", [sorted(c) for c in sc])
