import itertools
from rp3bn.builders import braid_closure
from rp3bn.chain import CubeComplex
from rp3bn.cobord import (
    BigonRetract, SurvivorMatch, _compose_expand, _swap_sides,
    r3_surgery, remove_crossings, smooth_crossing,
)

d = braid_closure((1, 2, 1, 2), 3)
new, info = r3_surgery(d, 0, 0)
cm1, cm2 = info["m_crossings"]
c_opp, delta = info["c_opp"], info["delta"]
print("delta", delta, "c_opp", c_opp, "m", cm1, cm2)
d0, sm0 = smooth_crossing(d, c_opp, delta)
d1, sm1 = smooth_crossing(new, c_opp, delta)
print("d0", d0.crossings, "d1", d1.crossings)
sub0, sub1 = CubeComplex(d0), CubeComplex(d1)
ret0 = BigonRetract(sub0, cm1, cm2)
ret1 = BigonRetract(sub1, cm1, cm2)
print("sides0", ret0.e1, ret0.e2, "joins0", ret0.joins)
print("sides1", ret1.e1, ret1.e2, "joins1", ret1.joins)
s0, rem0 = remove_crossings(d0, [cm1, cm2], "strand")
s1, rem1 = remove_crossings(d1, [cm1, cm2], "strand")
print("s0", s0.crossings, "s1", s1.crossings)
cs0, cs1 = CubeComplex(s0), CubeComplex(s1)
stable = set(d.arcs()) & set(new.arcs())
print("stable", sorted(stable))
exp0 = _compose_expand(rem0["expand"], sm0["expand"])
exp1 = _compose_expand(rem1["expand"], sm1["expand"])
print("exp0", {k: sorted(v) for k, v in exp0.items()})
print("exp1", {k: sorted(v) for k, v in exp1.items()})
for v in itertools.product((0, 1), repeat=len(s0.crossing_ids)):
    def keyed(cs, exp):
        out = []
        for cc in cs.circles(v):
            k = set()
            for a in cc:
                k |= exp.get(a, frozenset((a,)))
            out.append((sorted(cc), sorted(k & stable)))
        return out
    print(v, "cs0", keyed(cs0, exp0), "cs1", keyed(cs1, exp1))
