import itertools
from rp3bn.builders import (
    braid_closure, curl_unknot, loop_unknot, trefoil, twist_wall_knot,
    wall_plat_closure, wall_unknot,
)
from rp3bn.chain import CubeComplex
from rp3bn.cobord import (
    ChainMap, birth_map, death_map, evaluate_movie, frame_map, parse_movie,
    rmove_map, rmove_sites, saddle_map, verify_rmove_classes,
)
from rp3bn.invariants import hbn_report

def full_check(cm, name):
    cm.verify()
    cm.check_degrees()
    verify_rmove_classes(cm)
    print("ok", name, "dim src", [cm.source.dim(h) for h in cm.source.h_range])

# birth then death of the same loop is zero (counit of the unit)
d = wall_unknot()
b = birth_map(d)
loop = b.frame.data  # not the arc; get from target diagram
new_loop = [a for a in b.target_diagram.loops][0]
dth = death_map(b.target_diagram, new_loop)
comp = dth.compose(b)
assert all(not any(v for v in comp.cols.get(h, {}).values()) for h in comp.cols), "unit then counit must vanish"
print("ok birth-death composite is zero")

# saddle pinching a loop acts as the coproduct
d = loop_unknot()
lp = d.loops[0]
sm = saddle_map(d, (lp, 0, lp, 1))
sm.verify(); sm.check_degrees()
print("ok loop pinch saddle", sm.degree)

# R1 on the wall unknot, all four variants
d = wall_unknot()
for move in rmove_sites(d, "I-add"):
    cm = rmove_map(d, move, check="full")
    full_check(cm, f"I-add {move}")
    back = rmove_map(cm.target_diagram, ("I", "remove", cm.target_diagram.crossing_ids[0]), check="full")
    full_check(back, "I-remove")
    rt = back.compose(cm)
    ident = ChainMap.identity(cm.source)
    assert rt.cols == ident.cols, "remove after add must be the identity"
print("ok r1 round trips")

# R2 on the wall unknot
d = wall_unknot()
sites2 = rmove_sites(d, "II-add")
print("II-add sites on wall unknot:", len(sites2))
for move in sites2[:4]:
    cm = rmove_map(d, move, check="full")
    full_check(cm, f"II-add {move}")
    c1, c2 = sorted(cm.target_diagram.crossing_ids)
    back = rmove_map(cm.target_diagram, ("II", "remove", c1, c2), check="full")
    full_check(back, "II-remove")

# R3 on the braid trefoil
d = braid_closure((1, 2, 1, 2), 3)
print("trefoil-ish braid crossings", d.n_crossings, "report", hbn_report(d)["hbn_total"])
sites3 = rmove_sites(d, "III")
print("III sites:", sites3)
for move in sites3:
    cm = rmove_map(d, move, check="full")
    full_check(cm, f"III {move}")

# R4 / R5 on wall diagrams
d = twist_wall_knot(1)
print("twist knot crossings", d.n_crossings)
s4 = rmove_sites(d, "IV")
print("IV sites:", s4)
for move in s4:
    cm = rmove_map(d, move, check="full")
    full_check(cm, f"IV {move}")

d = wall_unknot()
s5 = rmove_sites(d, "V-add")
print("V-add sites:", len(s5))
for move in s5[:4]:
    cm = rmove_map(d, move, check="full")
    full_check(cm, f"V-add {move}")
    rem = rmove_sites(cm.target_diagram, "V-remove")
    assert rem, "added cap must be removable"
    back = rmove_map(cm.target_diagram, rem[0], check="full")
    full_check(back, "V-remove")
print("all smoke checks passed")
