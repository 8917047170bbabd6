from rp3bn.builders import wall_unknot
from rp3bn.chain import CubeComplex
from rp3bn.cobord import BigonRetract, SurvivorMatch, r2_add_surgery, rmove_sites
from rp3bn.diagram import Diagram

d = wall_unknot()
print("arcs", d.arcs(), "loops", d.loops, "endpoints", d.endpoints, "crossings", d.crossings)
sites = rmove_sites(d, "II-add")
print("sites", sites)
move = sites[0]
_, _, x, ex, y, ey, over = move
new, info = r2_add_surgery(d, x, ex, y, ey, over)
print("new crossings", new.crossings)
print("new endpoints", new.endpoints)
print("info", {k: v for k, v in info.items() if k != "trace"})
host = CubeComplex(new)
src = CubeComplex(d)
c1, c2 = info["crossings"]
ret = BigonRetract(host, c1, c2)
print("joins", ret.joins, "i_alpha", ret.i_alpha, "i_star", ret.i_star, "e1 e2", ret.e1, ret.e2)
x1, xm, x2 = info["x_pieces"]
y1, ym, y2 = info["y_pieces"]
arc_map = {x1: x, xm: x, x2: x, y1: y, ym: y, y2: y}
bits = {ret.i1: 1 - ret.joins[0], ret.i2: 1 - ret.joins[1]}
ident = SurvivorMatch(src, host, bits, arc_map, {})
for h in src.h_range:
    for (v, st) in src.generators(h):
        g = ident.to_host(v, st)
        print("small", v, st, "-> host", g, "survivor?", ret.is_survivor(*g))
        proj = ret.project(*g)
        print("   project:", proj)
