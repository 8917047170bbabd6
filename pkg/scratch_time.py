import sys
import time

sys.path.insert(0, "src")
from rp3bn.chain import CubeComplex
from rp3bn.diagram import Diagram


def twist_wall_knot(n):
    word = (1,) * (2 * n + 1) + (-2,)
    cur = [0, 1, 2]
    nxt = 3
    crossings = {}
    for cid, g in enumerate(word):
        j = abs(g) - 1
        li, ri = cur[j], cur[j + 1]
        lo, ro = nxt, nxt + 1
        nxt += 2
        if g > 0:
            crossings[cid] = (ri, ro, lo, li)
        else:
            crossings[cid] = (li, ri, ro, lo)
        cur[j], cur[j + 1] = lo, ro
    subs = {2: 1}
    crossings = {
        c: tuple(subs.get(a, a) for a in ports) for c, ports in crossings.items()
    }
    endpoints = {0: 0, 1: cur[2], 2: cur[1], 3: cur[0]}
    return Diagram(4, crossings, endpoints, [])


for n in (1, 2, 3, 4):
    d = twist_wall_knot(n)
    t0 = time.time()
    cx = CubeComplex(d)
    dims = [cx.dim(h) for h in cx.h_range]
    t1 = time.time()
    hom = cx.homology()
    t2 = time.time()
    print(
        f"n={n}: crossings={d.n_crossings()} total={sum(dims)} max={max(dims)} "
        f"build={t1 - t0:.1f}s homology={t2 - t1:.1f}s "
        f"hom_total={sum(hom.values())}"
    )
