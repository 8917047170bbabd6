import itertools
import sys

sys.path.insert(0, "src")
from rp3bn.diagram import Diagram, DiagramError
from rp3bn.invariants import positive_formula, s_invariant
from rp3bn.orient import all_orientations, oriented_resolution, writhe_counts


def multi_wall_plat(n, word):
    """Wall closure of an n-strand braid: bottom j glues to top n-1-j."""
    cur = list(range(n))
    nxt = n
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
    endpoints = {0: cur[0]}
    for j in range(n):
        endpoints[1 + j] = j
    for j in range(1, n):
        endpoints[2 * n - j] = cur[j]
    return Diagram(2 * n, crossings, endpoints, [])


def usual_resolution(d):
    """Oriented-smoothing vector for an honest orientation of the components."""
    direction = {}  # arc -> exit site (site the arrow points at)
    sites_of = d.arc_sites()
    seen = set()
    for start_arc in d.arcs():
        if start_arc in seen:
            continue
        arc, end = start_arc, 0
        while arc not in seen:
            seen.add(arc)
            exit_site = sites_of[arc][1 - end]
            direction[arc] = exit_site
            entry = d.strand_next(exit_site)
            arc, end = d.site_end(entry)
    v = []
    for c in d.crossing_ids:
        ports = d.crossings[c]
        bit = None
        for b in (0, 1):
            ok = True
            for pa, pb in d.smoothing_pairs(b):
                ins = sum(
                    1 for p in (pa, pb) if direction[ports[p]] == ("x", c, p)
                )
                if ins != 1:
                    ok = False
            if ok:
                bit = b
                break
        assert bit is not None, (c, ports)
        v.append(bit)
    return tuple(v)


def raw_circle_count(d, v):
    """Circles of a resolution, allowing essential (odd-pass) circles."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for arc, sites in d.arc_sites().items():
        union((arc, 0), (arc, 1))
    for ci, c in enumerate(d.crossing_ids):
        for pa, pb in d.smoothing_pairs(v[ci]):
            union(d.site_end(("x", c, pa)), d.site_end(("x", c, pb)))
    for pos in range(d.m):
        union(d.site_end(("b", pos)), d.site_end(("b", pos + d.m)))
    return len({find((a, 0)) for a in d.arc_sites()})


gens = [g * s for g in (1, 2, 3) for s in (1, -1)]
hits = []
seen = set()
for word in itertools.product(gens, repeat=4):
    try:
        d = multi_wall_plat(4, word)
    except DiagramError:
        continue
    if d.sha() in seen:
        continue
    seen.add(d.sha())
    if not d.is_knot():
        continue
    ors = all_orientations(d)
    if not ors:
        continue
    o = ors[0]
    np_, nm = writhe_counts(d, o)
    if nm:
        continue
    v = oriented_resolution(d, o)
    if len(d.resolution_circles(v)) != 2:
        continue
    uv = usual_resolution(d)
    uk = raw_circle_count(d, uv)
    smin, smax, s = s_invariant(d, o)
    pf = positive_formula(d, o)
    hits.append((word, s, uk, d))
    print("HIT:", word, "s =", s, "formula =", pf, "usual circles =", uk,
          "usual res =", uv, "twisted res =", v)

print()
print("hits:", len(hits))
good = [h for h in hits if h[1] == 3 and h[2] == 3]
print("full matches (s=3, usual=3):", len(good))
if good:
    w, s, uk, d = good[0]
    print(d.serialize())
