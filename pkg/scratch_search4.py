import itertools
import sys

sys.path.insert(0, "src")
from rp3bn.diagram import Diagram, DiagramError
from rp3bn.invariants import positive_formula, s_invariant
from rp3bn.orient import all_orientations, oriented_resolution, writhe_counts
from scratch_search3 import usual_resolution, raw_circle_count


def braid_caps_wall(n, word, caps, wall_order):
    """n-strand braid; cap listed end pairs, send the rest to the wall.

    Ends are named ("b", j) and ("t", j) for bottom/top of slot j.
    wall_order lists the uncapped ends in boundary position order.
    """
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

    def end_arc(e):
        kind, j = e
        return j if kind == "b" else cur[j]

    subs = {}
    for e1, e2 in caps:
        a1, a2 = end_arc(e1), end_arc(e2)
        if a1 == a2:
            raise DiagramError("cap closes a free loop; unsupported here")
        subs[max(a1, a2)] = min(a1, a2)
    crossings = {
        c: tuple(subs.get(a, a) for a in ports) for c, ports in crossings.items()
    }
    endpoints = {}
    for pos, e in enumerate(wall_order):
        a = end_arc(e)
        endpoints[pos] = subs.get(a, a)
    return Diagram(2 * len(wall_order) // 2, crossings, endpoints, [])


def search(n, gens, length):
    ends = [("b", j) for j in range(n)] + [("t", j) for j in range(n)]
    cap_choices = []
    if n == 4:
        cap_choices = [
            [(("t", 0), ("t", 1)), (("t", 2), ("t", 3))],
            [(("t", 0), ("t", 3)), (("t", 1), ("t", 2))],
            [(("b", 0), ("b", 1)), (("b", 2), ("b", 3))],
            [(("b", 0), ("b", 3)), (("b", 1), ("b", 2))],
            [(("t", 0), ("t", 1)), (("b", 0), ("b", 1))],
            [(("t", 0), ("t", 1)), (("b", 2), ("b", 3))],
            [(("t", 2), ("t", 3)), (("b", 0), ("b", 1))],
            [(("t", 2), ("t", 3)), (("b", 2), ("b", 3))],
            [(("t", 1), ("t", 2)), (("b", 1), ("b", 2))],
        ]
    elif n == 3:
        cap_choices = [
            [(("t", 0), ("t", 1))],
            [(("t", 1), ("t", 2))],
            [(("b", 0), ("b", 1))],
            [(("b", 1), ("b", 2))],
        ]
    hits = []
    seen = set()
    tried = 0
    for word in itertools.product(gens, repeat=length):
        for caps in cap_choices:
            capped = {e for pair in caps for e in pair}
            free = [e for e in ends if e not in capped]
            assert len(free) == 4
            for perm in itertools.permutations(free):
                tried += 1
                try:
                    d = braid_caps_wall(n, word, caps, perm)
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
                s = s_invariant(d, o)[2]
                hits.append((n, word, caps, perm, s, uk, d))
                print("HIT:", word, caps, "s =", s, "usual k =", uk)
    print("tried", tried, "unique", len(seen))
    return hits


all_hits = []
all_hits += search(3, [1, -1, 2, -2], 4)
all_hits += search(4, [1, -1, 2, -2, 3, -3], 4)
good = [h for h in all_hits if h[4] == 3 and h[5] == 3]
print()
print("hits:", len(all_hits), "full matches:", len(good))
for h in good[:3]:
    print(h[:6])
    print(h[6].serialize())
