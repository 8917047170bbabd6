from rp3bn.builders import braid_closure
from rp3bn.chain import CubeComplex
from rp3bn.cobord import (rmove_map, verify_rmove_classes, transported_orientations,
                          r3_surgery, same_class)
from rp3bn.orient import all_orientations
from rp3bn.invariants import canonical_cycle, canonical_degree

d = braid_closure((1, 2, 1, 2), 3)
for site in [(0, 0), (1, 0), (3, 1), (5, 1)]:
    new, info = r3_surgery(d, *site)
    cm = rmove_map(d, ("III",) + site, check="light")
    src, tgt = cm.source, cm.target
    cands = list(all_orientations(new))
    for o in all_orientations(d):
        h = canonical_degree(src, o)
        img = cm.apply(h, canonical_cycle(src, o))
        landing = [i for i, c in enumerate(cands)
                   if canonical_degree(tgt, c) == h
                   and same_class(tgt, h, img, canonical_cycle(tgt, c))]
        trans = transported_orientations(d, o, new, cm.trace)
        tidx = [i for i, c in enumerate(cands) if any(c == t for t in trans)]
        tag = "OK" if landing == tidx else "MISMATCH"
        print(site, "o.bits", o.bits, "lands", landing, "transported", tidx, tag)
    curls = [c for c, t in new.crossings.items()
             if any(t[i] == t[(i + 1) % 4] for i in range(4))]
    for c in curls:
        try:
            cm1 = rmove_map(new, ("I", "remove", c), check="light")
            verify_rmove_classes(cm1)
            print(site, "curl", c, "R1-remove classes OK")
        except Exception as e:
            print(site, "curl", c, "R1-remove classes FAIL:", type(e).__name__, e)
