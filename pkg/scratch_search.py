import itertools
import sys

sys.path.insert(0, "src")
from rp3bn import builders
from rp3bn.chain import CubeComplex
from rp3bn.diagram import Diagram, DiagramError
from rp3bn.invariants import (
    double_cover_dims,
    hbn_report,
    positive_formula,
    s_invariant,
    verify_canonical_cycles,
)
from rp3bn.orient import all_orientations, oriented_resolution, writhe_counts

# -- builder smoke -----------------------------------------------------------
u1 = builders.loop_unknot()
assert s_invariant(u1) == (-1, 1, 0)
u2 = builders.wall_unknot()
assert s_invariant(u2) == (-1, 1, 0)
print("unknots: s = 0 (both)")

for sign in (1, -1):
    c = builders.curl_unknot(sign)
    o = all_orientations(c)[0]
    assert writhe_counts(c, o) == ((1, 0) if sign > 0 else (0, 1))
    assert s_invariant(c) == (-1, 1, 0), s_invariant(c)
    if sign > 0:
        assert positive_formula(c, o) == 0
print("curls: valid, s = 0, formula agrees")

tr = builders.trefoil(right=True)
print("trefoil s:", s_invariant(tr))
assert s_invariant(tr)[2] == 2
assert positive_formula(tr, all_orientations(tr)[0]) == 2
tl = builders.trefoil(right=False)
assert s_invariant(tl)[2] == -2
print("trefoils: s = +-2, formula agrees")

hopf = builders.hopf_link()
rep = hbn_report(hopf)
print("hopf dims:", rep["hbn_total"], rep["hbn_by_degree"])
assert rep["hbn_total"] == 4

sp = builders.split_wall_pair()
rep = hbn_report(sp)
print("split pair dims:", rep["hbn_total"])
assert rep["hbn_total"] == 4

ep = builders.essential_pair()
rep = hbn_report(ep)
assert rep["hbn_total"] == 0 and rep["orientation_count"] == 0
print("essential pair: dim 0, no orientations")

for d, want in [(u1, (2, 4)), (ep, (0, 4)), (tr, (2, 4))]:
    got = double_cover_dims(d)
    print("cover dims:", got)
    assert got == want, (got, want)

for d in (u1, u2, tr, tl, hopf, sp, ep):
    verify_canonical_cycles(CubeComplex(d))
print("canonical cycle verification passed on smoke set")

# -- search for the 4-crossing positive wall knot ----------------------------
def candidates():
    for word in itertools.product((1, -1), repeat=4):
        yield ("braid", word, lambda w=word: builders.braid_wall_closure(w))
    comps = [
        (4,), (3, 1), (1, 3), (2, 2), (2, 1, 1), (1, 2, 1), (1, 1, 2),
        (1, 1, 1, 1),
    ]
    for comp in comps:
        for signs in itertools.product((1, -1), repeat=len(comp)):
            tw = tuple(c * s for c, s in zip(comp, signs))
            yield ("rational", tw, lambda t=tw: builders.rational_wall_closure(t))


hits = []
seen = set()
for kind, tag, make in candidates():
    try:
        d = make()
    except DiagramError as e:
        print("invalid:", kind, tag, e)
        continue
    if d.sha() in seen:
        continue
    seen.add(d.sha())
    if not d.is_knot():
        continue
    ors = all_orientations(d)
    if not ors:
        continue
    for o in ors:
        np_, nm = writhe_counts(d, o)
        if nm:
            continue
        v = oriented_resolution(d, o)
        k = len(d.resolution_circles(v))
        if k != 2:
            continue
        smin, smax, s = s_invariant(d, o)
        hits.append((kind, tag, s, d))
        print("HIT:", kind, tag, "n+ =", np_, "k =", k, "s =", s)
        break

print()
print("total 4-crossing positive 2-circle hits:", len(hits))
for kind, tag, s, d in hits:
    assert s == 3, (kind, tag, s)
    print("---", kind, tag, "s=3")
    print(d.serialize())
