import itertools
from rp3bn.builders import braid_closure
from rp3bn.chain import CubeComplex
from rp3bn.cobord import _stable_pairing, RMoveVerificationError, r3_surgery

d = braid_closure((1, 2, 1, 2), 3)
for site in [(0, 0), (1, 0), (3, 1), (5, 1)]:
    new, info = r3_surgery(d, *site)
    cm1, cm2 = info["m_crossings"]
    c_opp, delta = info["c_opp"], info["delta"]
    src, tgt = CubeComplex(d), CubeComplex(new)
    i0 = d.crossing_ids.index(c_opp)
    im1, im2 = d.crossing_ids.index(cm1), d.crossing_ids.index(cm2)
    stable = set(d.arcs()) & set(new.arcs())
    def key(cc):
        return frozenset(cc & stable)
    def perm_ok(perm):
        for v in itertools.product((0, 1), repeat=4):
            if v[i0] == delta:
                continue
            try:
                _stable_pairing(src.circles(v), tgt.circles(perm(v)), key, key)
            except RMoveVerificationError:
                return False
        return True
    def pswap(v):
        w = list(v)
        w[im1], w[im2] = w[im2], w[im1]
        return tuple(w)
    print(site, "delta", delta, "m", (cm1, cm2), "c_opp", c_opp,
          "| swap ok:", perm_ok(pswap), "identity ok:", perm_ok(lambda v: v))
