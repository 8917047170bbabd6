from rp3bn.builders import braid_closure
from rp3bn.cobord import r3_surgery
from rp3bn.orient import all_orientations, circle_labels, oriented_resolution

d = braid_closure((1, 2, 1, 2), 3)
new, info = r3_surgery(d, 3, 1)

def dump(diag, tag):
    for o in all_orientations(diag):
        v = oriented_resolution(diag, o)
        labels = circle_labels(diag, o, v)
        geo = diag.cover_geometry(v)
        parts = []
        for c in geo.circles:
            parts.append(f"{sorted(c.base_key)} depth={c.depth} lif={c.left_is_far}")
        print(tag, "o", o.bits, "v", v, "labels",
              {tuple(sorted(k)): l for k, l in labels.items()})
        for p in sorted(set(parts)):
            print("   ", p)

dump(d, "src")
dump(new, "tgt")
