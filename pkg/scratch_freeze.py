"""Freeze catalog fixtures and the manifest of expected invariants."""

import hashlib
import json
import pathlib
import sys

sys.path.insert(0, "src")
from rp3bn import catalog
from rp3bn.chain import CubeComplex
from rp3bn.invariants import s_invariant
from rp3bn.orient import all_orientations

out = pathlib.Path("src/rp3bn/fixtures")
out.mkdir(exist_ok=True)

manifest = {}
for name in catalog.names():
    d = catalog.build(name)
    text = d.serialize()
    fname = f"{name}.rp2pd"
    (out / fname).write_text(text)
    comps = d.components()
    classes = d.component_classes()
    cx = CubeComplex(d) if all(c == 0 for c in classes) or True else None
    hom = cx.homology()
    entry = {
        "file": fname,
        "sha256": hashlib.sha256(text.encode()).hexdigest(),
        "crossings": d.n_crossings(),
        "components": len(comps),
        "component_classes": classes,
        "orientations": len(all_orientations(d)),
        "hbn_total": sum(hom.values()),
        "hbn_by_degree": {str(h): v for h, v in hom.items() if v},
    }
    if len(comps) == 1 and all(c == 0 for c in classes):
        smin, smax, s = s_invariant(d)
        entry.update({"s": s, "s_min": smin, "s_max": smax})
    manifest[name] = entry
    print(name, {k: v for k, v in entry.items() if k not in ("sha256", "file")})

(out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
print("wrote", len(manifest), "fixtures")
