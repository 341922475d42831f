"""Atlas of the first-return partition.

Exports the parallelogram atoms of the return map (plus the golden-only
X and Y pieces) as JSON polygons, for any external plotter, and prints the
exact anchor abscissas of each atom's defining cones.
"""

import json
import os

from tce import SemiIndex, TceParams, golden_x, golden_y, smn_region
from tce.cli import main as cli_main

OUT_DIR = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT_DIR, exist_ok=True)

golden = TceParams(("1", "0.5", "pi-2.5", "1"), (2, 1), "phi", (1, 1))

print("golden atoms: interval constraints in the two edge functionals")
print("  %-8s %-28s %-28s" % ("atom", "s0-range", "s1-range"))
for maker in (golden_y, golden_x):
    region = maker(golden)
    print("  %-8s lo=%s hi=%s | lo=%s hi=%s" % (
        region.kind,
        region.s0.lo and region.s0.lo.to_json(), region.s0.hi and region.s0.hi.to_json(),
        region.s1.lo and region.s1.lo.to_json(), region.s1.hi and region.s1.hi.to_json()))
for m in range(6):
    region = smn_region(golden, SemiIndex(m, 0))
    anchors = ", ".join("%s+%s*lam" % (a.a, a.b) for a in region.cone_anchors)
    print("  S[%d,0]   cone anchors: %s" % (m, anchors))

print("\nwriting polygon atlases via the command-line exporter...")
for name, config in (
    ("golden", None),
    ("asymmetric", {
        "alpha": ["0.5", "pi/7", "pi/4", "17pi/28-0.5"],
        "tau": [2, 1],
        "lambda": {"prefix": [1], "tail": [2]},
        "eta": {"p": 1, "q": 1},
    }),
):
    out_path = os.path.join(OUT_DIR, "partition_%s.json" % name)
    args = ["--out", out_path, "partition", "--max-w", "8"]
    if config is not None:
        cfg_path = os.path.join(OUT_DIR, "config_%s.json" % name)
        with open(cfg_path, "w") as fh:
            json.dump(config, fh)
        args = ["--config", cfg_path] + args
    cli_main(args)
    doc = json.load(open(out_path))
    print("  %s: %d atoms, %d exchange-preimage pieces -> %s" % (
        name, len(doc["atoms"]), len(doc["preimages"]), out_path))
