"""Orbit-cloud exports for external plotting.

Reproduces the orbit-sampling protocol of the gallery figures at a reduced
point budget: sample starts uniformly in a box over the baseline, drop a
transient prefix, and write the remaining iterates as CSV.  Feed the output
to any plotter (one colour per point_id).
"""

import json
import os

from tce.cli import main as cli_main

OUT_DIR = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT_DIR, exist_ok=True)

CONFIGS = {
    # asymmetric cones, lam = sqrt(2)/2, eta = 1 - lam
    "asymmetric": {
        "alpha": ["0.5", "pi/7", "pi/4", "17pi/28-0.5"],
        "tau": [2, 1],
        "lambda": {"prefix": [1], "tail": [2]},
        "eta": {"p": 1, "q": 1},
        "box": [-1, 0.7071, 0, 1],
    },
    # golden-ratio parameters with equal outer cones
    "golden": {
        "alpha": ["pi/2-0.6", "0.5", "0.7", "pi/2-0.6"],
        "tau": [2, 1],
        "lambda": "phi",
        "eta": {"p": 1, "q": 1},
        "box": [-1, 0.618, 0, 1.1],
    },
}

for name, config in CONFIGS.items():
    cfg_path = os.path.join(OUT_DIR, "orbit_config_%s.json" % name)
    with open(cfg_path, "w") as fh:
        json.dump(config, fh)
    out_path = os.path.join(OUT_DIR, "orbit_%s.csv" % name)
    code = cli_main(["--config", cfg_path, "--seed", "12", "--out", out_path,
                     "orbit", "--points", "120", "--steps", "400", "--skip", "200"])
    n_rows = sum(1 for _ in open(out_path)) - 1
    print("%s: exit %d, %d orbit rows -> %s" % (name, code, n_rows, out_path))
