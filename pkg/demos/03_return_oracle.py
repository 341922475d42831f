"""Closed-form first returns against the brute-force oracle.

For points whose exchanged image sits in an atom of the return partition,
the first-return time is a closed formula in the semiconvergents of lam,
and the return map is the exchange plus an exact horizontal shift.  Here we
sample atom interiors across three parameter families and compare the
closed forms against direct orbit iteration.
"""

import random

from mpmath import mp

from tce import (
    TceParams,
    closed_return_map,
    closed_return_time,
    first_return,
    sample_atom_preimage,
    smn_region,
    threshold_index,
)

FIXTURES = (
    ("golden lam, eta = 1 - lam",
     TceParams(("1", "0.5", "pi-2.5", "1"), (2, 1), "phi", (1, 1))),
    ("sqrt(2)-1, eta = 1 - lam",
     TceParams(("0.5", "pi/7", "pi/4", "17pi/28-0.5"), (2, 1), "sqrt2m1", (1, 1))),
    ("[0;1,2,1,2,...], eta = 2 - 3*lam",
     TceParams(("1", "0.5", "pi-2.5", "1"), (2, 1), {"tail": [1, 2]}, (2, 3))),
)

rng = random.Random(1)
for label, params in FIXTURES:
    print(label)
    cf = params.lam
    w0 = cf.w_index(*threshold_index(params))
    print("  threshold index: %s" % (threshold_index(params),))
    for w in range(w0 + 1, w0 + 6):
        idx = cf.w_inverse(w)
        region = smn_region(params, idx)
        z, _ = sample_atom_preimage(params, region, rng)
        ret = first_return(params, z)
        closed = closed_return_map(params, z, atom=region)
        dev = mp.hypot(ret.landed.re - closed.landed.re, ret.landed.im - closed.landed.im)
        print("  atom (%d,%d): h_closed=%4d h_iter=%4d  |closed - iterated| = %s" % (
            idx.m, idx.n, closed.h, ret.h, mp.nstr(dev, 3)))
    print()
