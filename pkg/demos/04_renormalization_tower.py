"""Renormalization of the first-return map near the origin.

Each step drops two partial quotients of lam, rescales space by the
magnitude of the depth-one approximation error, and produces new parameters
whose first-return map agrees with the rescaled original on a shrinking
neighbourhood of the origin.  Quotient tails of even period make the tower
eventually periodic; the golden ratio is an exact fixed point.
"""

from mpmath import mp

from tce import TceParams, renorm_tower, renormalize, verify_conjugacy

FIXTURES = (
    ("golden (exact fixed point)",
     TceParams(("1", "0.5", "pi-2.5", "1"), (2, 1), "phi", (1, 1))),
    ("sqrt(2)-1 (period-one tail)",
     TceParams(("0.5", "pi/7", "pi/4", "17pi/28-0.5"), (2, 1), "sqrt2m1", (1, 1))),
    ("[0;1,2,3,4,...] tail of period four",
     TceParams(("1", "0.5", "pi-2.5", "1"), (2, 1), {"tail": [1, 2, 3, 4]}, (1, 1))),
)

for label, params in FIXTURES:
    print(label)
    steps = renorm_tower(params, 4)
    cumulative = mp.mpf(1)
    for k, step in enumerate(steps):
        cumulative *= step.scale_float()
        rep = verify_conjugacy(step, samples=30, seed=5 + k)
        print("  step %d: lam' head %-12s eta' = %d - %d*lam'  scale=%-12s "
              "cum=%-12s conjugacy max dev %.2e %s" % (
                  k,
                  step.kappa_out.lam.quotients(4),
                  step.kappa_out.p, step.kappa_out.q,
                  mp.nstr(step.scale_float(), 8),
                  mp.nstr(cumulative, 8),
                  rep["max_dev"],
                  "ok" if rep["pass"] else "FAIL"))
    print()

golden = FIXTURES[0][1]
step = renormalize(golden)
same = (step.kappa_out.lam == golden.lam and
        (step.kappa_out.p, step.kappa_out.q) == (golden.p, golden.q))
print("golden step reproduces its own parameters:", same)
print("so the golden return map is exactly self-similar: R(z) = R(s*z)/s with s = 1 - lam")
