"""A cascade of periodic points sliding down the golden atom stack.

The first-return map acts on each atom as a rotation plus a shift, so the
rotation's fixed point, when it lands inside the atom, is periodic.  The
exact self-similarity of the golden return map then produces a whole
sequence of periodic points in smaller and smaller atoms; their orbits trace
circles of shrinking radius around the origin's orbit, so they pile up on
the baseline segment [-1, lam].
"""

from mpmath import mp

from tce import TceParams, detect_period, periodic_cascade
from tce.cones import Point

params = TceParams(("1", "0.5", "pi-2.5", "1"), (2, 1), "phi", (1, 1))

# fixed point of the rotation branch acting on the largest atom
with mp.workprec(288):
    zeta_c = -params.eta_f / (1 - mp.exp(1j * params.theta[1]))
    zeta = Point(zeta_c.real, zeta_c.imag)

print("seed point: %s + %si" % (mp.nstr(zeta.re, 10), mp.nstr(zeta.im, 10)))
print("detected return-map period:", detect_period(params, zeta))
print()
print("  n  atom   return time   height     max excursion   orbit-circle dev")
for row in periodic_cascade(params, zeta, 8):
    print("  %d  S_%-3d  %11d   %.3e   %.3e       %.2e" % (
        row["n"], row["atom"], row["return_time"], row["height"],
        row["max_excursion"], row["split_radius_dev"]))
print()
print("heights shrink geometrically while the return-length orbit prefix")
print("stays within the baseline segment: the periodic orbits accumulate on it.")
