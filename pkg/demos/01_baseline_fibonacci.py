"""Baseline dynamics of the golden-ratio cone exchange.

The orbit of the origin lives on the real line, where the map reduces to a
two-interval exchange.  With lam the golden ratio and eta = 1 - lam, the
orbit returns near zero at Fibonacci times, and at the return time h_m the
orbit value is exactly the m-th continued-fraction error Fib_{m+1}*lam - Fib_m.
"""

from mpmath import mp

from tce import TceParams, baseline_orbit, closed_return_time, error_term, get_baseline

params = TceParams(("1", "0.5", "pi-2.5", "1"), (2, 1), "phi", (1, 1))

print("first steps of the origin's orbit (exact coefficients b*lam - a):")
for state in baseline_orbit(params, 12):
    print("  t=%2d  value = %2d*lam - %2d = %10s" % (
        state.t, state.b + params.q, state.a + params.p,
        mp.nstr(state.value.to_float(64), 8)))

print("\nclosed-form return times h_m = (q_m - 1) + (p_m - 1) + 1:")
h = [closed_return_time(params, (m, 0)) for m in range(15)]
print("  " + ", ".join(str(v) for v in h))
print("  (each is one less than a Fibonacci number; h_m = h_{m-1} + h_{m-2} + 1)")

print("\norbit value at each return time vs. the continued-fraction error:")
orbit = get_baseline(params)
for m in range(2, 12):
    t = closed_return_time(params, (m, 0))
    exact_match = (orbit.value(t) - error_term(params.lam, m, 0)).is_zero
    print("  m=%2d  t=%5d  orbit value == error term: %s" % (m, t, exact_match))
