"""
Far tail of the simple shot-noise density by the saddle-point method.

The bilateral Laplace transform of W is exp(CIin(s)), which grows like
e^{2s}.  The saddle point s0 of -s x + CIin(s) sits near ln(x)/2, and
exp(Phi(s0)) / sqrt(2 pi Phi''(s0)) approximates f(x).  Because the
amplitude is bounded by 2, the density has a faint period-2 ripple that
the smooth saddle form cannot follow, so the ratio oscillates on its way to 1.
"""
import math

from shotnoise.hyperint import EXAMPLE
from shotnoise.inversion import stationary_density
from shotnoise.saddle import density_tail, find_saddle

print("   x     saddle        inversion     ratio")
for x in (3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0):
    a, b = density_tail(x), stationary_density(EXAMPLE, x)
    print(f"{x:5.1f} {a:.6e} {b:.6e} {a / b:8.5f}")

print("\n      x           s0      s0/(ln(x)/2)   log10 f")
for x in (1e1, 1e2, 1e3, 1e4, 1e6, 1e9):
    r = find_saddle(x)
    print(f"{x:9.0e} {r.s0:10.5f} {r.s0 / (0.5 * math.log(x)):12.5f} {r.log_f / math.log(10):12.2f}")
