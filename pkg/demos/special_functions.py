"""
Special functions behind the example amplitude X = cos(pi V) + Delta.

Its characteristic function is the product cos(s) J0(s), which is also the
hypergeometric function 2F3(1/4, 3/4; 1/2, 1/2, 1; -s^2).  The iterated
integrals CJi^(n) of that function carry the transform of the stationary
density, so we tabulate them here: near zero from their series, far out
from the termwise-integrated Hankel expansion, and both in the overlap.
"""
import math

import numpy as np
from scipy.special import j0

from shotnoise.hyperint import EXAMPLE, cji, cji_family, integration_constants, iterated_expansion
from shotnoise.specfun import EULER_GAMMA, pfq

print("2F3(-s^2) against cos(s) J0(s)")
for s in (0.5, 2.0, 5.0, 9.0):
    print(f"  s={s:4.1f}  pFq={pfq(EXAMPLE, -s * s): .15f}  cos*J0={math.cos(s) * j0(s): .15f}")

m = integration_constants(EXAMPLE).m
print("\nintegration constants")
print(f"  m1 = {m[0]:.15f}   ln2 - gamma = {math.log(2) - EULER_GAMMA:.15f}")
print(f"  m2 = {m[1]:.15f}   pi^2/8      = {math.pi ** 2 / 8:.15f}")

print("\nCJi^(n): series vs large-x expansion in the overlap")
for n in (1, 2, 3):
    e = iterated_expansion(EXAMPLE, n)
    for x in (15.0, 25.0, 40.0):
        a, b = cji_family(n, x), float(e(x))
        print(f"  n={n} x={x:4.0f}  series={a: .12e}  expansion={b: .12e}  diff={abs(a - b):.1e}")

print("\nthe short form (4 - 1/(6x))/sqrt(pi x) follows 2 CJi^(2), not CJi^(2):")
for x in (20.0, 40.0, 80.0):
    short = (4 - 1 / (6 * x)) / math.sqrt(math.pi * x)
    print(f"  x={x:4.0f}  short={short:.8f}  2 CJi2={2 * cji(2, x):.8f}")

xs = np.linspace(0.1, 10, 5)
print("\nCJi(x) = ln2 - gamma - ln x + CJin(x)")
print("  " + "  ".join(f"{cji_family(1, x):+.6f}" for x in xs))
