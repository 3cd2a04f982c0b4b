# coding: utf-8

# # Splitting 4816415081 with one genus-2 curve
#
# This walks through a single trial by hand: build the curve from (s, u, v),
# run stage 1 on the Kummer surface, send the result to the two elliptic
# curves and finish with stage 2 on each of them.

# In[1]:

from fractions import Fraction

from hecm.curvegen import CurveParams, build_curve_system
from hecm.driver import hecm_stage1
from hecm.modring import Ring
from hecm.multiplier import lcm_multiplier
from hecm.oracle import ec_point_order, elliptic_images
from hecm.weierstrass import CubicCurveXZ, stage2, to_short_weierstrass

n = 4816415081


# # The curve
#
# The parameters are s = 1/2 and the point (u, v) = (2, 9) on the Jacobi quartic.

# In[2]:

cs = build_curve_system(CurveParams(Fraction(1, 2), Fraction(2), Fraction(9)))
print("lambda, mu, nu =", cs.rosenhain.lam, cs.rosenhain.mu, cs.rosenhain.nu)
print("theta constants:", [str(c) for c in cs.kummer.theta])
print("initial point:  ", cs.point)
print("fits a word:    ", cs.single_word)


# # Stage 1
#
# With B1 = 25 the multiplier is lcm(1, ..., 25).

# In[3]:

k = lcm_multiplier(25)
print("k =", k.k, "(", k.bit_length, "bits )")

x1, x2 = hecm_stage1(n, k, cs)
for name, P in (("E1", x1), ("E2", x2)):
    print(name, "x =", P[0] * pow(P[1], -1, n) % n)


# Neither z-coordinate shares a factor with n, so stage 1 alone finds nothing.
# The brute-force oracle shows why: modulo 83003 the images of the starting
# point have orders with a prime above 25 left over.

# In[4]:

p = 83003
for E, P in zip((cs.e1, cs.e2), elliptic_images(cs, p)):
    print("order mod", p, "=", ec_point_order(E, P, p))


# # Stage 2
#
# The leftover prime on E2 is 73, inside (25, 200]; on E1 it is 631, outside.

# In[5]:

ring = Ring(n)
for name, P, model in (("E1", x1, cs.e1), ("E2", x2, cs.e2)):
    sig = stage2(P, CubicCurveXZ.from_model(model, ring), 25, 200, n)
    print(name, "->", "nothing" if sig is None else f"factor {sig.g}, cofactor {n // sig.g}")


# # Handing off to other software
#
# A short Weierstrass model and point for E2, ready for an external stage 2.

# In[6]:

print(to_short_weierstrass(x2, CubicCurveXZ.from_model(cs.e2, ring)).handoff_text())
