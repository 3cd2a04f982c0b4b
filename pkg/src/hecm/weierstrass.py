"""x-line arithmetic on ``kappa*y^2 = x^3 + a2*x^2 + a4*x + a6`` and stage 2.

Points are projective pairs ``(x, z)`` of residues; ``(c, 0)`` with ``c != 0``
is the identity.  No formula here references kappa, so a curve and its
quadratic twist share every result.
"""

from dataclasses import dataclass
from math import gcd

from sympy import primerange

from hecm.modring import FactorSignal, Ring

IDENTITY = (1, 0)
GCD_BATCH = 64


@dataclass(frozen=True)
class CubicCurveXZ:
    a2: int
    a4: int
    a6: int
    n: int

    @classmethod
    def from_model(cls, model, ring):
        return cls(ring(model.a2), ring(model.a4), ring(model.a6), ring.n)

    def f(self, x):
        return (((x + self.a2) * x + self.a4) * x + self.a6) % self.n

    def discriminant(self):
        """Discriminant of the monic cubic, mod n."""
        b, c, d = self.a2, self.a4, self.a6
        return (b * b * c * c - 4 * c ** 3 - 4 * b ** 3 * d - 27 * d * d + 18 * b * c * d) % self.n


def xz_equal(P, Q, n):
    """Projective equality; the invalid pair (0:0) equals nothing."""
    if not (P[0] % n or P[1] % n) or not (Q[0] % n or Q[1] % n):
        return False
    return (P[0] * Q[1] - P[1] * Q[0]) % n == 0


def is_identity(P, n):
    return P[1] % n == 0


def xz_double(P, E):
    n = E.n
    X, Z = P
    XX, ZZ = X * X % n, Z * Z % n
    t = (XX - E.a4 * ZZ) % n
    x2 = (t * t - 4 * E.a6 * ZZ * Z % n * (2 * X + E.a2 * Z)) % n
    g = (X * XX + E.a2 * XX * Z + E.a4 * X * ZZ + E.a6 * ZZ * Z) % n
    return x2, 4 * Z * g % n


def xz_diffadd(P, Q, D, E):
    """``x(P + Q)`` from ``x(P)``, ``x(Q)`` and ``x(P - Q)``."""
    n = E.n
    X1, Z1 = P
    X2, Z2 = Q
    xD, zD = D
    ZZ = Z1 * Z2 % n
    XX = X1 * X2 % n
    cross = (X1 * Z2 + X2 * Z1) % n
    delta = (X1 * Z2 - X2 * Z1) % n
    dd = delta * delta % n
    s = (2 * cross * (XX + E.a4 * ZZ) + 4 * E.a2 * XX * ZZ + 4 * E.a6 * ZZ * ZZ) % n
    return (zD * s - xD * dd) % n, zD * dd % n


def xz_ladder(P, m, E):
    """``x([m]P)`` by the Montgomery ladder."""
    n = E.n
    if m < 0:
        m = -m
    if m == 0 or P[1] % n == 0:
        return IDENTITY
    P = (P[0] % n, P[1] % n)
    if m == 1:
        return P
    R0, R1 = P, xz_double(P, E)
    for i in range(m.bit_length() - 2, -1, -1):
        if (m >> i) & 1:
            R0, R1 = xz_diffadd(R1, R0, P, E), xz_double(R1, E)
        else:
            R0, R1 = xz_double(R0, E), xz_diffadd(R1, R0, P, E)
    return R0


def is_identity_revealing(P, n):
    """FactorSignal carrying ``gcd(z, n)`` when that gcd exceeds 1, else None."""
    g = gcd(P[1] % n, n)
    if g > 1:
        return FactorSignal(g, n)
    return None


def stage2(Q, E, B1, B2, n):
    """Standard continuation: look for a single prime ``pi`` in (B1, B2] with ``[pi]Q = O``.

    The running product of z-coordinates is tested every ``GCD_BATCH``
    primes.  A batch whose gcd is all of n is replayed prime by prime to
    look for a proper factor that got masked.
    """
    if B2 < B1:
        raise ValueError("B2 must be at least B1")
    if B2 == B1:
        return None
    primes = list(primerange(B1 + 1, B2 + 1))
    for start in range(0, len(primes), GCD_BATCH):
        zs = [xz_ladder(Q, p, E)[1] for p in primes[start:start + GCD_BATCH]]
        acc = 1
        for z in zs:
            acc = acc * z % n
        g = gcd(acc, n)
        if g == 1:
            continue
        if g < n:
            return FactorSignal(g, n)
        return _bisect_batch(zs, n)
    return None


def _bisect_batch(zs, n):
    if len(zs) == 1:
        return FactorSignal(gcd(zs[0], n), n)
    half = len(zs) // 2
    for part in (zs[:half], zs[half:]):
        acc = 1
        for z in part:
            acc = acc * z % n
        g = gcd(acc, n)
        if 1 < g < n:
            return FactorSignal(g, n)
        if g == n:
            return _bisect_batch(part, n)
    return FactorSignal(n, n)


@dataclass(frozen=True)
class ShortWeierstrass:
    A: int
    B: int
    x: int
    y: int
    n: int

    def handoff_text(self):
        return f"A={self.A}\nB={self.B}\nx={self.x}\ny={self.y}\nn={self.n}\n"

    def as_dict(self):
        return {"A": str(self.A), "B": str(self.B), "x": str(self.x), "y": str(self.y), "n": str(self.n)}


def to_short_weierstrass(P, E, n=None):
    """Depress the cubic and rescale so the image point sits at ``(x/D, 1/D)``.

    Scaling by ``D = f(x')`` turns ``D*y^2 = g(x)`` into a plain short model
    ``y^2 = x^3 + A x + B``; the point's y-coordinate is ``1/D``.
    """
    n = E.n if n is None else n
    ring = Ring(n)
    x = P[0] * ring.inv(P[1]) % n
    inv3 = ring.inv(3)
    a2, a4, a6 = E.a2, E.a4, E.a6
    a4p = (a4 - a2 * a2 * inv3) % n
    a6p = (a6 - a2 * a4 * inv3 + 2 * a2 ** 3 * ring.inv(27)) % n
    xp = (x + a2 * inv3) % n
    D = (xp ** 3 + a4p * xp + a6p) % n
    inv_d = ring.inv(D)
    A = a4p * inv_d * inv_d % n
    B = a6p * pow(inv_d, 3, n) % n
    return ShortWeierstrass(A, B, xp * inv_d % n, inv_d, n)


def on_short_curve(sw):
    n = sw.n
    return (sw.x ** 3 + sw.A * sw.x + sw.B - sw.y * sw.y) % n == 0
