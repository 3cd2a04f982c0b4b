"""Kummer surface arithmetic modulo n.

Points are 4-tuples of residues ``(X, Y, Z, T)``.  Doubling and
pseudo-addition follow the squared-theta formulas: a Hadamard transform,
squaring (or a cross product), scaling by precomputed constants, and again.
The ladder keeps the difference of its two running points equal to the
starting point, whose inverted coordinates are therefore fixed constants.
"""

from math import gcd

from hecm.modring import FactorSignal, fits_word
from hecm.multiplier import ladder_bits


class ZeroOrbit(ArithmeticError):
    """The ladder produced the all-zero tuple, which is not a projective point."""


def proj_equal(P, Q, n):
    """Projective equality via vanishing of all 2x2 cross products."""
    return all((P[i] * Q[j] - P[j] * Q[i]) % n == 0 for i in range(4) for j in range(i + 1, 4))


def kummer_lhs_rhs(P, K, n):
    """Both sides of the surface equation, reduced mod n."""
    def r(x):
        return x.numerator * pow(x.denominator, -1, n) % n

    X, Y, Z, T = P
    al, be, ga, de = (r(x) for x in K.theta)
    Ep, F, G, H = r(K.Eprime), r(K.F), r(K.G), r(K.H)
    lhs = 4 * Ep * Ep * al * be * ga * de * X * Y * Z * T
    sigma = (X * X + Y * Y + Z * Z + T * T - F * (X * T + Y * Z)
             - G * (X * Z + Y * T) - H * (X * Y + Z * T))
    return lhs % n, sigma * sigma % n


def on_surface(P, K, p):
    lhs, rhs = kummer_lhs_rhs(P, K, p)
    return lhs == rhs


def _hadamard(ring, P):
    X, Y, Z, T = P
    add, sub = ring.add, ring.sub
    s1, s2 = add(X, Y), add(Z, T)
    d1, d2 = sub(X, Y), sub(Z, T)
    return add(s1, s2), sub(s1, s2), add(d1, d2), sub(d1, d2)


class LadderContext:
    """Constants for doubling and for pseudo-adding against a fixed difference.

    ``inv_theta`` and ``inv_hadamard`` are integer tuples proportional to
    ``(1/alpha : ... : 1/delta)`` and ``(1/A : ... : 1/D)``.  ``inv_point`` is
    proportional to the inverted coordinates of the difference point; it is
    computed mod n (which may raise FactorSignal) when not supplied.
    """

    def __init__(self, ring, inv_theta, inv_hadamard, point, inv_point=None, single_word=False):
        self.ring = ring
        n = ring.n
        self.single_word = single_word
        for c in tuple(inv_theta) + tuple(inv_hadamard):
            g = gcd(c % n, n)
            if g != 1:
                raise FactorSignal(g, n)
        consts_fit = all(fits_word(c) for c in tuple(inv_theta) + tuple(inv_hadamard))
        self.inv_theta = ring.register(*inv_theta)
        self.inv_hadamard = ring.register(*inv_hadamard)
        # a word-size violation in single-word mode downgrades to full multiplications
        self._const_mul = ring.mul if (single_word and not consts_fit) else ring.mul_const

        self.point = tuple(x % n for x in point)
        if inv_point is None:
            inv = [ring.inv(x) for x in self.point]
            point_fits = False
        else:
            for x in self.point:
                g = gcd(x, n)
                if g != 1:
                    raise FactorSignal(g, n)
            inv = [x % n for x in inv_point]
            if not proj_equal([a * b % n for a, b in zip(inv, self.point)], (1, 1, 1, 1), n):
                raise ValueError("inv_point is not proportional to the inverted point")
            point_fits = all(fits_word(c) for c in inv_point)
        self.inv_point = ring.register(*inv)
        self._point_mul = ring.mul_const if (single_word and point_fits) else ring.mul

    @classmethod
    def from_curve(cls, cs, ring, single_word=False, point=None):
        K = cs.kummer
        if point is None:
            return cls(ring, K.inv_theta, K.inv_hadamard, cs.point, cs.inv_point, single_word)
        return cls(ring, K.inv_theta, K.inv_hadamard, point, None, single_word)

    @property
    def counter(self):
        return self.ring.counter


def double(P, ctx):
    """``[2]P``: costs exactly 8S + 8d."""
    ring, cm = ctx.ring, ctx._const_mul
    h = _hadamard(ring, P)
    h = [cm(ring.sqr(x), c) for x, c in zip(h, ctx.inv_hadamard)]
    h = _hadamard(ring, h)
    return tuple(cm(ring.sqr(x), c) for x, c in zip(h, ctx.inv_theta))


def pseudo_add(P, Q, ctx):
    """``P + Q`` given ``P - Q`` equal to the context's fixed point.

    Costs 4M + 4S + 4d plus four multiplications by the inverted difference
    (d in single-word mode, M otherwise).
    """
    ring, cm = ctx.ring, ctx._const_mul
    a = _hadamard(ring, P)
    b = _hadamard(ring, Q)
    h = [cm(ring.mul(x, y), c) for x, y, c in zip(a, b, ctx.inv_hadamard)]
    h = _hadamard(ring, h)
    return tuple(ctx._point_mul(ring.sqr(x), c) for x, c in zip(h, ctx.inv_point))


def ladder_mul(P0, k, ctx, trace=None):
    """``[k]P0`` by the binary Lucas chain with fixed difference ``P0``.

    ``ctx`` must have been built for ``P0``.  If ``trace`` is a list, every
    intermediate point is appended to it.
    """
    if isinstance(k, int):
        kk = k
    else:
        kk = k.k
    if kk == 1:
        return tuple(P0)
    if kk < 1:
        raise ValueError("multiplier must be positive")
    if kk == 2:
        return double(P0, ctx)
    Pm, Pp = tuple(P0), double(P0, ctx)
    if trace is not None:
        trace.extend((Pm, Pp))
    for bit in ladder_bits(kk):
        Q = pseudo_add(Pp, Pm, ctx)
        if bit:
            Pp, Pm = double(Pp, ctx), Q
        else:
            Pm, Pp = double(Pm, ctx), Q
        if trace is not None:
            trace.extend((Pm, Pp))
    if not any(Pm):
        raise ZeroOrbit("ladder reached the zero tuple")
    return Pm


def normalize(P, ring):
    """Scale so that the last invertible coordinate is 1."""
    n = ring.n
    for x in reversed(P):
        x %= n
        if x == 0:
            continue
        g = gcd(x, n)
        if g != 1:
            raise FactorSignal(g, n)
        inv = ring.inv(x)
        return tuple(c * inv % n for c in P)
    raise ZeroOrbit("all coordinates vanish")


def theta_point(K, n):
    """The image ``(alpha : beta : gamma : delta)`` of the zero divisor, mod n."""
    return tuple(c % n for c in _clear_theta(K))


def _clear_theta(K):
    from hecm.curvegen import clear_denominators
    return clear_denominators(K.theta)
