"""Brute-force ground truth over small prime fields.

Everything here is deliberately naive: point counts by enumerating x,
square roots by table lookup, Kummer points by scanning a projective line.
It is meant for primes below 2**20 and for tests, never for factoring.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import factorint

from hecm.kummer import LadderContext, double, ladder_mul, on_surface, proj_equal, theta_point
from hecm.modring import Ring
from hecm.morphism import Morphism, MumfordDivisor, ReducedElliptic, theta_forms
from hecm.weierstrass import CubicCurveXZ, xz_ladder

MAX_PRIME = 2 ** 20


class SingularCurve(ValueError):
    """The cubic has a repeated root modulo p."""


class OracleExhausted(RuntimeError):
    """Sampling gave up after too many retries."""


def _red(x, p):
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ZeroDivisionError(f"{p} divides the denominator of {x}")
    return x.numerator * pow(x.denominator, -1, p) % p


def cubic_coeffs(E, p):
    """``(a2, a4, a6)`` mod p from an EllipticModel, a CubicCurveXZ or a tuple."""
    if hasattr(E, "kappa_factor"):
        return tuple(_red(c, p) for c in (E.a2, E.a4, E.a6))
    if isinstance(E, CubicCurveXZ):
        return E.a2 % p, E.a4 % p, E.a6 % p
    return tuple(_red(c, p) for c in E)


def _check_p(p):
    if p >= MAX_PRIME:
        raise ValueError(f"oracle primes must be below {MAX_PRIME}")


def square_table(p):
    """Boolean array: ``tab[t]`` is True when t is a non-zero square mod p."""
    tab = np.zeros(p, dtype=bool)
    y = np.arange(1, p, dtype=np.int64)
    tab[y * y % p] = True
    return tab


def quadratic_character(values, p, tab=None):
    if tab is None:
        tab = square_table(p)
    values = np.asarray(values, dtype=np.int64) % p
    return np.where(values == 0, 0, np.where(tab[values], 1, -1))


def _cubic_values(a2, a4, a6, xs, p):
    return (((xs + a2) % p * xs % p + a4) % p * xs % p + a6) % p


def _discriminant(a2, a4, a6, p):
    b, c, d = a2, a4, a6
    return (b * b * c * c - 4 * c ** 3 - 4 * b ** 3 * d - 27 * d * d + 18 * b * c * d) % p


def ec_group_order(E, kappa, p):
    """``#{kappa*y^2 = cubic(x)}`` over F_p, identity included."""
    _check_p(p)
    a2, a4, a6 = cubic_coeffs(E, p)
    if _discriminant(a2, a4, a6, p) == 0:
        raise SingularCurve(f"repeated root mod {p}")
    kappa = _red(kappa, p)
    if kappa == 0:
        raise ValueError("kappa must be non-zero mod p")
    xs = np.arange(p, dtype=np.int64)
    chi = quadratic_character(_cubic_values(a2, a4, a6, xs, p) * kappa % p, p)
    return int(1 + p + chi.sum())


def non_residue(p):
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise ValueError(f"no non-residue mod {p}")


def has_four_torsion(E, kappa, p):
    """Whether some point of ``kappa*y^2 = cubic`` doubles to a non-zero 2-torsion point."""
    _check_p(p)
    a2, a4, a6 = cubic_coeffs(E, p)
    kappa = _red(kappa, p)
    xs = np.arange(p, dtype=np.int64)
    f = _cubic_values(a2, a4, a6, xs, p)
    on_curve = quadratic_character(f * kappa % p, p) == 1
    x2 = xs * xs % p
    num = (x2 * x2 % p - 2 * a4 * x2 % p - 8 * a6 % p * xs % p + a4 * a4 - 4 * a2 * a6) % p
    den = 4 * f % p
    roots = [int(r) for r in xs[f == 0]]
    hit = np.zeros(p, dtype=bool)
    for r in roots:
        hit |= (num - r * den) % p == 0
    return bool(np.any(on_curve & (den != 0) & hit))


# -- orders ------------------------------------------------------------------------------

def point_kappa(E, x, p):
    """A twist constant for which affine x lifts to a point: ``cubic(x)`` itself."""
    a2, a4, a6 = cubic_coeffs(E, p)
    return (((x + a2) * x + a4) * x + a6) % p


def ec_point_order(E, P, p, kappa=None):
    """Order of the x-line point ``P = (x, z)``.

    The group is the one containing a lift of P: ``kappa`` defaults to
    ``cubic(x)``, which is right for both the curve and its twist.
    """
    a2, a4, a6 = cubic_coeffs(E, p)
    curve = CubicCurveXZ(a2, a4, a6, p)
    X, Z = P[0] % p, P[1] % p
    if Z == 0:
        return 1
    x = X * pow(Z, -1, p) % p
    fx = curve.f(x)
    if fx == 0:
        return 2
    if kappa is None:
        kappa = fx
    N = ec_group_order((a2, a4, a6), kappa, p)
    m = N
    for ell, e in factorint(N).items():
        for _ in range(e):
            if xz_ladder((x, 1), m // ell, curve)[1] % p == 0:
                m //= ell
            else:
                break
    if xz_ladder((x, 1), m, curve)[1] % p:
        raise AssertionError("point does not lie on the expected group")
    return m


def elliptic_images(cs, p, point=None):
    """x-line images of a Kummer point on E1 and E2 modulo p."""
    ring = Ring(p)
    morph = Morphism(cs, ring)
    P = tuple(ring(c) for c in (cs.point if point is None else point))
    return morph.images(P)


def jacobian_exponent_check(cs, p, m, point=None):
    """Whether ``[m]P`` reaches the image of zero, cross-checked on the elliptic side.

    Returns the Kummer verdict: does the ladder land on
    ``(alpha:beta:gamma:delta)``.  The map to E1 x E2 has a kernel of
    2-torsion, so the elliptic side pins the answer down only up to a
    factor 2: if ``[m]P`` is zero both image orders divide m, and if both
    image orders divide m then ``[2m]P`` is zero.  A violation of either
    implication is an AssertionError.
    """
    ring = Ring(p)
    P0 = tuple(ring(c) for c in (cs.point if point is None else point))
    ctx = LadderContext.from_curve(cs, ring, point=None if point is None else P0)
    zero = theta_point(cs.kummer, p)
    Q = ladder_mul(P0, m, ctx)
    kummer_says = proj_equal(Q, zero, p)
    x1, x2 = elliptic_images(cs, p, P0)
    o1 = ec_point_order(cs.e1, x1, p)
    o2 = ec_point_order(cs.e2, x2, p)
    elliptic_says = m % o1 == 0 and m % o2 == 0
    if kummer_says and not elliptic_says:
        raise AssertionError(f"Kummer ladder reached zero at m={m} but image orders are {o1}, {o2}")
    if elliptic_says and not kummer_says and not proj_equal(double(Q, ctx), zero, p):
        raise AssertionError(f"image orders {o1}, {o2} divide m={m} but [2m]P is not zero")
    return kummer_says


# -- divisors -----------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorSample:
    divisor: MumfordDivisor
    kummer_point: tuple
    points: tuple       # affine (x, y) on kappa*y^2 = f(x)
    kappa: int          # 1 for the curve, a non-residue for its twist


def _sqrt_table(p):
    root = {}
    for y in range(p):
        root.setdefault(y * y % p, y)
    return root


def _poly_eval(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _nullspace_mod_p(rows, p):
    """Basis of the right nullspace of an integer matrix over F_p."""
    A = [[x % p for x in row] for row in rows]
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                t = A[i][c]
                A[i] = [(x - t * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = -A[i][free] % p
        basis.append(tuple(v))
    return basis


def _u_constraints(morph, u1, u0, p):
    """Rows of the linear conditions on (X, Y, Z, T) that fix u."""
    tb, lam = morph.tb, morph.lam
    rows_a, rows_b = [], []
    for j in range(4):
        e = [0, 0, 0, 0]
        e[j] = 1
        f = theta_forms(tuple(e), tb)
        den = tb.th10 * f[16]
        ca = tb.th8 * f[14] * lam - den * u0
        cb = tb.th5 * f[13] * (lam - 1) - den * ((u1 + u0 + 1) % p)
        rows_a.append(ca.c)
        rows_b.append(cb.c)
    # transpose: each tower component gives one linear equation
    return [list(col) for col in zip(*rows_a)] + [list(col) for col in zip(*rows_b)]


def kummer_points_for_u(cs, p, u1, u0):
    """All surface points whose theta forms give Mumford polynomial ``x^2 + u1 x + u0``."""
    ring = Ring(p)
    morph = Morphism(cs, ring)
    basis = _u_constraints(morph, u1, u0, p)
    null = _nullspace_mod_p(basis, p)
    if len(null) != 2:
        return []
    N1, N2 = null
    found = []
    for a, b in [(1, t) for t in range(p)] + [(0, 1)]:
        P = tuple((a * x + b * y) % p for x, y in zip(N1, N2))
        if any(P) and on_surface(P, cs.kummer, p):
            found.append(P)
    return found


def mumford_from_points(pts, kappa, f_coeffs, p):
    """``(u, v^2 data)`` for the divisor of two affine points on ``kappa*y^2 = f``.

    With ``V`` the line through the points, ``v^2 = kappa * V^2`` satisfies
    ``u | v^2 - f``.
    """
    (x1, y1), (x2, y2) = pts
    u1 = -(x1 + x2) % p
    u0 = x1 * x2 % p
    s = (y2 - y1) * pow(x2 - x1, -1, p) % p
    V1, V0 = s, (y1 - s * x1) % p
    return MumfordDivisor(2, u1, u0, kappa * V0 * V0 % p, kappa * V1 * V1 % p, kappa * V0 * V1 % p)


def divisor_sample(cs, p, seed, twist=None, max_tries=200):
    """A random degree-2 divisor with its Kummer point.

    Two distinct F_p-points are drawn on the curve (or its twist), the
    Mumford data are formed directly from them, and the Kummer point is the
    surface point on the line cut out by the u-conditions whose recovered
    ``v0^2`` agrees.
    """
    rng = random.Random(seed)
    f = [_red(c, p) for c in cs.rosenhain.f_coeffs]
    roots = _sqrt_table(p)
    nr = non_residue(p)
    for _ in range(max_tries):
        kappa = nr if (twist if twist is not None else rng.random() < 0.5) else 1
        inv_kappa = pow(kappa, -1, p)
        pts = []
        while len(pts) < 2:
            x = rng.randrange(p)
            y2 = _poly_eval(f, x, p) * inv_kappa % p
            if y2 == 0 or y2 not in roots or any(x == q[0] for q in pts):
                continue
            y = roots[y2]
            pts.append((x, y if rng.random() < 0.5 else p - y))
        D = mumford_from_points(pts, kappa, f, p)
        K = kummer_point_for(cs, p, D)
        if K is not None:
            return DivisorSample(D, K, tuple(pts), kappa)
    raise OracleExhausted(f"no Kummer point found after {max_tries} tries mod {p}")


def kummer_point_for(cs, p, D):
    """The surface point on the u-line of D whose recovered ``v0^2`` matches, or None."""
    morph = Morphism(cs, Ring(p))
    for K in kummer_points_for_u(cs, p, D.u1, D.u0):
        got = morph.to_mumford(K)
        if got.degree == 2 and (got.u1, got.u0, got.v0sq) == (D.u1, D.u0, D.v0sq):
            return K
    return None


# -- elliptic images of points, computed directly --------------------------------------

def image_sum_x(cs, which, pts, kappa, p):
    """Affine x of ``phi(P1) + phi(P2)`` on E1 or E2, or None for the identity.

    Each point is sent through ``x -> ((x - a)/(x - b))^2`` and
    ``y -> w*y/(x - b)^3`` and the images are added with the chord rule on
    ``K*Y^2 = cubic(X)``, ``K = kappa * (-q*mu*(mu - 1))``.
    """
    E = ReducedElliptic(cs.e1 if which == 0 else cs.e2, Ring(p))
    model = E.model
    a, b = E.a, E.b
    w = _red(model.w, p)
    K = kappa * _red(model.kappa_factor, p) % p
    imgs = []
    for x, y in pts:
        if (x - b) % p == 0:
            continue                     # lands on the identity
        t = pow(x - b, -1, p)
        X = (x - a) * t % p
        imgs.append((X * X % p, w * y * t ** 3 % p))
    return _affine_sum(imgs, E.a2, E.a4, K, p)


def _affine_sum(pts, a2, a4, K, p):
    acc = None
    for P in pts:
        acc = _affine_add(acc, P, a2, a4, K, p)
    return None if acc is None else acc[0]


def _affine_add(P, Q, a2, a4, K, p):
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        # tangent on K*y^2 = x^3 + a2 x^2 + a4 x + a6
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4) * pow(2 * K * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (K * lam * lam - a2 - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return x3, y3


def two_adic_valuation(n):
    if n == 0:
        raise ValueError("the 2-adic valuation of 0 is infinite")
    return (n & -n).bit_length() - 1


# -- torsion statistics --------------------------------------------------------------

@dataclass
class TorsionStats:
    samples: int
    mean_v2: dict           # p mod 4 -> mean 2-adic valuation
    counts: dict            # p mod 4 -> number of samples
    table_agreement: float  # fraction of samples where the table predicts 4-torsion correctly
    disagreements: list

    def as_dict(self):
        return {
            "samples": self.samples,
            "mean_v2": {f"p=={k} mod 4": round(v, 4) for k, v in sorted(self.mean_v2.items())},
            "counts": {f"p=={k} mod 4": v for k, v in sorted(self.counts.items())},
            "table_agreement": self.table_agreement,
            "disagreements": self.disagreements,
        }


def sample_statistics(cs, p):
    """v2 of the four group orders (E1, E2 on the curve and its twist) and 4-torsion flags.

    The curve side uses the twist constant ``-q*mu*(mu - 1)`` carried over
    from ``y^2 = f(x)``; the twist side multiplies it by a non-residue.
    """
    nr = non_residue(p)
    v2, torsion = [], []
    for E in (cs.e1, cs.e2):
        kc = _red(E.kappa_factor, p)
        if kc == 0:
            raise ZeroDivisionError("degenerate twist constant")
        for kappa in (kc, kc * nr % p):
            v2.append(two_adic_valuation(ec_group_order(E, kappa, p)))
            torsion.append(has_four_torsion(E, kappa, p))
    return v2, torsion


def torsion_statistics(samples, pmin, pmax, seed, strategy=None):
    """Mean 2-adic valuation of the elliptic group orders over random (curve, p).

    Each sample is one curve from the seeded stream and one random prime in
    ``[pmin, pmax]``.  Curve and twist are equally likely, so each sample
    contributes the mean over the four orders.  The 4-torsion table is
    checked against brute force on both E1 and E2.
    """
    from sympy import nextprime

    from hecm.curvegen import MULTIPLES, BadReduction, curve_stream, torsion_class

    rng = random.Random(seed)
    sums, counts = {1: 0.0, 3: 0.0}, {1: 0, 3: 0}
    agree, disagreements, taken = 0, [], 0
    for cs in curve_stream(seed, strategy or MULTIPLES):
        if taken >= samples:
            break
        p = nextprime(rng.randrange(pmin - 1, pmax))
        if p > pmax:
            continue
        try:
            v2, torsion = sample_statistics(cs, p)
            tc = torsion_class(cs.params.s, cs.params.u, p)
        except (ZeroDivisionError, SingularCurve, BadReduction):
            continue
        taken += 1
        sums[p % 4] += sum(v2) / 4
        counts[p % 4] += 1
        want = (tc.curve_has_4torsion, tc.twist_has_4torsion)
        if want == tuple(torsion[:2]) == tuple(torsion[2:]):
            agree += 1
        else:
            disagreements.append({"curve": cs.params.as_strings(), "p": p,
                                  "table": list(want), "brute_force": torsion})
    means = {k: sums[k] / counts[k] for k in counts if counts[k]}
    return TorsionStats(taken, means, counts, agree / taken if taken else 0.0, disagreements)


# -- constructed factoring instances ---------------------------------------------------

@dataclass(frozen=True)
class SmoothCase:
    cs: object
    p: int          # the prime where an image order divides lcm(1..B1)
    q: int          # a cofactor prime where neither image order does
    orders_p: tuple
    orders_q: tuple

    @property
    def n(self):
        return self.p * self.q


def image_orders(cs, p):
    x1, x2 = elliptic_images(cs, p)
    return ec_point_order(cs.e1, x1, p), ec_point_order(cs.e2, x2, p)


def good_prime(cs, p):
    """p reduces the curve system well: finite constants, distinct roots, invertible point."""
    try:
        for E in (cs.e1, cs.e2):
            cubic_coeffs(E, p)
            if _discriminant(*cubic_coeffs(E, p), p) == 0:
                return False
        for c in cs.point:
            if c % p == 0:
                return False
        image_orders(cs, p)
    except (ZeroDivisionError, ArithmeticError, ValueError):
        return False
    return True


def smooth_case(seed, B1, prange=(10 ** 4, 10 ** 5), qrange=(2 ** 19, 2 ** 20 - 1), max_tries=5000):
    """A curve and primes ``p``, ``q`` where stage 1 with bound B1 must split ``p*q`` at p."""
    from sympy import nextprime

    from hecm.curvegen import curve_stream
    from hecm.multiplier import lcm_multiplier

    k = lcm_multiplier(B1).k
    rng = random.Random(seed)
    stream = curve_stream(seed)
    for _ in range(max_tries):
        cs = next(stream)
        p = nextprime(rng.randrange(*prange))
        if not good_prime(cs, p):
            continue
        op = image_orders(cs, p)
        if not any(k % o == 0 for o in op):
            continue
        for _ in range(50):
            q = nextprime(rng.randrange(*qrange))
            if q > qrange[1] or not good_prime(cs, q):
                continue
            oq = image_orders(cs, q)
            if all(k % o for o in oq):
                return SmoothCase(cs, p, q, op, oq)
    raise OracleExhausted("no smooth case found")
