"""Trial curves for HECM, generated exactly over Q.

A trial is fixed by three rationals ``(s, u, v)`` with ``(u, v)`` on the
Jacobi quartic

    v^2 = 1 + (-3/s^2 + 1/s^4) u^2 + u^4 / s^2

over Q(s).  From them follow the Rosenhain invariants of a
(2,2)-decomposable genus-2 curve, the squared theta constants of its Kummer
surface (with alpha = delta = 1), a starting point with ``Y = -X`` and the two
underlying elliptic curves.  Everything here is a rational function of
``(s, u, v)``: no square root is ever taken.
"""

import json
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from hecm.modring import fits_word


class ConditionViolation(ValueError):
    """A parameter set fails one of the validity conditions.

    ``clause`` names the failed requirement, e.g. ``"s != +-u"``.
    """

    def __init__(self, clause, condition="parameter"):
        super().__init__(f"{condition} condition violated: {clause}")
        self.clause = clause
        self.condition = condition


class DegenerateAddition(ArithmeticError):
    pass


class DegenerateDoubling(DegenerateAddition):
    pass


class BadReduction(ValueError):
    pass


def parse_rational(text):
    """``"a/b"``, ``"-a/b"`` or an integer literal."""
    return Fraction(text.strip())


def rational_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def height(x):
    x = Fraction(x)
    return max(abs(x.numerator), x.denominator)


def clear_denominators(values):
    """Primitive integer tuple projectively equal to ``values``."""
    values = [Fraction(v) for v in values]
    L = reduce(lcm, (v.denominator for v in values), 1)
    ints = [int(v * L) for v in values]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ValueError("cannot clear the zero tuple")
    return tuple(x // g for x in ints)


# -- Jacobi quartic v^2 = d u^4 + 2a u^2 + 1 ------------------------------------

def _quartic_coeffs(s):
    s = Fraction(s)
    if s == 0:
        raise ConditionViolation("s != 0")
    return 1 / s ** 2, -3 / s ** 2 + 1 / s ** 4   # d, 2a


def jacobi_contains(s, u, v):
    d, two_a = _quartic_coeffs(s)
    u, v = Fraction(u), Fraction(v)
    return 1 + two_a * u ** 2 + d * u ** 4 == v ** 2


def jacobi_add(s, P, Q):
    """Group law on the quartic, identity ``(0, 1)``, ``-(u, v) = (-u, v)``."""
    d, two_a = _quartic_coeffs(s)
    x1, y1 = map(Fraction, P)
    x2, y2 = map(Fraction, Q)
    t = d * x1 ** 2 * x2 ** 2
    den = 1 - t
    if den == 0:
        raise DegenerateAddition(f"1 - d u1^2 u2^2 vanishes for {P}, {Q}")
    x3 = (x1 * y2 + y1 * x2) / den
    y3 = ((y1 * y2 + two_a * x1 * x2) * (1 + t) + 2 * d * x1 * x2 * (x1 ** 2 + x2 ** 2)) / den ** 2
    return x3, y3


def jacobi_double(s, P):
    try:
        return jacobi_add(s, P, P)
    except DegenerateAddition as exc:
        raise DegenerateDoubling(str(exc)) from None


def base_point(s):
    s = Fraction(s)
    return Fraction(1), 1 - 1 / s ** 2


# -- parameters and derived data -------------------------------------------------

@dataclass(frozen=True)
class CurveParams:
    s: Fraction
    u: Fraction
    v: Fraction

    @classmethod
    def parse(cls, text):
        """``"s,u,v"`` with each entry a rational literal."""
        parts = text.split(",")
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated rationals, got {text!r}")
        return cls(*(parse_rational(p) for p in parts))

    def __post_init__(self):
        for name in ("s", "u", "v"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def as_strings(self):
        return [rational_str(x) for x in (self.s, self.u, self.v)]

    @property
    def height(self):
        return max(height(self.s), height(self.u), height(self.v))


def check_conditions(params):
    """Raise ConditionViolation unless the parameter and non-degeneracy conditions hold."""
    s, u, v = params.s, params.u, params.v
    if s in (0, 1, -1):
        raise ConditionViolation("s not in {0, 1, -1}")
    if u in (0, 1, -1):
        raise ConditionViolation("u not in {0, 1, -1}")
    if v == 0:
        raise ConditionViolation("v != 0")
    if s in (u, -u):
        raise ConditionViolation("s != +-u")
    if s ** 2 - 2 * u ** 2 + u ** 4 == 0:
        raise ConditionViolation("s^2 - 2u^2 + u^4 != 0")
    if s in (u ** 2, -u ** 2):
        raise ConditionViolation("s != +-u^2", condition="non-degeneracy")
    if not jacobi_contains(s, u, v):
        raise ConditionViolation("(u, v) on the Jacobi quartic", condition="quartic")


def reduction_clauses(params):
    """The quantities that must stay non-zero, as ``(clause, value)`` pairs.

    A prime dividing the numerator of one of them is a prime where the curve
    system degenerates.
    """
    s, u, v = params.s, params.u, params.v
    return [
        ("s not in {0, 1, -1}", s * (s - 1) * (s + 1)),
        ("u not in {0, 1, -1}", u * (u - 1) * (u + 1)),
        ("v != 0", v),
        ("s != +-u", (s - u) * (s + u)),
        ("s^2 - 2u^2 + u^4 != 0", s ** 2 - 2 * u ** 2 + u ** 4),
        ("s != +-u^2", (s - u ** 2) * (s + u ** 2)),
    ]


def poly_from_roots(roots):
    """Ascending coefficients of the monic polynomial with the given roots."""
    coeffs = [Fraction(1)]
    for r in roots:
        shifted = [Fraction(0)] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] -= r * c
        coeffs = shifted
    return coeffs


@dataclass(frozen=True)
class RosenhainCurve:
    lam: Fraction
    mu: Fraction
    nu: Fraction
    q: Fraction
    f_coeffs: tuple  # ascending, f = x(x-1)(x-lam)(x-mu)(x-nu)


def derive_rosenhain(params):
    check_conditions(params)
    s, u, v = params.s, params.u, params.v
    nu = (s ** 2 - u ** 2) / (1 - u ** 2)
    mu = 1 - nu * (1 - nu) / s ** 2
    if mu == 1:
        raise ConditionViolation("mu != 1")
    lam = mu * (1 - nu) / (1 - mu)
    q = u * v * (s ** 2 - 1) / (1 - u ** 2) ** 2
    # both identities are forced by the quartic; check rather than trust
    assert q ** 2 == mu * (mu - nu)
    assert lam * mu * nu == (mu * s) ** 2
    roots = (Fraction(0), Fraction(1), lam, mu, nu)
    if len(set(roots)) != 5:
        raise ConditionViolation("0, 1, lambda, mu, nu pairwise distinct")
    return RosenhainCurve(lam, mu, nu, q, tuple(poly_from_roots(roots)))


def hadamard(a, b, c, d):
    return (a + b + c + d, a + b - c - d, a - b + c - d, a - b - c + d)


@dataclass(frozen=True)
class KummerConstants:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    A: Fraction
    B: Fraction
    C: Fraction
    D: Fraction
    inv_theta: tuple      # primitive ints proportional to (1/alpha : ... : 1/delta)
    inv_hadamard: tuple   # primitive ints proportional to (1/A : ... : 1/D)
    Eprime: Fraction
    F: Fraction
    G: Fraction
    H: Fraction
    eps_times_phi: Fraction
    eps_over_phi: Fraction
    E0: Fraction

    @property
    def theta(self):
        return (self.alpha, self.beta, self.gamma, self.delta)

    @property
    def single_word(self):
        return all(fits_word(c) for c in self.inv_theta + self.inv_hadamard)


def derive_kummer_constants(ros, params):
    s = params.s
    mu, nu = ros.mu, ros.nu
    alpha = delta = Fraction(1)
    beta = mu / (mu * s)        # mu / sqrt(lam mu nu)
    gamma = mu * s / nu         # sqrt(lam mu nu) / nu
    A, B, C, D = hadamard(alpha, beta, gamma, delta)
    ad_bg = alpha * delta - beta * gamma
    ag_bd = alpha * gamma - beta * delta
    ab_gd = alpha * beta - gamma * delta
    for name, val in (("A", A), ("B", B), ("C", C), ("D", D), ("alpha*delta - beta*gamma", ad_bg),
                      ("alpha*gamma - beta*delta", ag_bd), ("alpha*beta - gamma*delta", ab_gd)):
        if val == 0:
            raise ConditionViolation(f"{name} != 0", condition="non-degeneracy")
    eps_over_phi = nu * beta / alpha
    return KummerConstants(
        alpha, beta, gamma, delta, A, B, C, D,
        inv_theta=clear_denominators([1 / x for x in (alpha, beta, gamma, delta)]),
        inv_hadamard=clear_denominators([1 / x for x in (A, B, C, D)]),
        Eprime=A * B * C * D / (ad_bg * ag_bd * ab_gd),
        F=(alpha ** 2 - beta ** 2 - gamma ** 2 + delta ** 2) / ad_bg,
        G=(alpha ** 2 - beta ** 2 + gamma ** 2 - delta ** 2) / ag_bd,
        H=(alpha ** 2 + beta ** 2 - gamma ** 2 - delta ** 2) / ab_gd,
        eps_times_phi=ab_gd,
        eps_over_phi=eps_over_phi,
        E0=ab_gd * eps_over_phi,
    )


def initial_point_rational(params):
    """The ``Y = -X``, ``Z = 1`` starting point over Q."""
    s, u, v = params.s, params.u, params.v
    den = (s - u ** 2) * s ** 4 * v ** 2
    if den == 0:
        raise ConditionViolation("s != +-u^2", condition="non-degeneracy")
    X = u ** 2 * (u ** 2 - 1) * (s * u ** 4 - 3 * s * u ** 2 + u ** 2 + s ** 3 - s ** 2 + s) / den
    T = (s ** 2 - u ** 2) * (u ** 2 - 1) / (s ** 4 * v ** 2)
    return (X, -X, Fraction(1), T)


def initial_point(params, ring=None):
    """Initial Kummer point as a primitive integer tuple, reduced mod n if a ring is given."""
    P = clear_denominators(initial_point_rational(params))
    if ring is None:
        return P
    return tuple(ring(c) for c in P)


def double_rational(P, K):
    """Kummer doubling over Q (used only to move off points with a zero coordinate)."""
    h = hadamard(*P)
    h = [x * x / c for x, c in zip(h, (K.A, K.B, K.C, K.D))]
    h = hadamard(*h)
    return tuple(x * x / c for x, c in zip(h, K.theta))


@dataclass(frozen=True)
class CurveSystem:
    params: CurveParams
    rosenhain: RosenhainCurve
    kummer: KummerConstants
    point: tuple        # integer (X : Y : Z : T)
    inv_point: tuple    # integer tuple proportional to (1/X : 1/Y : 1/Z : 1/T), or None
    e1: object          # morphism.EllipticModel for +q
    e2: object          # morphism.EllipticModel for -q
    index: int = -1
    origin: str = "explicit"

    @property
    def single_word(self):
        return self.kummer.single_word and self.point_single_word

    @property
    def point_single_word(self):
        return self.inv_point is not None and all(fits_word(c) for c in self.inv_point)


def build_curve_system(params, index=-1, origin="explicit"):
    from hecm.morphism import underlying_curves

    ros = derive_rosenhain(params)
    K = derive_kummer_constants(ros, params)
    point_q = initial_point_rational(params)
    for _ in range(3):
        if all(c != 0 for c in point_q):
            break
        # the ladder needs an invertible difference point; one doubling usually suffices
        point_q = double_rational(point_q, K)
    point = clear_denominators(point_q)
    inv_point = None
    if all(c != 0 for c in point_q):
        inv_point = clear_denominators([1 / c for c in point_q])
    e1, e2 = underlying_curves(ros)
    return CurveSystem(params, ros, K, point, inv_point, e1, e2, index=index, origin=origin)


# -- streams ----------------------------------------------------------------------

MULTIPLES = "base-point-multiples"
T_PARAM = "t-parametrization"


def t_parameters(t):
    t = Fraction(t)
    if t ** 2 == 3:
        raise ConditionViolation("t^2 != 3")
    s = (3 + t ** 2) / (3 - t ** 2)
    return CurveParams(s, Fraction(2), 1 + 2 / s ** 2)


def _candidates(rng, strategy, max_multiple):
    while True:
        if strategy == MULTIPLES:
            s = Fraction(rng.randint(1, 2 ** 10), rng.randint(1, 2 ** 10))
            if s in (0, 1, -1):
                yield None, "s in {0, 1, -1}"
                continue
            P0 = base_point(s)
            P = P0
            for m in range(2, max_multiple + 1):
                try:
                    P = jacobi_add(s, P, P0)
                except DegenerateAddition:
                    yield None, "degenerate Jacobi addition"
                    break
                yield (CurveParams(s, *P), f"s={rational_str(s)} m={m}"), None
        elif strategy == T_PARAM:
            t = Fraction(rng.randint(1, 2 ** 6), rng.randint(1, 2 ** 6))
            try:
                yield (t_parameters(t), f"t={rational_str(t)}"), None
            except ConditionViolation as exc:
                yield None, exc.clause
        else:
            raise ValueError(f"unknown strategy {strategy!r}")


def curve_stream(seed, strategy=MULTIPLES, max_height_bits=64, max_multiple=3,
                 skips=None, require_single_word=False):
    """Deterministic stream of valid CurveSystems.

    Invalid candidates are skipped; if ``skips`` is a Counter the reasons are
    tallied into it.
    """
    rng = random.Random(seed)
    bound = 2 ** max_height_bits
    if skips is None:
        skips = Counter()
    index = 0
    for cand, reason in _candidates(rng, strategy, max_multiple):
        if cand is None:
            skips[reason] += 1
            continue
        params, origin = cand
        if params.height > bound:
            skips["height bound"] += 1
            continue
        try:
            cs = build_curve_system(params, index=index, origin=origin)
        except ConditionViolation as exc:
            skips[exc.clause] += 1
            continue
        if cs.inv_point is None:
            skips["initial point has a zero coordinate"] += 1
            continue
        if require_single_word and not cs.single_word:
            skips["constants exceed a machine word"] += 1
            continue
        yield cs
        index += 1


def nth_curve(seed, index, **kwargs):
    for cs in curve_stream(seed, **kwargs):
        if cs.index == index:
            return cs
    raise AssertionError("unreachable: curve streams are infinite")


# -- 4-torsion classification ------------------------------------------------------

def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


# (s^2-u^2, s^2-1, u^2-1) residue pattern -> ((C, T) if -1 is a square, (C, T) otherwise)
TORSION_TABLE = {
    (True, True, True): ((True, False), (True, True)),
    (True, True, False): ((True, False), (True, True)),
    (True, False, True): ((True, False), (False, False)),
    (True, False, False): ((False, True), (True, True)),
    (False, True, True): ((False, True), (True, True)),
    (False, True, False): ((True, False), (False, False)),
    (False, False, True): ((True, False), (True, True)),
    (False, False, False): ((True, False), (True, True)),
}


@dataclass(frozen=True)
class TorsionClass:
    curve_has_4torsion: bool
    twist_has_4torsion: bool


def torsion_class(s, u, p):
    s, u = Fraction(s), Fraction(u)
    if (s.denominator * u.denominator) % p == 0:
        raise BadReduction(f"p={p} divides a denominator")
    chars = []
    for x in (s ** 2 - u ** 2, s ** 2 - 1, u ** 2 - 1):
        ls = legendre(x.numerator * pow(x.denominator, -1, p), p)
        if ls == 0:
            raise BadReduction(f"{x} vanishes mod {p}")
        chars.append(ls == 1)
    minus_one_square = p % 4 == 1
    curve, twist = TORSION_TABLE[tuple(chars)][0 if minus_one_square else 1]
    return TorsionClass(curve, twist)


# -- certificates -------------------------------------------------------------------

def certificate(cs):
    """JSON-ready description of a trial curve."""
    K = cs.kummer
    out = {
        "schema": 1,
        "s": rational_str(cs.params.s),
        "u": rational_str(cs.params.u),
        "v": rational_str(cs.params.v),
        "lambda": rational_str(cs.rosenhain.lam),
        "mu": rational_str(cs.rosenhain.mu),
        "nu": rational_str(cs.rosenhain.nu),
        "q": rational_str(cs.rosenhain.q),
        "theta": [rational_str(x) for x in K.theta],
        "inv_theta": list(K.inv_theta),
        "inv_hadamard": list(K.inv_hadamard),
        "initial_point": list(cs.point),
        "inv_initial_point": list(cs.inv_point) if cs.inv_point else None,
        "single_word": cs.single_word,
        "elliptic_curves": [e.as_dict() for e in (cs.e1, cs.e2)],
    }
    if cs.index >= 0:
        out["index"] = cs.index
        out["origin"] = cs.origin
    return out


def certificate_json(cs, **extra):
    data = certificate(cs)
    data.update(extra)
    return json.dumps(data, indent=2)
