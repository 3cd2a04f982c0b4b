"""Arithmetic over Z/nZ where a failed inversion is the interesting outcome.

Residues are plain Python ints kept in canonical form ``0 <= x < n``.  A
:class:`Ring` carries the modulus, the set of registered curve constants and
an :class:`OpCounter` that tallies operations by the cost classes used for
Kummer arithmetic (M, S, d, I, A).

The module also provides :class:`Tower`, the rank-4 algebra
``R[i, e] / (i^2 + 1, e^2 - E0)`` used to evaluate theta-function blocks
without extracting square roots.
"""

from dataclasses import dataclass, fields
from fractions import Fraction
from math import gcd

WORD_BITS = 64
_WORD_MAX = 2 ** (WORD_BITS - 1) - 1


class FactorSignal(Exception):
    """An inversion modulo n failed and exposed ``g = gcd(a, n) > 1``.

    Raised from deep inside curve arithmetic and caught by the driver; it is
    the success path of the whole method, not an error.
    """

    def __init__(self, g, n):
        super().__init__(g, n)
        self.g = g
        self.n = n

    @property
    def kind(self):
        return "full-gcd" if self.g == self.n else "proper-factor"

    @property
    def is_proper(self):
        return 1 < self.g < self.n

    def __repr__(self):
        return f"FactorSignal({self.g}, {self.kind})"

    __str__ = __repr__


class NonRationalResult(ArithmeticError):
    """A tower value expected to lie in the base ring has i- or e-components.

    This always indicates an algebra bug, never a property of the input.
    ``raised`` counts instances over the life of the process.
    """

    raised = 0

    def __init__(self, *args):
        super().__init__(*args)
        NonRationalResult.raised += 1


@dataclass
class OpCounter:
    M: int = 0
    S: int = 0
    d: int = 0
    I: int = 0
    A: int = 0

    def reset(self):
        for f in fields(self):
            setattr(self, f.name, 0)

    def snapshot(self):
        return OpCounter(self.M, self.S, self.d, self.I, self.A)

    def as_tuple(self):
        return (self.M, self.S, self.d, self.I, self.A)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __add__(self, other):
        return OpCounter(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def __sub__(self, other):
        return OpCounter(*(a - b for a, b in zip(self.as_tuple(), other.as_tuple())))


def fits_word(c):
    return -_WORD_MAX - 1 <= c <= _WORD_MAX


class Ring:
    """Z/nZ with counted operations.

    ``n`` must be odd, coprime to 6 and larger than 3; a factor 2 or 3 is
    reported immediately as a :class:`FactorSignal`.  ``screen=False`` skips
    the 2/3 check for plain residue arithmetic where it does not matter.
    """

    def __init__(self, n, counter=None, screen=True):
        n = int(n)
        if n <= 3:
            raise ValueError(f"modulus must exceed 3, got {n}")
        for small in (2, 3) if screen else ():
            if n % small == 0:
                raise FactorSignal(small, n)
        self.n = n
        self.counter = counter if counter is not None else OpCounter()
        self._constants = set()

    def __repr__(self):
        return f"Ring({self.n})"

    def __call__(self, x):
        """Reduce an int or a Fraction into the ring."""
        if isinstance(x, Fraction):
            return self.frac(x)
        return int(x) % self.n

    def frac(self, x):
        x = Fraction(x)
        if x.denominator == 1:
            return x.numerator % self.n
        return x.numerator * self.inv(x.denominator) % self.n

    # cost class A
    def add(self, a, b):
        self.counter.A += 1
        return (a + b) % self.n

    def sub(self, a, b):
        self.counter.A += 1
        return (a - b) % self.n

    # cost classes M, S, d
    def mul(self, a, b):
        self.counter.M += 1
        return a * b % self.n

    def sqr(self, a):
        self.counter.S += 1
        return a * a % self.n

    def register(self, *constants):
        """Reduce constants and mark them for d-class multiplication."""
        out = tuple(int(c) % self.n for c in constants)
        self._constants.update(out)
        return out

    def is_registered(self, c):
        return c in self._constants

    def mul_const(self, a, c):
        if c not in self._constants:
            raise ValueError(f"constant {c} was not registered with {self!r}")
        self.counter.d += 1
        return a * c % self.n

    # cost class I
    def try_invert(self, a):
        """Return ``a^-1 mod n``, or the :class:`FactorSignal` that prevents it."""
        a %= self.n
        g = gcd(a, self.n)
        if g != 1:
            return FactorSignal(g, self.n)
        self.counter.I += 1
        return pow(a, -1, self.n)

    def inv(self, a):
        r = self.try_invert(a)
        if isinstance(r, FactorSignal):
            raise r
        return r

    def gcd(self, a):
        return gcd(a % self.n, self.n)


def ring_gcd(a, b):
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return gcd(a, b)


class TowerElement:
    """``c0 + c1*i + c2*e + c3*i*e`` with ``i^2 = -1`` and ``e^2 = E0``."""

    __slots__ = ("tower", "c")

    def __init__(self, tower, c):
        self.tower = tower
        n = tower.n
        self.c = tuple(x % n for x in c)

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.tower is not self.tower:
                raise ValueError("tower elements from different towers")
            return other
        return self.tower.rational(other)

    def __add__(self, other):
        other = self._coerce(other)
        return TowerElement(self.tower, [a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.tower, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return TowerElement(self.tower, [a * other for a in self.c])
        other = self._coerce(other)
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = other.c
        E0 = self.tower.E0
        return TowerElement(self.tower, (
            a0 * b0 - a1 * b1 + E0 * (a2 * b2 - a3 * b3),
            a0 * b1 + a1 * b0 + E0 * (a2 * b3 + a3 * b2),
            a0 * b2 + a2 * b0 - a1 * b3 - a3 * b1,
            a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
        ))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, TowerElement)):
            return self.c == self._coerce(other).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return "TowerElement({}, {}, {}, {})".format(*self.c)

    @property
    def is_rational(self):
        return self.c[1] == self.c[2] == self.c[3] == 0

    @property
    def is_zero(self):
        return not any(self.c)

    def conj_i(self):
        c0, c1, c2, c3 = self.c
        return TowerElement(self.tower, (c0, -c1, c2, -c3))

    def conj_e(self):
        c0, c1, c2, c3 = self.c
        return TowerElement(self.tower, (c0, c1, -c2, -c3))

    def norm(self):
        """Product of the four conjugates; lies in the base ring."""
        y = self * self.conj_i()
        return project_rational(y * y.conj_e())


class Tower:
    """The algebra ``(Z/nZ)[i, e]`` with ``i^2 = -1`` and ``e^2 = E0``."""

    def __init__(self, ring, E0):
        self.ring = ring
        self.n = ring.n
        self.E0 = E0 % ring.n

    def __call__(self, c0=0, c1=0, c2=0, c3=0):
        return TowerElement(self, (c0, c1, c2, c3))

    def rational(self, x):
        return TowerElement(self, (self.ring(x), 0, 0, 0))

    @property
    def one(self):
        return self(1)

    @property
    def i(self):
        return self(0, 1)

    @property
    def e(self):
        return self(0, 0, 1)


def tower_mul(x, y):
    return x * y


def tower_add(x, y):
    return x + y


def tower_try_invert(x):
    """Invert through the norm form; returns the inverse or a FactorSignal."""
    ring = x.tower.ring
    xi = x.conj_i()
    y = x * xi
    ye = y.conj_e()
    N = project_rational(y * ye)
    inv_N = ring.try_invert(N)
    if isinstance(inv_N, FactorSignal):
        return inv_N
    return xi * ye * inv_N


def tower_inv(x):
    r = tower_try_invert(x)
    if isinstance(r, FactorSignal):
        raise r
    return r


def project_rational(x):
    if not x.is_rational:
        raise NonRationalResult(f"{x!r} has non-zero i/e components")
    return x.c[0]


def divide_to_rational(num, den):
    """Return the base-ring value ``r`` with ``num = r * den``.

    Only valid when the quotient is known to be rational.  One invertible
    coordinate of ``den`` suffices, so this works even where ``den`` is a zero
    divisor of the tower (the tower is never a field modulo a prime).  Raises
    ZeroDivisionError when ``den`` is zero and FactorSignal on a gcd event.
    """
    ring = num.tower.ring
    for j, dj in enumerate(den.c):
        if dj:
            r = num.c[j] * ring.inv(dj) % ring.n
            if any((r * b - a) % ring.n for a, b in zip(num.c, den.c)):
                raise NonRationalResult(f"{num!r} / {den!r} is not in the base ring")
            return r
    raise ZeroDivisionError("division by the zero tower element")
