"""The stage-1 scalar ``k = lcm(1, ..., B1)``.

Kummer ladders need a fixed difference point, so ``k`` is built once as a
single big integer (product tree over the maximal prime powers) and then
consumed bit by bit.
"""

from dataclasses import dataclass

from sympy import primerange


def sieve_primes(bound):
    """Primes in ``[2, bound]``, ascending."""
    if bound < 2:
        raise ValueError("bound must be at least 2")
    return list(primerange(2, bound + 1))


def max_prime_power(p, bound):
    """Largest ``p**e <= bound`` (integer comparison, never logarithms)."""
    q = p
    while q * p <= bound:
        q *= p
    return q


def product_tree(values):
    """Product of ``values`` by balanced pairwise multiplication."""
    values = list(values)
    if not values:
        return 1
    while len(values) > 1:
        paired = [values[i] * values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            paired.append(values[-1])
        values = paired
    return values[0]


@dataclass(frozen=True)
class Multiplier:
    k: int
    B1: int

    @property
    def bit_length(self):
        return self.k.bit_length()


def lcm_multiplier(B1):
    if B1 < 2:
        raise ValueError("B1 must be at least 2")
    k = product_tree(max_prime_power(p, B1) for p in sieve_primes(B1))
    return Multiplier(k, B1)


def ladder_bits(k):
    """Bits of ``k`` after the leading one, most significant first.

    The leading bit is consumed by the initial doubling of the ladder.
    ``k = 2`` yields nothing since the ladder returns ``[2]P`` directly.
    """
    if isinstance(k, Multiplier):
        k = k.k
    if k < 2:
        raise ValueError("multiplier must be at least 2")
    if k == 2:
        return
    for i in range(k.bit_length() - 2, -1, -1):
        yield (k >> i) & 1
