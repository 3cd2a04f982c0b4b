"""Shared test helpers."""

import random

from sympy import nextprime

from hecm.oracle import good_prime


def curve_prime_pairs(curves, lo, hi, seed, count):
    """``count`` (curve, p) pairs with p in [lo, hi] of good reduction for the curve."""
    rng = random.Random(seed)
    pairs = []
    for cs in curves:
        for _ in range(20):
            p = nextprime(rng.randrange(lo, hi))
            if p <= hi and good_prime(cs, p):
                pairs.append((cs, p))
                break
        if len(pairs) == count:
            return pairs
    raise AssertionError("not enough good primes")
