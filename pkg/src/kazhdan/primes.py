"""Primality testing and prime search in arithmetic progressions."""
from __future__ import annotations

import random
from math import gcd

from .errors import BudgetError, NoSolutionError

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# Bases 2..41 are a deterministic Miller-Rabin witness set below this bound.
DETERMINISTIC_LIMIT = 3317044064679887385961981

# 4**-64 = 2**-128 error bound for inputs above DETERMINISTIC_LIMIT.
PROBABILISTIC_ROUNDS = 64

SEARCH_BUDGET = 10**6


def _strong_probable_prime(n: int, base: int, d: int, r: int) -> bool:
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin test, deterministic below ``DETERMINISTIC_LIMIT``.

    Larger inputs use 64 rounds with bases drawn from a generator seeded by
    ``n`` itself, so the answer is reproducible across runs.
    """
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < DETERMINISTIC_LIMIT:
        bases = SMALL_PRIMES
    else:
        rng = random.Random(n)
        bases = [rng.randrange(2, n - 1) for _ in range(PROBABILISTIC_ROUNDS)]
    return all(_strong_probable_prime(n, a, d, r) for a in bases)


def dirichlet_prime(a: int, d: int, lower: int, distinct_from=(), budget: int = SEARCH_BUDGET) -> int:
    """Smallest prime q = a (mod d) with q > lower and q not in distinct_from.

    Candidates are scanned in increasing order, so the result is a pure
    function of the arguments.
    """
    if d <= 0:
        raise ValueError("modulus d must be positive")
    if gcd(a, d) != 1:
        raise NoSolutionError(f"gcd({a}, {d}) != 1: progression holds at most one prime")
    excluded = set(distinct_from)
    residue = a % d
    start = lower + 1
    q = start + (residue - start) % d
    for _ in range(budget):
        if q not in excluded and is_prime(q):
            return q
        q += d
    raise BudgetError(f"no prime = {a} mod {d} above {lower} within {budget} candidates")
