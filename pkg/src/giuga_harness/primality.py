"""Ground-truth primality, independent of every congruence under test.

Sieve lookups below the table limit, deterministic Miller-Rabin above it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_TABLE_LIMIT = 1_000_000
MAX_TABLE_LIMIT = 200_000_000

# first twelve primes as strong-pseudoprime bases: no composite below
# 3.3e24 passes all of them, which covers every 64-bit input
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class ResourceError(RuntimeError):
    pass


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    membership: np.ndarray

    def __contains__(self, n: int) -> bool:
        return 0 <= n <= self.limit and bool(self.membership[n])

    def primes(self) -> list[int]:
        return np.flatnonzero(self.membership).tolist()

    def count(self) -> int:
        return int(np.count_nonzero(self.membership))


def primes_up_to(limit: int, *, max_limit: int = MAX_TABLE_LIMIT) -> PrimeTable:
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    if limit > max_limit:
        raise ResourceError(f"sieve limit {limit} exceeds budget {max_limit}")
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    sieve.flags.writeable = False
    return PrimeTable(limit, sieve)


@lru_cache(maxsize=1)
def _default_table() -> PrimeTable:
    return primes_up_to(DEFAULT_TABLE_LIMIT)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def miller_rabin(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    return all(_strong_probable_prime(n, a) for a in _MR_BASES)


def is_prime(n: int) -> bool:
    if n >= 2**64:
        raise OverflowError(f"is_prime supports n < 2^64, got {n}")
    if n <= DEFAULT_TABLE_LIMIT:
        return n in _default_table()
    return miller_rabin(n)
