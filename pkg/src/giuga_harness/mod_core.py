"""Modular evaluation kernels.

No residue is ever divided. Factorial quotients are products of consecutive
integers, so they are reduced term by term. Windows of consecutive integers
are multiplied out with per-block prefix/suffix products: each window of
length L straddles at most two blocks of size L, and its product is one
suffix times one prefix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact_core import DomainError

MAX_MODULUS = 2**63


@dataclass(frozen=True, slots=True)
class Residue:
    r: int
    m: int

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"modulus must be >= 2, got {self.m}")
        if not 0 <= self.r < self.m:
            raise ValueError(f"residue {self.r} not reduced mod {self.m}")

    @classmethod
    def of(cls, value: int, m: int) -> Residue:
        return cls(value % m, m)

    def _check(self, other: Residue) -> None:
        if not isinstance(other, Residue):
            raise TypeError(f"expected Residue, got {type(other).__name__}")
        if other.m != self.m:
            raise ValueError(f"moduli differ: {self.m} vs {other.m}")

    def __add__(self, other: Residue) -> Residue:
        self._check(other)
        return Residue((self.r + other.r) % self.m, self.m)

    def __sub__(self, other: Residue) -> Residue:
        self._check(other)
        return Residue((self.r - other.r) % self.m, self.m)

    def __mul__(self, other: Residue) -> Residue:
        self._check(other)
        return Residue(self.r * other.r % self.m, self.m)

    def scale(self, c: int) -> Residue:
        return Residue(c * self.r % self.m, self.m)

    def __str__(self) -> str:
        return f"{self.r} (mod {self.m})"


def _check_modulus(m: int) -> None:
    if not 2 <= m < MAX_MODULUS:
        raise DomainError(f"modulus {m} outside [2, 2^63)")


def range_product_mod(lo: int, hi: int, m: int) -> Residue:
    """(lo * (lo+1) * ... * hi) mod m; 1 mod m for an empty range."""
    _check_modulus(m)
    if hi < lo:
        return Residue(1 % m, m)
    p = 1
    for j in range(lo, hi + 1):
        p = p * j % m
        if not p:
            break
    return Residue(p, m)


def window_products_mod(lo: int, length: int, count: int, m: int) -> list[int]:
    """Products mod m of [lo+t, lo+t+length-1] for t = 0 .. count-1.

    Uses O(count + length) multiplications regardless of window length.
    """
    if count <= 0:
        return []
    if length <= 0:
        return [1 % m] * count
    span = count + length - 1
    values = [(lo + t) % m for t in range(span)]
    prefix = [0] * span
    suffix = [0] * span
    for start in range(0, span, length):
        stop = min(start + length, span)
        acc = 1
        for t in range(start, stop):
            acc = acc * values[t] % m
            prefix[t] = acc
        acc = 1
        for t in range(stop - 1, start - 1, -1):
            acc = acc * values[t] % m
            suffix[t] = acc
    out = []
    for t in range(count):
        end = t + length - 1
        if t % length == 0:
            out.append(prefix[end])
        else:
            out.append(suffix[t] * prefix[end] % m)
    return out


def wilson_residue(n: int) -> Residue:
    """(1 + (n-1)!) mod n."""
    if n < 2:
        raise DomainError(f"wilson_residue needs n >= 2, got {n}")
    _check_modulus(n)
    return Residue((1 + range_product_mod(2, n - 1, n).r) % n, n)


def _powsum_numpy(n: int, e: int) -> int:
    j = np.arange(1, n, dtype=np.int64)
    acc = np.ones(n - 1, dtype=np.int64)
    while e:
        if e & 1:
            acc = acc * j % n
        e >>= 1
        if e:
            j = j * j % n
    return int(acc.sum() % n)


# int64 products of two residues stay exact below this modulus
_NUMPY_LIMIT = 3_037_000_499


def giuga_residue(n: int) -> Residue:
    """(1^(n-1) + 2^(n-1) + ... + (n-1)^(n-1)) mod n, one modpow per term."""
    if n < 2:
        raise DomainError(f"giuga_residue needs n >= 2, got {n}")
    _check_modulus(n)
    # the vectorised sum needs n*(n-1) < 2^63 as well
    if 64 <= n < _NUMPY_LIMIT:
        return Residue(_powsum_numpy(n, n - 1), n)
    s = 0
    for j in range(1, n):
        s += pow(j, n - 1, n)
    return Residue(s % n, n)


def _check_k(k: int, n: int, hi: int) -> None:
    if n < 2:
        raise DomainError(f"modulus n must be >= 2, got {n}")
    if not 1 <= k <= hi:
        raise DomainError(f"k={k} outside [1, {hi}] for n={n}")
    _check_modulus(n)


def H_mod(k: int, n: int) -> Residue:
    """H_k(n) mod n from its first k summands; the rest all contain the factor n."""
    _check_k(k, n, n - 1)
    quotients = window_products_mod(2, n - 1 - k, k, n)
    s = 1
    for i in range(1, k + 1):
        q = quotients[i - 1]
        if q:
            s += q * pow(i, k, n)
    return Residue(s % n, n)


def H_mod_full(k: int, n: int) -> Residue:
    """H_k(n) mod n from all n-1 summands, without the core-part shortcut.

    Validation path only.
    """
    _check_k(k, n, n - 1)
    quotients = window_products_mod(2, n - 1 - k, n - 1, n)
    s = 1
    for i in range(1, n):
        q = quotients[i - 1]
        if q:
            s += q * pow(i, k, n)
    return Residue(s % n, n)


def U_mod(k: int, n: int) -> Residue:
    _check_k(k, n, n - 2)
    quotients = window_products_mod(2, n - 2 - k, k + 1, n)
    s = 0
    for i in range(1, k + 2):
        q = quotients[i - 1]
        if q:
            s += q * pow(i, k, n)
    return Residue(s % n, n)


def factorials_mod(n: int) -> list[int]:
    """[0! mod n, 1! mod n, ..., (n-1)! mod n]."""
    out = [1 % n]
    acc = 1 % n
    for x in range(1, n):
        acc = acc * x % n
        out.append(acc)
    return out
