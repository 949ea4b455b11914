"""Exact, arbitrary-precision evaluation of the Wilson/Giuga interpolation family.

Everything here is computed with Python integers and no reduction, so the
values serve as the ground truth that the modular kernels are checked against.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Sequence


class DomainError(ValueError):
    """Argument outside the domain on which a function is defined."""


def _require_nat(name: str, value: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")
    if value < 0:
        raise DomainError(f"{name} must be nonnegative, got {value}")


def range_product(lo: int, hi: int) -> int:
    """Product lo * (lo+1) * ... * hi; 1 for an empty range."""
    if hi < lo:
        return 1
    # balanced splitting keeps the multiplications between similar-sized operands
    if hi - lo < 16:
        p = 1
        for j in range(lo, hi + 1):
            p *= j
        return p
    mid = (lo + hi) // 2
    return range_product(lo, mid) * range_product(mid + 1, hi)


@lru_cache(maxsize=4096)
def factorial(m: int) -> int:
    _require_nat("m", m)
    return range_product(2, m)


def exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{num} is not divisible by {den}")
    return q


def falling_quotient(n: int, i: int, k: int) -> int:
    """(n+i-1-k)! / i!, as the product of i+1 .. n+i-1-k.

    Requires 1 <= k <= n-1 and 1 <= i <= n-1, which guarantees i <= n+i-1-k.
    """
    if not (1 <= k <= n - 1):
        raise DomainError(f"k={k} outside [1, {n - 1}] for n={n}")
    if not (1 <= i <= n - 1):
        raise DomainError(f"i={i} outside [1, {n - 1}] for n={n}")
    return range_product(i + 1, n + i - 1 - k)


def power_sum(k: int, n: int) -> int:
    """S_k(n) = 1^k + 2^k + ... + (n-1)^k."""
    _require_nat("k", k)
    if n < 1:
        raise DomainError(f"power_sum needs n >= 1, got {n}")
    return sum(j**k for j in range(1, n))


def f_wilson(n: int) -> int:
    if n < 2:
        raise DomainError(f"f_wilson needs n >= 2, got {n}")
    return 1 + factorial(n - 1)


def f_giuga(n: int) -> int:
    if n < 2:
        raise DomainError(f"f_giuga needs n >= 2, got {n}")
    return 1 + power_sum(n - 1, n)


def H(k: int, n: int) -> int:
    """Interpolation family member H_k(n); 0 when k is outside [1, n-1]."""
    if n < 2:
        raise DomainError(f"H needs n >= 2, got {n}")
    if not (1 <= k <= n - 1):
        return 0
    return 1 + sum(falling_quotient(n, i, k) * i**k for i in range(1, n))


def H_row(n: int) -> list[int]:
    """[H_1(n), ..., H_{n-1}(n)] computed together.

    Walks k upward, turning the i-th summand of H_{k-1} into that of H_k by
    multiplying by i and dividing exactly by n+i-k.
    """
    if n < 2:
        raise DomainError(f"H_row needs n >= 2, got {n}")
    terms = [falling_quotient(n, i, 1) * i for i in range(1, n)]
    row = [1 + sum(terms)]
    for k in range(2, n):
        for idx in range(n - 1):
            i = idx + 1
            terms[idx] = exact_div(terms[idx] * i, n + i - k)
        row.append(1 + sum(terms))
    return row


def step_sum(k: int, n: int) -> int:
    """Sum over i in [1, n-1] of (n+i-2-k)!/i! * i^k, the correction in H_k -> H_{k+1}."""
    if not (1 <= k <= n - 2):
        raise DomainError(f"k={k} outside [1, {n - 2}] for n={n}")
    return sum(range_product(i + 1, n + i - 2 - k) * i**k for i in range(1, n))


def U(k: int, n: int) -> int:
    """Step sum U_k(n) over i in [1, k+1]; 0 when k is outside [1, n-2]."""
    if n < 2:
        raise DomainError(f"U needs n >= 2, got {n}")
    if not (1 <= k <= n - 2):
        return 0
    return sum(range_product(i + 1, n + i - 2 - k) * i**k for i in range(1, k + 2))


def V(k: int) -> int:
    if k < 1:
        raise DomainError(f"V needs k >= 1, got {k}")
    sign_k = -1 if k % 2 else 1
    total = 0
    for i in range(1, k + 1):
        alt = comb(k + 1, i) * i**k
        total += (alt if i % 2 else -alt) + sign_k * comb(k, i) * k**i
    return total


def binomial_power_sum(k: int) -> int:
    """Sum over i in [0, k] of C(k, i) * k^i."""
    if k < 1:
        raise DomainError(f"binomial_power_sum needs k >= 1, got {k}")
    return sum(comb(k, i) * k**i for i in range(k + 1))


def alternating_power_sum(k: int) -> int:
    """Sum over i in [0, k+1] of (-1)^i * C(k+1, i) * i^k."""
    if k < 1:
        raise DomainError(f"alternating_power_sum needs k >= 1, got {k}")
    total = 0
    for i in range(k + 2):
        term = comb(k + 1, i) * i**k
        total += -term if i % 2 else term
    return total


def iterated_forward_difference(samples: Sequence[int], order: int | None = None) -> int:
    """Order-fold forward difference at j, from samples f(j), ..., f(j+order).

    ``order`` defaults to ``len(samples) - 1``; an explicit order must match.
    """
    if order is None:
        order = len(samples) - 1
    if order < 0 or len(samples) != order + 1:
        raise ValueError(f"need {order + 1} samples for order {order}, got {len(samples)}")
    total = 0
    for i in range(order + 1):
        term = comb(order, i) * samples[order - i]
        total += -term if i % 2 else term
    return total
