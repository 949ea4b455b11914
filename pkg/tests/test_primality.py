import inspect

import pytest

from giuga_harness import primality
from giuga_harness.primality import is_prime, miller_rabin, primes_up_to


@pytest.mark.parametrize("n, expected", [(2, True), (1, False), (341, False), (0, False), (97, True)])
def test_is_prime_examples(n, expected):
    assert is_prime(n) is expected


def test_primes_up_to_examples():
    assert primes_up_to(10).primes() == [2, 3, 5, 7]
    assert primes_up_to(100).count() == 25
    assert primes_up_to(2).primes() == [2]
    assert 7 in primes_up_to(10) and 9 not in primes_up_to(10)


def test_limits():
    with pytest.raises(ValueError):
        primes_up_to(1)
    with pytest.raises(primality.ResourceError):
        primes_up_to(10**6, max_limit=1000)
    with pytest.raises(OverflowError):
        is_prime(2**64)


@pytest.mark.parametrize(
    "n, expected",
    [
        (2**61 - 1, True),
        (18446744073709551557, True),  # largest prime below 2^64
        (3215031751, False),  # strong pseudoprime to bases 2, 3, 5, 7
        (3825123056546413051, False),  # strong pseudoprime to bases 2 .. 23
        (1_000_003, True),
        (1_000_001, False),
    ],
)
def test_miller_rabin_above_table(n, expected):
    assert is_prime(n) is expected


def test_miller_rabin_agrees_with_sieve_to_a_million():
    table = primes_up_to(10**6)
    member = table.membership
    assert all(miller_rabin(n) == bool(member[n]) for n in range(10**6 + 1))
    assert all(is_prime(n) == bool(member[n]) for n in range(0, 10**6 + 1, 7))


def test_oracle_is_independent_of_the_congruences():
    source = inspect.getsource(primality)
    assert "mod_core" not in source and "exact_core" not in source
