import pytest
from hypothesis import given
from hypothesis import strategies as st

from giuga_harness import exact_core as ex
from giuga_harness import mod_core as mc
from giuga_harness.mod_core import Residue


def test_residue_invariants():
    assert Residue.of(-1, 7) == Residue(6, 7)
    with pytest.raises(ValueError):
        Residue(7, 7)
    with pytest.raises(ValueError):
        Residue(0, 1)
    with pytest.raises(ValueError):
        Residue(1, 5) + Residue(1, 7)
    assert Residue(3, 7) * Residue(5, 7) == Residue(1, 7)
    assert Residue(3, 7) - Residue(5, 7) == Residue(5, 7)
    assert str(Residue(2, 4)) == "2 (mod 4)"


@pytest.mark.parametrize("lo, hi, m, expected", [(2, 4, 7, 3), (5, 4, 9, 1), (2, 6, 6, 0)])
def test_range_product_mod_examples(lo, hi, m, expected):
    assert mc.range_product_mod(lo, hi, m) == Residue(expected, m)


@given(st.integers(1, 500), st.integers(0, 60), st.integers(0, 60), st.integers(2, 10**6))
def test_window_products_match_range_products(lo, length, count, m):
    got = mc.window_products_mod(lo, length, count, m)
    want = [mc.range_product_mod(lo + t, lo + t + length - 1, m).r for t in range(count)]
    assert got == want


@pytest.mark.parametrize("n, expected", [(5, 4), (7, 6), (4, 0)])
def test_giuga_residue_examples(n, expected):
    assert mc.giuga_residue(n).r == expected


@pytest.mark.parametrize("k, n, expected", [(1, 5, 0), (4, 5, 0), (3, 6, 1)])
def test_H_mod_examples(k, n, expected):
    assert mc.H_mod(k, n).r == expected


@pytest.mark.parametrize("k, n, expected", [(1, 5, 0), (2, 7, 0), (3, 4, 1)])
def test_H_mod_full_examples(k, n, expected):
    assert mc.H_mod_full(k, n).r == expected


@pytest.mark.parametrize("k, n, expected", [(1, 9, 0), (2, 4, 2), (2, 5, 0)])
def test_U_mod_examples(k, n, expected):
    assert mc.U_mod(k, n).r == expected


@pytest.mark.parametrize("n, expected", [(11, 0), (12, 1), (4, 3)])
def test_wilson_residue_examples(n, expected):
    assert mc.wilson_residue(n).r == expected


@pytest.mark.parametrize(
    "call",
    [
        lambda: mc.H_mod(0, 5),
        lambda: mc.H_mod(5, 5),
        lambda: mc.H_mod_full(5, 5),
        lambda: mc.U_mod(4, 5),
        lambda: mc.U_mod(1, 2),
        lambda: mc.wilson_residue(1),
        lambda: mc.giuga_residue(2**63),
    ],
)
def test_domain_errors(call):
    with pytest.raises(ex.DomainError):
        call()


def test_oracle_equivalence():
    for n in range(2, 61):
        assert mc.giuga_residue(n).r == ex.power_sum(n - 1, n) % n
        assert mc.wilson_residue(n).r == ex.f_wilson(n) % n
        row = ex.H_row(n)
        for k in range(1, n):
            assert mc.H_mod(k, n).r == row[k - 1] % n
        for k in range(1, n - 1):
            assert mc.U_mod(k, n).r == ex.U(k, n) % n


def test_core_part_reduction():
    for n in range(2, 121):
        for k in range(1, n):
            assert mc.H_mod(k, n) == mc.H_mod_full(k, n)


def test_remark_congruence():
    for n in range(3, 121):
        h = [None] + [mc.H_mod(k, n).r for k in range(1, n)]
        for k in range(1, n - 1):
            assert (h[k + 1] - h[k]) % n == (k + 1) * mc.U_mod(k, n).r % n


def test_H1_is_wilson_and_U1_vanishes():
    for n in range(3, 2001):
        assert mc.H_mod(1, n) == mc.wilson_residue(n)
        assert mc.U_mod(1, n).r == 0


def test_giuga_residue_vector_path_matches_scalar_path():
    for n in [64, 65, 97, 561, 1105, 1729, 4096, 9973]:
        scalar = sum(pow(j, n - 1, n) for j in range(1, n)) % n
        assert mc.giuga_residue(n).r == scalar


@pytest.mark.slow
def test_giuga_residue_matches_exact_power_sum_up_to_2000():
    for n in range(2, 2001):
        assert mc.giuga_residue(n).r == ex.power_sum(n - 1, n) % n


def test_factorials_mod():
    for n in (2, 9, 12, 13):
        assert mc.factorials_mod(n) == [ex.factorial(x) % n for x in range(n)]


def test_module_never_divides_residues():
    # residues are multiplied only; the inverse pow form and modular division never appear
    import inspect

    source = inspect.getsource(mc)
    assert "pow(" in source
    assert ", -1," not in source
    assert " // " not in source
