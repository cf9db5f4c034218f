import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import chi_by_squares, is_prime_td, primes_td
from legendre_paths import (
    CapacityError,
    DomainError,
    PrimeRecord,
    divisor_function,
    factorize,
    gauss_sum,
    gauss_sum_closed_form,
    legendre_symbol,
    sieve_primes,
    smallest_prime_factor_table,
    symbol_table,
)
from legendre_paths.number_theory import is_odd_prime

SMALL_PRIMES = [p for p in primes_td(3, 10**4)]


class TestSieve:
    def test_small_range(self):
        assert sieve_primes(2, 10).tolist() == [2, 3, 5, 7]

    def test_figure_primes(self):
        assert sieve_primes(991, 997).tolist() == [991, 997]

    def test_window_count(self):
        # pi(2e6) - pi(1e6), checked against a plain boolean sieve
        flags = np.ones(2 * 10**6 + 1, dtype=bool)
        flags[:2] = False
        for q in range(2, math.isqrt(2 * 10**6) + 1):
            if flags[q]:
                flags[q * q::q] = False
        expected = int(flags[10**6:].sum())
        got = sieve_primes(10**6, 2 * 10**6)
        assert got.size == expected == 70435
        assert np.all(np.diff(got) > 0)

    def test_matches_trial_division_across_segments(self):
        lo, hi = 1_048_000, 1_049_500  # straddles the 2^20 segment boundary
        assert sieve_primes(lo, hi).tolist() == primes_td(lo, hi)

    def test_empty_range_is_not_an_error(self):
        assert sieve_primes(24, 28).size == 0

    @pytest.mark.parametrize("lo,hi", [(1, 10), (10, 9)])
    def test_bad_bounds(self, lo, hi):
        with pytest.raises(DomainError):
            sieve_primes(lo, hi)

    def test_guard(self):
        with pytest.raises(CapacityError):
            sieve_primes(2, 2**40 + 1)


class TestSmallestPrimeFactor:
    def test_examples(self):
        spf = smallest_prime_factor_table(10)
        assert spf[9] == 3 and spf[10] == 2

    def test_reconstruction(self):
        spf = smallest_prime_factor_table(10**4)
        for n in range(2, 10**4 + 1):
            m, prod = n, 1
            while m > 1:
                q = int(spf[m])
                assert is_prime_td(q) and m % q == 0
                prod *= q
                m //= q
            assert prod == n
            # least factor by trial division
            assert spf[n] == next(d for d in range(2, n + 1) if n % d == 0)

    def test_guard(self):
        with pytest.raises(CapacityError):
            smallest_prime_factor_table(2**31 + 1)

    def test_read_only(self):
        spf = smallest_prime_factor_table(100)
        with pytest.raises(ValueError):
            spf[5] = 1


@given(st.integers(1, 10**12))
@settings(max_examples=200, deadline=None)
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert math.prod(q**e for q, e in f.items()) == n
    assert all(is_prime_td(q) for q in f if q < 10**6)


class TestLegendreSymbol:
    def test_examples(self):
        assert legendre_symbol(1, 3) == 1
        assert legendre_symbol(2, 7) == 1
        assert legendre_symbol(3, 7) == -1
        assert legendre_symbol(7, 7) == 0

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 101, 997])
    def test_squares_oracle(self, p):
        chi = chi_by_squares(p)
        assert [legendre_symbol(j, p) for j in range(p)] == chi

    def test_periodic(self, rng):
        ps = rng.choice(SMALL_PRIMES, 1000)
        ns = rng.integers(-10**9, 10**9, 1000)
        for n, p in zip(ns.tolist(), ps.tolist()):
            assert legendre_symbol(n, p) == legendre_symbol(n % p, p)

    def test_minus_one(self):
        for p in SMALL_PRIMES:
            assert (legendre_symbol(-1, p) == 1) == (p % 4 == 1)

    def test_matches_euler_criterion(self, rng):
        ps = rng.choice(SMALL_PRIMES, 300)
        ns = rng.integers(1, 10**6, 300)
        for n, p in zip(ns.tolist(), ps.tolist()):
            e = pow(n, (p - 1) // 2, p)
            assert legendre_symbol(n, p) == {0: 0, 1: 1, p - 1: -1}[e]


class TestPrimeRecord:
    @pytest.mark.parametrize("p,rc,eps", [(5, 1, 1), (7, 3, 1j), (13, 1, 1), (991, 3, 1j)])
    def test_fields(self, p, rc, eps):
        rec = PrimeRecord.of(p)
        assert rec.residue_class == rc and rec.epsilon == eps

    @pytest.mark.parametrize("p", [2, 4, 9, 1, 0, -7])
    def test_rejects(self, p):
        with pytest.raises(DomainError):
            PrimeRecord.of(p)

    def test_inconsistent_fields(self):
        with pytest.raises(DomainError):
            PrimeRecord(7, 1, 1)


class TestSymbolTable:
    def test_p7(self):
        assert symbol_table(7).values.tolist() == [1, 1, -1, 1, -1, -1]

    def test_invariants_all_small_primes(self):
        for p in SMALL_PRIMES:
            v = symbol_table(p).values
            assert v.size == p - 1
            assert v[0] == 1
            assert int(v.sum()) == 0
            assert set(np.unique(v).tolist()) == {-1, 1}

    def test_matches_squares(self):
        for p in SMALL_PRIMES[:200]:
            assert symbol_table(p).values.tolist() == chi_by_squares(p)[1:]

    def test_multiplicativity_spot(self, rng):
        for p in rng.choice(SMALL_PRIMES, 50).tolist():
            t = symbol_table(p)
            j, k = rng.integers(1, p, 200), rng.integers(1, p, 200)
            assert np.array_equal(t[(j * k) % p], t[j] * t[k])

    def test_cross_oracle(self, rng):
        ps = rng.choice(SMALL_PRIMES, 1000)
        for p in ps.tolist():
            j = int(rng.integers(1, p))
            assert symbol_table(p)[j] == legendre_symbol(j, p)

    def test_large_prime_spot(self, rng):
        p = 1_000_003
        t = symbol_table(p)
        for j in rng.integers(1, p, 200).tolist():
            assert t[j] == legendre_symbol(j, p)

    def test_rejects(self):
        with pytest.raises(DomainError, match="not an odd prime"):
            symbol_table(15)
        with pytest.raises(CapacityError):
            symbol_table(2**26 + 15)


class TestGaussSum:
    @pytest.mark.parametrize("p,expected", [(5, math.sqrt(5)), (3, 1j * math.sqrt(3)),
                                            (13, math.sqrt(13))])
    def test_examples(self, p, expected):
        assert abs(gauss_sum(p) - expected) < 1e-12

    def test_closed_form_up_to_1e4(self):
        for p in SMALL_PRIMES:
            assert abs(gauss_sum(p) - gauss_sum_closed_form(p)) <= 1e-6 * math.sqrt(p)

    def test_independent_direct_sum(self):
        p = 1009
        chi = chi_by_squares(p)
        direct = sum(chi[a] * cmath.exp(2j * math.pi * a / p) for a in range(1, p))
        assert abs(gauss_sum(p) - direct) < 1e-9


def test_divisor_function():
    # brute force count of ordered triples with product a
    for a in range(1, 200):
        count = sum(1 for x in range(1, a + 1) if a % x == 0
                    for y in range(1, a // x + 1) if (a // x) % y == 0)
        assert divisor_function(3, a) == count
    assert divisor_function(2, 36) == 9


def test_is_odd_prime():
    assert [n for n in range(50) if is_odd_prime(n)] == primes_td(3, 50)
