import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gcfinite.primes import DETERMINISTIC_LIMIT, check_prime, is_prime, next_prime


def test_agrees_with_sympy_below_20000():
    assert [n for n in range(20000) if is_prime(n)] == list(sympy.primerange(0, 20000))


def test_strong_pseudoprimes_rejected():
    # strong pseudoprimes to many small bases
    for n in (3215031751, 3825123056546413051, 318665857834031151167461):
        assert not is_prime(n)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 10**40))
def test_random_agreement(n):
    assert is_prime(n) == sympy.isprime(n)


def test_certificates():
    assert check_prime(10**18 + 9).proven
    big = next_prime(DETERMINISTIC_LIMIT + 1)
    assert not big.proven and sympy.isprime(big.q)
    assert check_prime(big.q - 1) == (False, True)


def test_next_prime():
    assert next_prime(27).q == 29
    assert next_prime(29).q == 29
    assert next_prime(0).q == 2
