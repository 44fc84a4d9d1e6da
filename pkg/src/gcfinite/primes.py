"""Primality for big integers.

Below :data:`DETERMINISTIC_LIMIT` Miller-Rabin with the first thirteen prime
bases is a proof.  Above it the strong Baillie-PSW test from gmpy2 is used;
no BPSW pseudoprime is known, but the answer is reported as probable.
"""

from __future__ import annotations

from typing import NamedTuple

import gmpy2

# the first 13 primes as bases decide every n below this bound
DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class PrimeCheck(NamedTuple):
    prime: bool
    proven: bool


class NextPrime(NamedTuple):
    q: int
    proven: bool


def _miller_rabin(n: int, bases=_BASES) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(n: int) -> PrimeCheck:
    n = int(n)
    if n < 2:
        return PrimeCheck(False, True)
    for p in _BASES:
        if n % p == 0:
            return PrimeCheck(n == p, True)
    if n < DETERMINISTIC_LIMIT:
        return PrimeCheck(_miller_rabin(n), True)
    # a composite answer from BPSW is always correct
    ok = bool(gmpy2.is_strong_bpsw_prp(n))
    return PrimeCheck(ok, not ok)


def is_prime(n: int) -> bool:
    return check_prime(n).prime


def next_prime(n: int) -> NextPrime:
    """Least prime ``>= n`` together with its certificate kind.

    ``proven`` is False when ``q`` lies beyond the deterministic range.
    """
    n = max(int(n), 2)
    q = n if is_prime(n) else int(gmpy2.next_prime(n))
    while True:
        c = check_prime(q)
        if c.prime:
            return NextPrime(q, c.proven)
        q = int(gmpy2.next_prime(q))
