"""Modular-arithmetic primitives: symbols, valuations, primes, divisors.

Valuations use ``math.inf`` as the extended value at 0, so ``max`` and
comparisons behave as expected in the case dispatch downstream.
"""

import math

from . import _kernels

INFINITY = math.inf

_SIEVE_HARD_LIMIT = 2_000_000_000


def legendre_symbol(a, ell):
    """Legendre symbol (a|ell) for an odd prime ell, in {-1, 0, 1}.

    Computed by the quadratic-reciprocity reduction (binary Jacobi), which is
    logarithmic; ``euler_criterion`` below is the quadratic-time oracle kept
    for tests.  ell = 2 and even ell are rejected; primality of an odd ell is
    the caller's responsibility.
    """
    if ell < 3 or ell % 2 == 0:
        raise ValueError(f"legendre_symbol needs an odd prime, got {ell}")
    a %= ell
    n = ell
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def euler_criterion(a, ell):
    """Legendre symbol via a^((ell-1)/2) mod ell; test oracle only."""
    if ell < 3 or ell % 2 == 0:
        raise ValueError(f"euler_criterion needs an odd prime, got {ell}")
    r = pow(a % ell, (ell - 1) // 2, ell)
    return -1 if r == ell - 1 else r


def padic_valuation(ell, n):
    """Largest e with ell^e | n; INFINITY for n = 0."""
    if n == 0:
        return INFINITY
    e = 0
    n = abs(n)
    while n % ell == 0:
        n //= ell
        e += 1
    return e


def nu_lk(t, u, ell, k):
    """Truncated valuation of D = t^2 - 4u used by the matrix-count cases.

    For odd ell, or ell = 2 with t odd: min(v_ell(D), k).  For ell = 2 with t
    even the cap is k + 2.
    """
    d = t * t - 4 * u
    cap = k + 2 if (ell == 2 and t % 2 == 0) else k
    return int(min(padic_valuation(ell, d), cap))


def alpha(t1, t2, ell):
    """max(v_ell(t1 + t2), v_ell(t1 - t2)); INFINITY iff t1 = +-t2."""
    return max(padic_valuation(ell, t1 + t2), padic_valuation(ell, t1 - t2))


def sieve_primes(limit):
    """All primes <= limit, ascending, as an int64 array."""
    if limit < 0:
        raise ValueError("limit must be >= 0")
    if limit > _SIEVE_HARD_LIMIT:
        raise ValueError(f"sieve limit {limit} exceeds the supported {_SIEVE_HARD_LIMIT}")
    return _kernels.sieve(int(limit))


def divisors(n):
    """Sorted list of positive divisors of n >= 1."""
    if n < 1:
        raise ValueError("divisors needs n >= 1")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def sigma(n):
    """Divisor sum sigma_1(n)."""
    return sum(divisors(n))
