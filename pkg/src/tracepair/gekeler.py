"""Local densities of matrices with fixed trace among those of determinant p,
their archimedean companion, and the truncated product against H(t^2 - 4p).

The 2-adic normalization: delta(t, p) is the largest i >= 0 with 4^i | D and
D/4^i congruent to 0 or 1 mod 4, and the symbol at 2 reads the reduced value
mod 8 (1 -> +1, 5 -> -1, even -> 0).  This is the unique reading under which
the finite-level quotients stabilize to f_ell (checked on a grid in verify);
a reduced value of 3 mod 4 cannot occur at that delta.  The one case the
three-branch formula cannot express is ell = 2 with odd t, where the count is
2^(2k-1) outright, density 2/3.
"""

import math
from fractions import Fraction

from .arith import legendre_symbol, padic_valuation, sieve_primes
from .class_numbers import hurwitz_weighted
from .matcount import PrimePower, m_closed


def delta_exponent(t, p, ell):
    """Largest i >= 0 with ell^(2i) | t^2 - 4p (mod-4 constraint at ell = 2)."""
    d = t * t - 4 * p
    if d == 0:
        raise ValueError("t^2 = 4p has no finite valuation")
    v = int(padic_valuation(ell, d))
    if ell > 2:
        return v // 2
    i = v // 2
    while (d >> (2 * i)) % 4 not in (0, 1):
        i -= 1
    return i


def f_ell(t, p, ell):
    """Limiting trace-t density among determinant-p matrices at ell, exact."""
    if ell == 2 and t % 2 == 1:
        return Fraction(2, 3)
    d = t * t - 4 * p
    if d == 0:
        raise ValueError("t^2 = 4p is outside the density formulas")
    delta = delta_exponent(t, p, ell)
    reduced = d // ell ** (2 * delta)
    if ell > 2:
        sym = legendre_symbol(reduced, ell)
    else:
        if reduced % 2 == 0:
            sym = 0
        else:
            assert reduced % 4 == 1
            sym = 1 if reduced % 8 == 1 else -1
    lead = Fraction(ell ** 2, ell ** 2 - 1)
    core = 1 + Fraction(1, ell)
    if sym == -1:
        core -= Fraction(2, ell ** (delta + 1))
    elif sym == 0:
        core -= Fraction(ell + 1, ell ** (delta + 2))
    return lead * core


def f_infinity(t, p):
    """Semicircle density (1/(pi sqrt p)) sqrt(1 - t^2/4p); 0 outside |t| <= 2 sqrt p."""
    if t * t > 4 * p:
        return 0.0
    return math.sqrt(1.0 - t * t / (4.0 * p)) / (math.pi * math.sqrt(p))


def f_level_k(t, p, ell, k):
    """Finite-level density m(t, p; ell^k) / (ell^(2k-2) (ell^2 - 1)), exact."""
    if p % ell == 0:
        raise ValueError("p must be a unit mod ell for the finite-level density")
    count = m_closed(t, p, PrimePower(ell, k))
    return Fraction(count, ell ** (2 * k - 2) * (ell ** 2 - 1))


def product_check(t, p, lmax):
    """Compare H(t^2 - 4p) with p * f_inf * prod_{ell <= lmax} f_ell.

    The product converges only conditionally, so the right side is an
    approximation; factors are multiplied plainly in ascending ell.
    """
    d = t * t - 4 * p
    if d >= 0:
        raise ValueError("product check needs t^2 - 4p < 0")
    if p <= 3:
        raise ValueError("product check needs p > 3")
    lhs = hurwitz_weighted(d)
    rhs = p * f_infinity(t, p)
    for ell in sieve_primes(lmax):
        rhs *= float(f_ell(t, p, int(ell)))
    rel = abs(rhs - float(lhs)) / float(lhs)
    return {"lhs": lhs, "rhs": rhs, "rel_error": rel, "lmax": lmax}
