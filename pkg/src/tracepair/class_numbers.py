"""Class numbers of imaginary quadratic orders and their Kronecker-weighted sums.

h(D) counts primitive reduced binary quadratic forms (a, b, c) of discriminant
D < 0: b = D mod 2, |b| <= a <= c, gcd(a, b, c) = 1, and b >= 0 when |b| = a
or a = c.  The weighted invariants sum h over the divisors of the conductor,
plainly and divided by the unit-group order w.

A process-wide memo keyed by D backs the prime-sum workloads; prime_stats
persists it to CSV.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from .arith import divisors

_H_CACHE = {}


@dataclass(frozen=True)
class DiscriminantSplit:
    D: int
    D0: int  # fundamental discriminant
    f: int   # conductor, D = f^2 * D0


@dataclass(frozen=True)
class ClassData:
    split: DiscriminantSplit
    h: int
    w: int
    hk: int           # sum of h over conductor divisors
    hw: Fraction      # same sum weighted by 1/w


def _check_discriminant(D):
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"D must be negative and 0 or 1 mod 4, got {D}")


def split_discriminant(D):
    """Split D = f^2 * D0 with D0 fundamental (largest admissible conductor f)."""
    _check_discriminant(D)
    for f in range(math.isqrt(-D), 0, -1):
        if D % (f * f) == 0 and (D // (f * f)) % 4 in (0, 1):
            return DiscriminantSplit(D, D // (f * f), f)
    raise AssertionError("unreachable: f = 1 always qualifies")


def class_number_h(D, cache=True):
    """Number of primitive reduced forms of discriminant D < 0."""
    _check_discriminant(D)
    if cache and D in _H_CACHE:
        return _H_CACHE[D]
    h = _kernels.class_number(D)
    if cache:
        _H_CACHE[D] = h
    return h


def unit_count_w(D):
    """Order of the unit group: 6 at D = -3, 4 at D = -4, else 2."""
    _check_discriminant(D)
    if D == -3:
        return 6
    if D == -4:
        return 4
    return 2


def hurwitz_kronecker(D):
    """ClassData with both conductor-divisor sums computed together."""
    split = split_discriminant(D)
    hk = 0
    hw = Fraction(0)
    for fp in divisors(split.f):
        d = fp * fp * split.D0
        h = class_number_h(d)
        hk += h
        hw += Fraction(h, unit_count_w(d))
    return ClassData(split, class_number_h(D), unit_count_w(D), hk, hw)


def hurwitz_weighted(D):
    """The unit-weighted conductor sum H(D) alone, as an exact Fraction."""
    return hurwitz_kronecker(D).hw


def cache_snapshot():
    """Copy of the in-process h(D) memo (used for persistence)."""
    return dict(_H_CACHE)


def cache_preload(entries):
    """Merge {D: h} entries into the memo; invalid keys are ignored."""
    for D, h in entries.items():
        if D < 0 and D % 4 in (0, 1) and h >= 1:
            _H_CACHE[D] = h


def cache_clear():
    _H_CACHE.clear()
