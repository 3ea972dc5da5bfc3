from fractions import Fraction

import pytest

from tracepair.arith import divisors
from tracepair.class_numbers import (
    cache_clear,
    cache_preload,
    cache_snapshot,
    class_number_h,
    hurwitz_kronecker,
    hurwitz_weighted,
    split_discriminant,
    unit_count_w,
)
from tracepair.verify import hurwitz_eichler_lhs


def test_split_discriminant():
    s = split_discriminant(-12)
    assert (s.D0, s.f) == (-3, 2)
    s = split_discriminant(-4)
    assert (s.D0, s.f) == (-4, 1)
    s = split_discriminant(-48)
    assert (s.D0, s.f) == (-3, 4)
    s = split_discriminant(-36)  # -36/4 = -9 is 3 mod 4, so f = 3 wins
    assert (s.D0, s.f) == (-4, 3)


def test_split_rejects_invalid():
    for bad in (-2, -5, 0, 4, -6):
        with pytest.raises(ValueError):
            split_discriminant(bad)


def test_class_number_spot():
    # reduced-form lists: (1,1,1); (1,0,3); (1,1,6), (2,+-1,3)
    assert class_number_h(-3) == 1
    assert class_number_h(-12) == 1
    assert class_number_h(-23) == 3
    assert class_number_h(-4) == 1
    assert class_number_h(-20) == 2


def test_unit_count():
    assert unit_count_w(-3) == 6
    assert unit_count_w(-4) == 4
    assert unit_count_w(-7) == 2


def test_hurwitz_kronecker_values():
    cd = hurwitz_kronecker(-12)
    assert cd.hk == 2
    assert cd.hw == Fraction(2, 3)
    assert hurwitz_kronecker(-4).hw == Fraction(1, 4)
    assert hurwitz_kronecker(-3).hw == Fraction(1, 6)
    assert hurwitz_weighted(-20) == 1
    assert hurwitz_weighted(-19) == Fraction(1, 2)


def test_fundamental_collapse():
    for d in (-3, -4, -7, -8, -11, -19, -43, -67, -163):
        cd = hurwitz_kronecker(d)
        assert cd.split.f == 1
        assert cd.hk == cd.h
        assert cd.hw == Fraction(cd.h, cd.w)


def test_kronecker_hurwitz_identity_sample():
    # the n = 1 and n = 2 instances, by hand:
    # 1/2 + 2*(1/3) + 2*(-1/12) = 1;  1 + 2*1 + 2*(1/2) = 4 = 2 + 2
    assert hurwitz_eichler_lhs(1) == 1
    assert hurwitz_eichler_lhs(2) == 4
    for n in range(1, 120):
        assert hurwitz_eichler_lhs(n) == sum(max(d, n // d) for d in divisors(n))


def test_order_independence():
    # descending-order reference enumeration of reduced forms
    import math

    def h_reference(D):
        absd = -D
        count = 0
        for b in range(math.isqrt(absd // 3), -1, -1):
            if (b - D) % 2:
                continue
            n4 = (b * b + absd) // 4
            for a in range(math.isqrt(n4), max(b, 1) - 1, -1):
                if n4 % a:
                    continue
                c = n4 // a
                if math.gcd(math.gcd(a, b), c) != 1:
                    continue
                count += 1 if (b == 0 or a == b or a == c) else 2
        return count

    for d in range(-500, 0):
        if d % 4 in (0, 1):
            assert class_number_h(d, cache=False) == h_reference(d)


def test_cache_roundtrip():
    cache_clear()
    h = class_number_h(-23)
    snap = cache_snapshot()
    assert snap[-23] == h
    cache_clear()
    cache_preload({-23: h, -5: 99, -4: 0})  # invalid entries ignored
    assert cache_snapshot() == {-23: h}
    cache_clear()
