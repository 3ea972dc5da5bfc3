import math
from fractions import Fraction

import pytest

from tracepair.local import (
    PROVENANCE_CONJECTURE,
    PROVENANCE_PROPOSITION,
    PROVENANCE_THEOREM,
    RationalFunction,
    UnstableLocalFactor,
    delta_group_size,
    interpolate_rational,
    local_limit,
    local_limit_direct,
    local_sequence,
    s_closed_distinct,
    s_closed_same,
    s_direct,
    s_normalized,
    volume,
)
from tracepair.matcount import PrimePower
from tracepair.verify import enumerate_delta_counts


def test_s_direct_spot_values():
    # 6^2 + 12^2 and 9^2 + 6^2 over the two units mod 3
    assert s_direct(0, 0, PrimePower(3, 1)) == 180
    assert s_direct(1, 1, PrimePower(3, 1)) == 117
    # adjudicated one-divides value: 6*9 + 12*6
    assert s_direct(0, 1, PrimePower(3, 1)) == 126
    # 80^2 + 48^2 + 80^2 + 48^2 over units mod 8
    assert s_direct(2, 2, PrimePower(2, 3)) == 17408


def test_s_direct_matches_full_enumeration():
    for q, ell, k in ((2, 2, 1), (4, 2, 2), (8, 2, 3), (3, 3, 1), (9, 3, 2)):
        counts, order = enumerate_delta_counts(q)
        pp = PrimePower(ell, k)
        assert order == delta_group_size(pp)
        for t1 in range(q):
            for t2 in range(q):
                assert counts[t1][t2] == s_direct(t1, t2, pp)


def test_s_direct_workers_identical():
    pp = PrimePower(3, 4)
    assert s_direct(5, 7, pp, workers=4) == s_direct(5, 7, pp, workers=1)


def test_s_direct_budget():
    with pytest.raises(ValueError):
        s_direct(0, 0, PrimePower(2, 40))


def test_local_sequence_normalization():
    seq = local_sequence(2, 3, 2, 4)
    assert [entry[0] for entry in seq.entries] == [1, 2, 3, 4]
    for k, s, norm in seq.entries:
        assert norm == Fraction(s, 2 ** (5 * k - 5))


def test_s_closed_same_cases():
    assert s_closed_same(1, 2, 1) == 4
    assert s_closed_same(1, 2, 7) == 4
    assert s_closed_same(0, 3, 2) == 180
    assert s_closed_same(2, 2, 3) == 17
    assert s_closed_same(0, 2, 3) == Fraction(35, 2)
    # ell odd, coprime trace: k-dependent tail
    assert s_closed_same(1, 3, 1) == 117
    assert s_closed_same(1, 3, 2) == Fraction(9 * (81 - 18 - 9 - 1), 4) - Fraction(81, 81 * 4)
    with pytest.raises(ValueError):
        s_closed_same(2, 2, 2)  # even trace at ell = 2 needs k >= 3


def test_s_closed_same_matches_direct():
    for ell in (2, 3, 5):
        for t in range(0, 7):
            for k in (1, 2, 3, 4):
                if ell == 2 and t % 2 == 0 and k < 3:
                    continue
                assert s_closed_same(t, ell, k) == s_normalized(t, t, PrimePower(ell, k))


def test_s_closed_distinct_cases():
    val, prov = s_closed_distinct(0, 1, 3, 1)
    assert val == 126 and prov == PROVENANCE_PROPOSITION
    # both odd at ell = 2
    val, prov = s_closed_distinct(1, 3, 2, 1)
    assert val == 4 and prov == PROVENANCE_PROPOSITION
    # exactly one even
    val, prov = s_closed_distinct(2, 3, 2, 3)
    assert val == 8 and prov == PROVENANCE_PROPOSITION
    assert s_closed_distinct(2, 3, 2, 2) is None  # below stabilization depth
    # conjectural alpha = 0 case
    val, prov = s_closed_distinct(1, 2, 5, 1)
    assert val == 2200 and prov == PROVENANCE_CONJECTURE
    # conjectural ell = 2 branches
    val, _ = s_closed_distinct(2, 4, 2, 2)
    assert val == 15
    val, _ = s_closed_distinct(2, 6, 2, 4)
    assert val == Fraction(103, 6) - Fraction(7, 24)
    with pytest.raises(ValueError):
        s_closed_distinct(3, 3, 5, 1)


def test_distinct_closed_matches_direct():
    cases = [(0, 1, 3), (3, 6, 3), (1, 2, 5), (1, 4, 3), (2, 3, 2), (1, 3, 2),
             (2, 4, 2), (2, 6, 2), (4, 8, 2), (4, 12, 2), (5, 10, 5)]
    for t1, t2, ell in cases:
        lf = local_limit(t1, t2, ell)
        k = lf.stabilized_at
        assert k is not None
        for kk in (k, k + 1):
            assert s_normalized(t1, t2, PrimePower(ell, kk)) == lf.limit


def test_local_limit_same_trace():
    lf = local_limit(0, 0, 3)
    assert lf.limit == 180 and lf.c_ell == Fraction(45, 32)
    assert lf.provenance == PROVENANCE_THEOREM
    lf = local_limit(1, 1, 3)
    assert lf.limit == Fraction(9 * 53, 4)
    assert lf.stabilized_at is None
    lf2 = local_limit(1, -1, 3)
    assert lf2 == lf


def test_local_limit_sign_invariance():
    for t1, t2, ell in ((1, 2, 5), (0, 1, 3), (2, 4, 2)):
        base = local_limit(t1, t2, ell)
        for s1, s2 in ((-1, 1), (1, -1), (-1, -1)):
            assert local_limit(s1 * t1, s2 * t2, ell) == base


def test_local_limit_direct_route():
    lf = local_limit_direct(1, 2, 5)
    assert lf.limit == 2200
    assert lf.provenance == "direct-with-stability-check"
    assert lf.stabilized_at == 1
    with pytest.raises(ValueError):
        local_limit_direct(1, 1, 3)  # equal traces have no finite alpha


def test_local_limit_direct_depth_cap():
    with pytest.raises(ValueError):
        local_limit_direct(2 ** 7, 0, 2, k_max=6)  # alpha = 7 exceeds k_max


def test_unstable_error_carries_values():
    err = UnstableLocalFactor(3, 2, Fraction(1), 3, Fraction(2))
    assert err.k1 == 2 and err.s2 == 2


def test_delta_group_size():
    assert delta_group_size(PrimePower(2, 1)) == 36
    assert delta_group_size(PrimePower(3, 1)) == 1152
    assert delta_group_size(PrimePower(3, 2)) == 2519424


def test_volume_table():
    assert volume(0, 0, 3) == Fraction(20, 27)
    assert volume(1, 1, 2) == Fraction(1, 8)
    assert volume(4, 4, 2) == Fraction(35, 64)
    assert volume(2, 2, 2) == Fraction(103, 192)
    assert volume(1, 1, 5) == Fraction(5 ** 4 - 2 * 25 - 15 - 1, 5 ** 3 * 6)


def test_interpolate_line():
    fit = interpolate_rational([(0, 1), (1, 3), (2, 5)], max_degree=1)
    assert fit.numerator == (Fraction(1), Fraction(2))
    assert fit.denominator == (Fraction(1),)
    assert fit(10) == 21


def test_interpolate_minimal_degree():
    # constant data fits at degree (0, 0) even when allowed more
    fit = interpolate_rational([(1, 7), (2, 7), (3, 7), (5, 7)], max_degree=3)
    assert fit.numerator == (Fraction(7),)
    assert fit.denominator == (Fraction(1),)


def test_interpolate_rational_function():
    # 1/(1+x) through exact points
    pts = [(x, Fraction(1, 1 + x)) for x in (0, 1, 2, 3, 4)]
    fit = interpolate_rational(pts, max_degree=2)
    assert fit.numerator == (Fraction(1),)
    assert fit.denominator == (Fraction(1), Fraction(1))


def test_interpolate_reproduces_closed_forms():
    pts = [(ell, s_closed_same(0, ell, 1)) for ell in (3, 5, 7, 11, 13, 17)]
    fit = interpolate_rational(pts, max_degree=5)
    assert fit.numerator == (0, 0, -1, 1, -1, 1)
    assert fit.denominator == (1,)
    assert fit(19) == s_closed_same(0, 19, 1)


def test_interpolate_inconsistent():
    with pytest.raises(ValueError):
        interpolate_rational([(0, 0), (1, 1), (2, 4), (3, 9), (4, 17)], max_degree=1)
    with pytest.raises(ValueError):
        interpolate_rational([(0, 0), (0, 1)], max_degree=1)


def test_rational_function_eval():
    f = RationalFunction((Fraction(1), Fraction(1)), (Fraction(2),))
    assert f(3) == 2
