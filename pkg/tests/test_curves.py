import math
import random

import numpy as np
import pytest

from tracepair.arith import sieve_primes
from tracepair.curves import Curve, pair_count, point_count_brute, trace_ap, trace_table


def test_curve_discriminant():
    assert Curve(1, 0).disc == -64
    assert Curve(0, 1).disc == -432
    with pytest.raises(ValueError):
        Curve(0, 0)


def test_trace_spot():
    # #E(F_5) = 4 for y^2 = x^3 + x
    assert trace_ap(Curve(1, 0), 5) == 2
    assert point_count_brute(Curve(1, 0), 5) == 4


def test_trace_rejects_bad_reduction():
    with pytest.raises(ValueError):
        trace_ap(Curve(1, 0), 2)
    with pytest.raises(ValueError):
        trace_ap(Curve(1, 1), 3)
    c = Curve(0, 1)  # disc -432 = -2^4 3^3
    with pytest.raises(ValueError):
        trace_ap(c, 3)


def test_trace_point_count_oracle():
    rng = random.Random(5)
    primes = [int(p) for p in sieve_primes(150) if p > 3]
    done = 0
    while done < 20:
        a, b = rng.randint(-15, 15), rng.randint(-15, 15)
        if 4 * a ** 3 + 27 * b ** 2 == 0:
            continue
        cur = Curve(a, b)
        for p in primes:
            if not cur.good_reduction(p):
                continue
            assert trace_ap(cur, p) == p + 1 - point_count_brute(cur, p)
        done += 1


def test_hasse_bound():
    cur = Curve(-2, 3)
    primes = sieve_primes(20_000)
    primes = primes[primes > 3]
    primes = primes[np.gcd(primes, abs(cur.disc)) == 1]
    traces = trace_table(cur, primes)
    assert np.all(traces * traces <= 4 * primes)


def test_cm_supersingular_pattern():
    # y^2 = x^3 - x is supersingular exactly at p = 3 mod 4
    cur = Curve(-1, 0)
    primes = sieve_primes(2000)
    primes = primes[primes > 3]
    traces = trace_table(cur, primes)
    for p, ap in zip(primes.tolist(), traces.tolist()):
        assert (ap == 0) == (p % 4 == 3)


def test_cm_trace_two_means_square():
    cur = Curve(-1, 0)
    primes = sieve_primes(5000)
    primes = primes[primes > 3]
    traces = trace_table(cur, primes)
    for p in primes[traces == 2].tolist():
        n = math.isqrt(p - 1)
        assert n * n == p - 1


def test_pair_count_same_curve():
    e = Curve(1, 1)
    assert pair_count(e, e, 1, 2, 400)["count"] == 0
    primes = sieve_primes(400)
    primes = primes[primes > 3]
    primes = primes[np.gcd(primes, abs(e.disc)) == 1]
    singles = int(np.count_nonzero(trace_table(e, primes) == 2))
    assert pair_count(e, e, 2, 2, 400)["count"] == singles


def test_pair_count_listing_and_monotone():
    e1, e2 = Curve(1, 0), Curve(0, 1)
    r = pair_count(e1, e2, 0, 0, 300, list_primes=True)
    assert r["count"] == len(r["matched_primes"]) == 15
    assert all(p % 12 == 11 for p in r["matched_primes"])
    r2 = pair_count(e1, e2, 0, 0, 1000)
    assert r2["count"] >= r["count"]


def test_pair_count_prediction_flagged():
    r = pair_count(Curve(1, 0), Curve(0, 1), 1, 1, 100, prediction_lmax=50)
    assert r["prediction_assumes_generic_image"] is True
    assert r["prediction"] > 0
