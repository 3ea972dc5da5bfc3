import math
import os
from fractions import Fraction

import pytest

from tracepair.class_numbers import cache_clear, hurwitz_weighted
from tracepair.prime_stats import (
    CheckpointSeries,
    average_f_product,
    class_sum,
    slope_fit,
)


def test_average_f_product_reference_attached():
    avg, ref = average_f_product(0, 0, 3, 20_000)
    assert ref == Fraction(45, 32)
    assert abs(avg - 45 / 32) / (45 / 32) < 0.02


def test_average_f_product_rejects_small_x():
    with pytest.raises(ValueError):
        average_f_product(0, 0, 3, 5)


def test_class_sum_small_exact():
    cache_clear()
    series = class_sum(0, 0, 30, checkpoints=(10, 30))
    # primes 5..29 by hand: sum of H(-4p)^2 / p^2
    expected10 = hurwitz_weighted(-20) ** 2 / 25 + hurwitz_weighted(-28) ** 2 / 49
    assert series.exact_partials[0] == expected10
    manual = sum(
        hurwitz_weighted(-4 * p) ** 2 / Fraction(p * p)
        for p in (5, 7, 11, 13, 17, 19, 23, 29)
    )
    assert series.exact_partials[-1] == manual
    assert [x for x, _, _ in series.checkpoints] == [10, 30]


def test_class_sum_positive_increasing():
    cache_clear()
    series = class_sum(0, 0, 5000)
    sums = [s for _, s, _ in series.checkpoints]
    assert all(b > a for a, b in zip(sums, sums[1:]))
    assert sums[0] > 0


def test_class_sum_threshold():
    with pytest.raises(ValueError):
        class_sum(100, 0, 50)  # x below the primed-range threshold
    with pytest.raises(ValueError):
        class_sum(0, 0, 100, checkpoints=(10, 200))  # checkpoint beyond x


def test_class_sum_cache_determinism(tmp_path):
    path = os.path.join(tmp_path, "h.csv")
    cache_clear()
    cold = class_sum(0, 0, 3000, checkpoints=(1000, 3000), cache=path)
    assert os.path.exists(path)
    warm = class_sum(0, 0, 3000, checkpoints=(1000, 3000), cache=path)
    assert cold.exact_partials == warm.exact_partials
    assert warm.cache_stats["hits"] > 0
    cache_clear()
    nocache = class_sum(0, 0, 3000, checkpoints=(1000, 3000))
    assert nocache.exact_partials == cold.exact_partials


def test_class_sum_cache_tolerant_read(tmp_path):
    path = os.path.join(tmp_path, "h.csv")
    with open(path, "w") as fh:
        fh.write("D,h\n-23,3\nnot,a,row\n-20,2\n,\n")
    cache_clear()
    series = class_sum(0, 0, 500, checkpoints=(500,), cache=path)
    assert series.exact_partials[-1] > 0


def test_class_sum_cache_spot_check_catches_corruption(tmp_path):
    path = os.path.join(tmp_path, "h.csv")
    with open(path, "w") as fh:
        fh.write("D,h\n-23,7\n")  # wrong value
    cache_clear()
    with pytest.raises(ValueError):
        class_sum(0, 0, 500, checkpoints=(500,), cache=path)
    cache_clear()


def test_class_sum_workers_identical():
    cache_clear()
    a = class_sum(0, 0, 2000, checkpoints=(2000,), workers=4)
    cache_clear()
    b = class_sum(0, 0, 2000, checkpoints=(2000,))
    assert a.exact_partials == b.exact_partials


def test_slope_fit_recovers_synthetic():
    xs = (100, 1000, 10_000)
    series = CheckpointSeries(
        0, 0,
        [(x, 1.25 + 2.0 * math.log(math.log(x)), math.log(math.log(x))) for x in xs],
        [],
    )
    fit = slope_fit(series)
    assert abs(fit.c_hat - 2.0) < 1e-12
    assert abs(fit.intercept - 1.25) < 1e-12
    assert fit.residual < 1e-12


def test_slope_fit_constant_series():
    xs = (100, 1000, 10_000)
    series = CheckpointSeries(0, 0, [(x, 3.0, math.log(math.log(x))) for x in xs], [])
    assert abs(slope_fit(series).c_hat) < 1e-12


def test_slope_fit_needs_three_points():
    series = CheckpointSeries(0, 0, [(10, 1.0, 0.1), (100, 2.0, 0.2)], [])
    with pytest.raises(ValueError):
        slope_fit(series)
