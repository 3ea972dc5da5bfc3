import math
from fractions import Fraction

import numpy as np
import pytest

from tracepair.local import delta_group_size, s_direct
from tracepair.matcount import PrimePower
from tracepair.model_sim import (
    ModelConfig,
    class_density,
    growth_check,
    rectangle_mass_empirical,
    rectangle_mass_exact,
    sample_run,
    semicircle_weights,
    trace_weight,
)
from tracepair.verify import enumerate_delta_counts


def test_config_validation():
    with pytest.raises(ValueError):
        ModelConfig(1, 100, 0, 0, 0)
    with pytest.raises(ValueError):
        ModelConfig(2, 3, 0, 0, 0)


def test_class_density_prime_power():
    pp = PrimePower(2, 1)
    assert class_density(2, 1, 1) == Fraction(s_direct(1, 1, pp), delta_group_size(pp))
    assert class_density(2, 1, 1) == Fraction(1, 9)
    assert trace_weight(2, 1, 1) == Fraction(4, 9)


def test_class_density_partition():
    for m in (2, 3, 4, 6):
        assert sum(class_density(m, a, b) for a in range(m) for b in range(m)) == 1


def test_class_density_crt():
    counts, order = enumerate_delta_counts(6)
    for r1 in range(6):
        for r2 in range(6):
            assert class_density(6, r1, r2) == Fraction(int(counts[r1][r2]), order)
    # multiplicativity across the coprime factors 4 and 3
    for r1 in range(12):
        for r2 in range(12):
            assert class_density(12, r1, r2) == class_density(4, r1 % 4, r2 % 4) * class_density(
                3, r1 % 3, r2 % 3
            )


def test_semicircle_weights_inside_open_interval():
    for p in (5, 11, 97, 10007):
        u, w = semicircle_weights(p)
        assert u[0] == -u[-1]
        assert int(u[-1]) ** 2 < 4 * p <= (int(u[-1]) + 1) ** 2
        assert np.all(w > 0) and np.all(w <= 1)


def test_sample_run_deterministic():
    cfg = ModelConfig(2, 3000, 99, 1, 1)
    a = sample_run(cfg)
    b = sample_run(cfg)
    assert np.array_equal(a.u1, b.u1) and np.array_equal(a.u2, b.u2)
    c = sample_run(ModelConfig(2, 3000, 100, 1, 1))
    assert not np.array_equal(a.u1, c.u1)


def test_sample_run_hasse_and_counts():
    cfg = ModelConfig(4, 3000, 7, 1, 1)
    run = sample_run(cfg)
    assert np.all(run.u1 * run.u1 < 4 * run.primes)
    assert np.all(run.u2 * run.u2 < 4 * run.primes)
    assert run.class_counts.sum() == run.primes.shape[0]
    assert run.hits == int(np.count_nonzero((run.u1 == 1) & (run.u2 == 1)))


def test_class_frequencies_track_density():
    cfg = ModelConfig(2, 30_000, 1, 1, 1)
    run = sample_run(cfg)
    n = run.primes.shape[0]
    for r1 in range(2):
        for r2 in range(2):
            q = float(class_density(2, r1, r2))
            sigma = math.sqrt(q * (1 - q) / n)
            assert abs(run.class_counts[r1, r2] / n - q) < 4 * sigma


def test_rectangle_masses():
    assert abs(rectangle_mass_exact(-1, 1, -1, 1) - 1.0) < 1e-15
    q = rectangle_mass_exact(0, 1, 0, 1)
    assert abs(q - 0.25) < 1e-15
    cfg = ModelConfig(2, 30_000, 3, 1, 1)
    run = sample_run(cfg)
    n = run.primes.shape[0]
    emp = rectangle_mass_empirical(run, 0, 1, 0, 1)
    assert abs(emp - q) < 4 * math.sqrt(q * (1 - q) / n)


def test_growth_check_prediction():
    cfg = ModelConfig(2, 5000, 4, 1, 1)
    run = sample_run(cfg)
    g = growth_check(run, cfg)
    manual = float(trace_weight(2, 1, 1)) / math.pi ** 2 * float(
        np.sum(1.0 / run.primes.astype(float))
    )
    assert abs(g.predicted - manual) < 1e-12
    g2 = growth_check(run, cfg, upto=1000)
    assert g2.predicted < g.predicted


def test_sampler_hit_mass_matches_prediction():
    # deterministic check of the growth law: exact per-prime hit probability
    # summed over primes stays within a few percent of the asymptotic form
    m = 2
    fw = np.array([[float(trace_weight(m, a, b)) for b in range(m)] for a in range(m)])
    from tracepair.arith import sieve_primes

    primes = sieve_primes(50_000)
    primes = primes[primes >= 5]
    exact = 0.0
    asym = 0.0
    for p in primes.tolist():
        u, w = semicircle_weights(p)
        res = (u % m).astype(np.int64)
        m1 = np.bincount(res, weights=w, minlength=m)
        z = float((m1[:, None] * m1[None, :] * fw).sum())
        exact += float(w[u == 1][0]) ** 2 * fw[1, 1] / z
        asym += fw[1, 1] / (math.pi ** 2 * p)
    assert abs(exact - asym) / asym < 0.05
