"""Seeded Monte Carlo realization of the trace-pair measure at a finite level.

Per prime p, an integer pair inside the open Hasse square is drawn from the
measure proportional to w(u1) w(u2) F[u1 mod m, u2 mod m], where w is the
semicircle weight sqrt(1 - u^2/4p) and F is m^2 times the class density of
the full equal-determinant pair group at level m (the largest image the
joint mod-m representation can have; curve-specific smaller images are out
of scope here).  Sampling is two-stage: pick the class pair by its total
mass, then each coordinate by inverse CDF inside its class.  Per-prime
normalization is exact, so the measure's leading constant never appears.

Streams: prime index i uses a Philox generator keyed (seed, i), making runs
bit-reproducible for any evaluation order or worker count.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import sieve_primes
from .local import delta_group_size, s_direct
from .matcount import PrimePower


@dataclass(frozen=True)
class ModelConfig:
    m: int
    n_max: int
    seed: int
    t1: int
    t2: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("level m must be >= 2")
        if self.n_max < 5:
            raise ValueError("n_max must be >= 5")


@dataclass
class SampleRun:
    config: ModelConfig
    primes: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    class_counts: np.ndarray  # m x m, counts of (u1 mod m, u2 mod m)
    hits: int                 # primes with (u1, u2) == (t1, t2)


def _prime_power_factors(m):
    factors = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            k = 0
            while m % d == 0:
                m //= d
                k += 1
            factors.append((d, k))
        d += 1
    if m > 1:
        factors.append((m, 1))
    return factors


def class_density(m, r1, r2):
    """|pairs with equal det and traces (r1, r2)| / |all equal-det pairs| at level m.

    Multiplicative over the prime-power factors of m.
    """
    if m < 2:
        raise ValueError("level m must be >= 2")
    density = Fraction(1)
    for ell, k in _prime_power_factors(m):
        pp = PrimePower(ell, k)
        density *= Fraction(s_direct(r1, r2, pp), delta_group_size(pp))
    return density


def trace_weight(m, r1, r2):
    """The congruence weight m^2 * class_density, an exact Fraction."""
    return m * m * class_density(m, r1, r2)


def semicircle_weights(p):
    """Integers strictly inside (-2 sqrt p, 2 sqrt p) and their weights."""
    umax = math.isqrt(4 * p - 1)
    u = np.arange(-umax, umax + 1, dtype=np.int64)
    w = np.sqrt(1.0 - u.astype(np.float64) ** 2 / (4.0 * p))
    return u, w


def class_mass_1d(p, m):
    """Exact-ordering sums of semicircle weights by residue class mod m."""
    u, w = semicircle_weights(p)
    return np.bincount((u % m).astype(np.int64), weights=w, minlength=m)


def sample_run(config):
    """Draw one trace-pair sequence; deterministic given config.seed."""
    m = config.m
    fweight = np.empty((m, m), dtype=np.float64)
    for r1 in range(m):
        for r2 in range(m):
            fweight[r1, r2] = float(trace_weight(m, r1, r2))
    primes = sieve_primes(config.n_max)
    primes = primes[primes >= 5]
    n = primes.shape[0]
    out1 = np.empty(n, dtype=np.int64)
    out2 = np.empty(n, dtype=np.int64)
    seed = config.seed & (2 ** 64 - 1)
    for i in range(n):
        p = int(primes[i])
        u, w = semicircle_weights(p)
        residues = (u % m).astype(np.int64)
        m1 = np.bincount(residues, weights=w, minlength=m)
        joint = m1[:, None] * m1[None, :] * fweight
        flat = np.cumsum(joint.ravel())
        rng = np.random.Generator(np.random.Philox(key=np.array([seed, i], dtype=np.uint64)))
        draws = rng.random(3)
        idx = int(np.searchsorted(flat, draws[0] * flat[-1], side="right"))
        idx = min(idx, m * m - 1)
        r1, r2 = divmod(idx, m)
        out1[i] = _draw_in_class(u, w, residues, r1, draws[1])
        out2[i] = _draw_in_class(u, w, residues, r2, draws[2])
    cc = np.bincount(
        (out1 % m) * m + (out2 % m), minlength=m * m
    ).reshape(m, m)
    hits = int(np.count_nonzero((out1 == config.t1) & (out2 == config.t2)))
    return SampleRun(config, primes, out1, out2, cc, hits)


def _draw_in_class(u, w, residues, r, x):
    mask = residues == r
    cw = np.cumsum(w[mask])
    j = int(np.searchsorted(cw, x * cw[-1], side="right"))
    j = min(j, cw.shape[0] - 1)
    return int(u[mask][j])


@dataclass(frozen=True)
class GrowthCheck:
    hits: int
    predicted: float
    ratio: float | None


def growth_check(run, config, upto=None):
    """Exact-trace hits against the finite-level loglog-law prediction.

    The prediction uses sum(1/p) over the sampled primes instead of
    loglog N, which removes the Mertens-constant offset at desk scale.
    """
    n_cut = upto if upto is not None else config.n_max
    sel = run.primes <= n_cut
    hits = int(np.count_nonzero((run.u1[sel] == config.t1) & (run.u2[sel] == config.t2)))
    sum_invp = float(np.sum(1.0 / run.primes[sel].astype(np.float64)))
    weight = float(trace_weight(config.m, config.t1 % config.m, config.t2 % config.m))
    predicted = weight / math.pi ** 2 * sum_invp
    ratio = hits / predicted if predicted > 0 else None
    return GrowthCheck(hits, predicted, ratio)


def _semicircle_cdf(x):
    x = min(1.0, max(-1.0, x))
    return (x * math.sqrt(1.0 - x * x) + math.asin(x)) / 2.0


def rectangle_mass_exact(a, b, c, d):
    """Joint semicircle mass of [a,b) x [c,d) inside [-1,1]^2."""
    return (
        4.0
        / math.pi ** 2
        * (_semicircle_cdf(b) - _semicircle_cdf(a))
        * (_semicircle_cdf(d) - _semicircle_cdf(c))
    )


def rectangle_mass_empirical(run, a, b, c, d):
    """Fraction of normalized samples falling in [a,b) x [c,d)."""
    scale = 1.0 / (2.0 * np.sqrt(run.primes.astype(np.float64)))
    x = run.u1 * scale
    y = run.u2 * scale
    inside = (x >= a) & (x < b) & (y >= c) & (y < d)
    return float(np.count_nonzero(inside)) / run.primes.shape[0]
