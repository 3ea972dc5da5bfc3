"""Counting 2x2 matrices over Z/ell^k Z with prescribed trace and determinant.

Three independent routes to m(t, u; ell^k):

* ``m_closed`` -- the thirteen-case closed form (four cases for odd ell, one
  for ell = 2 with odd trace, eight for ell = 2 with even trace), dispatched
  through an inspectable case table so each branch is unit-testable;
* ``m_dks``    -- the square-count recursion over N_D(ell^j), evaluated in
  exact rationals with an integrality assertion;
* ``m_brute``  -- direct enumeration of (a, b, c) with d = t - a, budgeted.

They are cross-checked exhaustively in the verify suite.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from .arith import legendre_symbol, nu_lk, padic_valuation

BRUTE_BUDGET_DEFAULT = 2_000_000


@dataclass(frozen=True)
class PrimePower:
    """A local modulus ell^k."""

    ell: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.ell < 2:
            raise ValueError("ell must be prime")

    @property
    def modulus(self):
        return self.ell ** self.k


@dataclass(frozen=True)
class MatrixCount:
    t: int
    u: int
    count: int
    n: int


def _require_unit(u, pp):
    if u % pp.ell == 0:
        raise ValueError(f"u = {u} is not a unit mod {pp.ell}^{pp.k}")


def _exp_at_cap(ell, k):
    # exponent in the n = k (odd ell) and n = k+2 (ell = 2) correction term
    e = 3 * k // 2 - 1 if k % 2 == 0 else (3 * k - 1) // 2
    assert (3 * k + (1 - (-1) ** k) // 2) % 2 == 0  # 3k/2 + (1-(-1)^k)/4 is integral
    return e


# Case table: (case id, predicate(n, k, sym_or_r), count formula).  ``sym`` is
# the Legendre symbol of D/ell^n for odd ell; ``r`` is D/2^n mod 8 for ell = 2
# with even t.  Base = ell^{2k} + ell^{2k-1}.

def _odd_ell_cases(ell, k):
    base = ell ** (2 * k) + ell ** (2 * k - 1)
    return [
        ("odd:n-even-split", lambda n, s: n < k and n % 2 == 0 and s == 1,
         lambda n, s: base),
        ("odd:n-even-inert", lambda n, s: n < k and n % 2 == 0 and s == -1,
         lambda n, s: base - 2 * ell ** (2 * k - n // 2 - 1)),
        ("odd:n-odd", lambda n, s: n < k and n % 2 == 1,
         lambda n, s: base - (ell + 1) * ell ** (2 * k - (n + 3) // 2)),
        ("odd:n-cap", lambda n, s: n == k,
         lambda n, s: base - ell ** _exp_at_cap(ell, k)),
    ]


def _two_even_t_cases(k):
    base = 2 ** (2 * k) + 2 ** (2 * k - 1)
    return [
        ("two:n-cap", lambda n, r: n == k + 2,
         lambda n, r: base - 2 ** _exp_at_cap(2, k)),
        ("two:n-odd", lambda n, r: n < k + 2 and n % 2 == 1,
         lambda n, r: base - 3 * 2 ** (2 * k - (n + 1) // 2)),
        ("two:n-eq-k+1", lambda n, r: n == k + 1 and n % 2 == 0,
         lambda n, r: base - 2 ** ((3 * k - 1) // 2)),
        ("two:n-eq-k-r1mod4", lambda n, r: n == k and n % 2 == 0 and r % 4 == 1,
         lambda n, r: base - 2 ** (3 * k // 2 - 1)),
        ("two:n-eq-k-r3mod4", lambda n, r: n == k and n % 2 == 0 and r % 4 == 3,
         lambda n, r: base - 3 * 2 ** (3 * k // 2 - 1)),
        ("two:n-lt-k-r3mod4", lambda n, r: n < k and n % 2 == 0 and r % 4 == 3,
         lambda n, r: base - 3 * 2 ** (2 * k - n // 2 - 1)),
        ("two:n-lt-k-r1mod8", lambda n, r: n < k and n % 2 == 0 and r % 8 == 1,
         lambda n, r: base),
        ("two:n-lt-k-r5mod8", lambda n, r: n < k and n % 2 == 0 and r % 8 == 5,
         lambda n, r: base - 2 ** (2 * k - n // 2)),
    ]


def m_closed_case(t, u, pp):
    """(case id, count) for m(t, u; ell^k); the dispatcher behind m_closed."""
    _require_unit(u, pp)
    ell, k = pp.ell, pp.k
    d = t * t - 4 * u
    n = nu_lk(t, u, ell, k)
    if ell == 2 and t % 2 == 1:
        return "two:odd-t", 2 ** (2 * k - 1)
    if ell > 2:
        sym = legendre_symbol(d // ell ** n, ell) if n < k else 0
        cases = _odd_ell_cases(ell, k)
        arg = sym
    else:
        r = d // 2 ** n if n < k + 2 else 0
        cases = _two_even_t_cases(k)
        arg = r
    for case_id, pred, formula in cases:
        if pred(n, arg):
            return case_id, formula(n, arg)
    raise AssertionError(f"case table miss for t={t} u={u} ell={ell} k={k} n={n}")


def m_closed(t, u, pp):
    """m(t, u; ell^k) by the closed-form case table; u must be a unit."""
    return m_closed_case(t, u, pp)[1]


def sqrt_count_N(D, m):
    """N_D(m) = #{x mod 4m : x^2 = D mod 4m} / 2, by enumeration."""
    if m < 1:
        raise ValueError("m must be >= 1")
    mod = 4 * m
    d = D % mod
    count = sum(1 for x in range(mod) if (x * x - d) % mod == 0)
    return Fraction(count, 2)


def m_dks(t, u, pp):
    """m(t, u; ell^k) via the N_D square-count recursion, exact rationals."""
    _require_unit(u, pp)
    ell, k = pp.ell, pp.k
    d = t * t - 4 * u
    assert d % 4 in (0, 1)
    assert sqrt_count_N(d, 1) == 1
    v = padic_valuation(ell, d)
    jmax = k if d == 0 else min(k, int(v) + 1)
    total = Fraction(1)
    prev = Fraction(1)  # N_D(1)
    for j in range(1, jmax + 1):
        cur = sqrt_count_N(d, ell ** j)
        total += (cur - prev) / ell ** j
        prev = cur
    result = total * ell ** (2 * k)
    assert result.denominator == 1, f"non-integral m for t={t} u={u} {pp}"
    assert result >= 0
    return int(result)


def m_brute(t, u, pp, budget=BRUTE_BUDGET_DEFAULT):
    """m(t, u; ell^k) by enumerating a, b, c with d = t - a.

    Refuses when ell^{3k} exceeds the budget; callers fall back to the closed
    form above that size.
    """
    _require_unit(u, pp)
    q = pp.modulus
    if q ** 3 > budget:
        raise ValueError(f"brute-force budget exceeded: {q}^3 > {budget}")
    return _kernels.m_brute(t % q, u % q, q)
