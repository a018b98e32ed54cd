import math
from fractions import Fraction

import pytest

from psitools import InsufficientSieveError
from psitools.squarefree import (
    count_squarefree_exact,
    count_squarefree_formula,
    count_squarefree_formula_range,
    primorial_divisor_tail,
    psi_product_exact,
    squarefree_harmonic,
    squarefree_harmonic_exact,
    squarefree_residual,
)


def brute_squarefree(n):
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def test_counts_small(tables_1e4):
    assert count_squarefree_exact(10, tables_1e4) == 7
    assert count_squarefree_exact(100, tables_1e4) == 61
    brute = 0
    for x in range(1, 1_001):
        brute += brute_squarefree(x)
        assert count_squarefree_exact(x, tables_1e4) == brute, x


def test_formula_matches_exact(tables_1e4):
    for x in range(1, 10_001):
        assert count_squarefree_formula(x, tables_1e4) == count_squarefree_exact(x, tables_1e4), x


def test_formula_range_matches_scalar(tables_1e4):
    table = count_squarefree_formula_range(10_000, tables_1e4)
    assert table[0] == 0
    for x in (1, 2, 10, 99, 360, 4096, 9_999, 10_000):
        assert table[x] == count_squarefree_formula(x, tables_1e4)


def test_formula_beyond_table_limit(tables_1e4):
    # only sqrt(x) of sieve is needed
    assert count_squarefree_formula(100_000_000, tables_1e4) == 60_792_694
    with pytest.raises(InsufficientSieveError):
        count_squarefree_formula(10_001 ** 2, tables_1e4)
    with pytest.raises(ValueError):
        count_squarefree_formula(0, tables_1e4)


def test_known_density_point(tables_1e6):
    assert count_squarefree_formula(1_000_000, tables_1e6) == 607_926


def test_residual_pair(tables_1e4):
    half, quarter = squarefree_residual(10, tables_1e4)
    assert half.x == quarter.x == 10
    assert half.value == quarter.value == 7.0
    assert half.main_term == quarter.main_term
    assert half.residual == quarter.residual
    assert half.scale_exponent == 0.5
    assert quarter.scale_exponent == 0.25
    assert half.main_term == pytest.approx(6.0792710185402663, rel=1e-15)
    assert half.residual == pytest.approx(0.9207289814597337, rel=1e-12)
    assert half.scaled_residual == pytest.approx(half.residual / math.sqrt(10), rel=1e-14)
    assert quarter.scaled_residual == pytest.approx(quarter.residual / 10 ** 0.25, rel=1e-14)


def test_harmonic_values(tables_1e4):
    one = squarefree_harmonic(1, tables_1e4)
    assert one.value == 1.0
    ten = squarefree_harmonic(10, tables_1e4)
    # 1 + 1/2 + 1/3 + 1/5 + 1/6 + 1/7 + 1/10 = 513/210
    assert ten.value == pytest.approx(513 / 210, rel=1e-15)
    assert ten.main_term == pytest.approx((6 / math.pi ** 2) * math.log(10), rel=1e-15)
    assert ten.residual == pytest.approx(1.0430532605009883, abs=1e-12)


def test_harmonic_exact(tables_1e4):
    assert squarefree_harmonic_exact(1, tables_1e4) == Fraction(1)
    assert squarefree_harmonic_exact(10, tables_1e4) == Fraction(171, 70)
    assert Fraction(171, 70) == Fraction(513, 210)


def test_harmonic_residual_settles(tables_1e6):
    # residual approaches a constant near 1.0439; successive decades agree to ~1e-2
    r5 = squarefree_harmonic(100_000, tables_1e6).residual
    r6 = squarefree_harmonic(1_000_000, tables_1e6).residual
    assert abs(r6 - r5) < 1e-2
    assert r6 == pytest.approx(1.0439, abs=1e-3)


def test_psi_product_exact(tables_1e4):
    assert psi_product_exact(10, tables_1e4) == Fraction(96, 35)
    # prod_{p<=x} (1 + 1/p) over 2,3,5,7: (3/2)(4/3)(6/5)(8/7)
    assert psi_product_exact(2, tables_1e4) == Fraction(3, 2)


def test_rational_identity(tables_1e4):
    # sum_{n<=x squarefree} 1/n = prod_{p<=x} (1+1/p) - sum over the
    # squarefree divisors of prod p exceeding x of 1/d
    for x in range(2, 21):
        lhs = squarefree_harmonic_exact(x, tables_1e4)
        rhs = psi_product_exact(x, tables_1e4) - primorial_divisor_tail(x, tables_1e4)
        assert lhs == rhs, x


def test_tail_values(tables_1e4):
    assert primorial_divisor_tail(2, tables_1e4) == Fraction(0)
    assert primorial_divisor_tail(6, tables_1e4) == Fraction(1, 5)
    assert primorial_divisor_tail(10, tables_1e4) == Fraction(3, 10)


def test_tail_domain(tables_1e4):
    with pytest.raises(ValueError):
        primorial_divisor_tail(1, tables_1e4)
    with pytest.raises(ValueError):
        primorial_divisor_tail(53, tables_1e4)
