import cmath
import math
from fractions import Fraction

import pytest

from satake_lab.cyclotomic import RootOfUnitySum, cyclotomic_poly


def mobius(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


@pytest.mark.parametrize("n,coeffs", [
    (1, (-1, 1)), (2, (1, 1)), (3, (1, 1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)),
    (12, (1, 0, -1, 0, 1)),
])
def test_cyclotomic_poly_small(n, coeffs):
    assert cyclotomic_poly(n) == coeffs


def test_cyclotomic_degree_is_totient():
    for n in range(1, 40):
        phi = sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
        assert len(cyclotomic_poly(n)) - 1 == phi


@pytest.mark.parametrize("n", range(1, 31))
def test_ramanujan_sum_at_one_is_mobius(n):
    s = RootOfUnitySum.from_exponents(n, [k for k in range(n) if math.gcd(k, n) == 1])
    assert s.is_integer()
    assert s.reduced()[0] == mobius(n)
    assert abs(complex(s) - mobius(n)) < 1e-9


def test_equality_across_orders():
    a = RootOfUnitySum.from_exponents(3, [1, 2])  # e(1/3) + e(2/3) = -1
    b = RootOfUnitySum.from_exponents(2, [1])  # e(1/2) = -1
    assert a == b
    assert hash(a) == hash(b)
    assert a != RootOfUnitySum.from_exponents(1, [0])


def test_from_fractions_and_addition():
    s = RootOfUnitySum.from_fractions([Fraction(1, 4), Fraction(3, 4)])
    assert s == RootOfUnitySum.zero()
    t = RootOfUnitySum.from_exponents(4, [1]) + RootOfUnitySum.from_exponents(6, [1])
    assert abs(complex(t) - (1j + cmath.exp(1j * math.pi / 3))) < 1e-12


def test_text_form():
    assert RootOfUnitySum.zero().to_text() == "0"
    assert RootOfUnitySum.from_exponents(5, [2, 2]).to_text() == "2*e(2/5)"
