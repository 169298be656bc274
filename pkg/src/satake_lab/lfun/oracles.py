"""Direct-summation reference values, independent of the approximate functional equation."""

from __future__ import annotations

import math
from fractions import Fraction


def _bernoulli(n: int) -> list[Fraction]:
    b = [Fraction(0)] * (n + 1)
    b[0] = Fraction(1)
    for m in range(1, n + 1):
        b[m] = -sum(math.comb(m + 1, j) * b[j] for j in range(m)) / (m + 1)
    return b


def zeta_euler_maclaurin(s: float, n: int = 20, terms: int = 14) -> float:
    """zeta(s) for real s != 1 by Euler-Maclaurin summation with cutoff n."""
    if s == 1:
        raise ValueError("pole at s = 1")
    head = math.fsum(k ** (-s) for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + 0.5 * n ** (-s)
    bern = _bernoulli(2 * terms)
    rising = s  # s (s+1) ... (s+2j-2)
    for j in range(1, terms + 1):
        tail += float(bern[2 * j]) / math.factorial(2 * j) * rising * n ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return head + tail


def dirichlet_beta_cvz(s: float, n: int = 40) -> float:
    """beta(s) = sum (-1)^k (2k+1)^{-s} via Cohen-Villegas-Zagier alternating-series acceleration."""
    d = (3 + math.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b, c, total = -1.0, -d, 0.0
    for k in range(n):
        c = b - c
        total += c * (2 * k + 1) ** (-s)
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1))
    return total / d

