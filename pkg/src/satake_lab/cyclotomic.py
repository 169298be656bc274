"""Exact sums of roots of unity, normalised in Z[x]/Phi_N."""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Division of integer polynomials (coefficient lists, lowest degree first) by a monic divisor."""
    num = list(num)
    d = len(den) - 1
    assert den[-1] == 1, "divisor must be monic"
    if len(num) <= d:
        return [0], num
    quot = [0] * (len(num) - d)
    for k in range(len(num) - 1, d - 1, -1):
        coef = num[k]
        if coef:
            quot[k - d] = coef
            for i in range(d + 1):
                num[k - d + i] -= coef * den[i]
    rem = num[:d] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_poly(d)))
            assert not any(rem)
    return tuple(poly)


@dataclass(frozen=True)
class RootOfUnitySum:
    """sum_k coeff_k * e(k / order), kept as a reduced residue in Z[x]/Phi_order."""

    order: int
    terms: tuple[tuple[int, int], ...]

    @classmethod
    def from_exponents(cls, order: int, exponents: Iterable[int]) -> "RootOfUnitySum":
        c = Counter(int(k) % order for k in exponents)
        return cls(order, tuple(sorted((k, v) for k, v in c.items() if v)))

    @classmethod
    def from_fractions(cls, fracs: Iterable[Fraction]) -> "RootOfUnitySum":
        """sum_f e(f) for rationals f."""
        fracs = [Fraction(f) % 1 for f in fracs]
        order = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
        return cls.from_exponents(order, (f.numerator * (order // f.denominator) for f in fracs))

    @classmethod
    def zero(cls) -> "RootOfUnitySum":
        return cls(1, ())

    def lift(self, order: int) -> "RootOfUnitySum":
        if order % self.order:
            raise ValueError("new order must be a multiple")
        f = order // self.order
        return RootOfUnitySum(order, tuple((k * f, v) for k, v in self.terms))

    def reduced(self) -> tuple[int, ...]:
        """Canonical coefficient vector modulo Phi_order."""
        poly = [0] * self.order
        for k, v in self.terms:
            poly[k] += v
        _, rem = _poly_divmod(poly, list(cyclotomic_poly(self.order)))
        while len(rem) > 1 and rem[-1] == 0:
            rem.pop()
        return tuple(rem)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootOfUnitySum):
            return NotImplemented
        n = math.lcm(self.order, other.order)
        return self.lift(n).reduced() == other.lift(n).reduced()

    def __hash__(self) -> int:
        # Equal values may carry different orders, so hash the float rendering coarsely.
        v = complex(self)
        return hash((round(v.real, 6), round(v.imag, 6)))

    def __add__(self, other: "RootOfUnitySum") -> "RootOfUnitySum":
        n = math.lcm(self.order, other.order)
        c: Counter = Counter()
        for k, v in self.lift(n).terms + other.lift(n).terms:
            c[k] += v
        return RootOfUnitySum(n, tuple(sorted((k, v) for k, v in c.items() if v)))

    def __complex__(self) -> complex:
        return sum((v * cmath.exp(2j * math.pi * k / self.order) for k, v in self.terms), 0j)

    def is_integer(self) -> bool:
        r = self.reduced()
        return all(x == 0 for x in r[1:])

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*e({k}/{self.order})" for k, v in self.terms)
