"""Numerical experiments for spectral density estimates: the amplifier and a large-sieve ratio."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .charcalc import SatakePoint, characters_many, iota_inverse
from .satotate import _block_angles, _block_rng


@dataclass(frozen=True)
class NonTemperedPoint:
    """A tempered Satake point with one pair of entries scaled by p^{+theta} and p^{-theta}.

    ``placement = (i, j)`` names the entries of ``base`` that receive p^theta and
    p^-theta respectively. The product stays 1 for every p.
    """

    theta: float
    base: SatakePoint
    placement: tuple[int, int] = (0, 1)

    def __post_init__(self) -> None:
        if not 0 <= self.theta <= 0.5:
            raise ValueError("theta must lie in [0, 1/2]")
        i, j = self.placement
        r = self.base.rank
        if not (0 <= i < r and 0 <= j < r and i != j):
            raise ValueError(f"placement {self.placement} invalid for rank {r}")
        if not self.base.tempered:
            raise ValueError("base point must be tempered")

    @property
    def rank(self) -> int:
        return self.base.rank

    def at(self, p: int) -> SatakePoint:
        i, j = self.placement
        ent = list(self.base.entries)
        ent[i] *= p**self.theta
        ent[j] *= p ** (-self.theta)
        return SatakePoint(tuple(ent))

    def measured_theta(self, p: int) -> float:
        """max_i |Re mu_i| read back from the entries p^{mu_i}."""
        return max(abs(math.log(abs(x))) for x in self.at(p).entries) / math.log(p)


def placements(rank: int) -> Iterator[tuple[int, int]]:
    return itertools.permutations(range(rank), 2)


@dataclass(frozen=True)
class AmplifierResult:
    lhs: float
    rhs: float
    holds: bool


def amplifier_terms(z: SatakePoint, n: int) -> np.ndarray:
    """lambda(p^{n-j}, 1, ..., 1) for j = 0..r-1, via the Hecke/character dictionary."""
    r = z.rank
    weights = [iota_inverse((n - j,) + (0,) * (r - 2)) for j in range(r)]
    return characters_many(weights, z)[:, 0]


def amplifier_check(z: NonTemperedPoint, p: int, n: int) -> AmplifierResult:
    """sum_{j<r} |lambda(p^{n-j},1,...,1)|^2 against (2 p^theta)^{2(1-r)} p^{2 n theta}."""
    r = z.rank
    if n <= r:
        raise ValueError("need n > r")
    lam = amplifier_terms(z.at(p), n)
    lhs = float(np.sum(np.abs(lam) ** 2))
    rhs = (2 * p**z.theta) ** (2 * (1 - r)) * p ** (2 * n * z.theta)
    return AmplifierResult(lhs, rhs, lhs >= rhs)


def random_amplifier_configs(count: int, seed: int, ranks: Sequence[int] = (2, 3),
                             primes: Sequence[int] = (2, 3, 5), n_max: int = 12):
    """(r, theta, p, n, tempered base angles) tuples for sampled verification."""
    rng = _block_rng(seed, 0)
    for b in range(count):
        r = int(rng.choice(ranks))
        theta = float(rng.uniform(0, 0.5))
        p = int(rng.choice(primes))
        n = int(rng.integers(r + 1, n_max + 1))
        angles = rng.uniform(-math.pi, math.pi, size=r - 1)
        yield r, theta, p, n, np.append(angles, -angles.sum())


def amplifier_sweep(count: int, seed: int, all_placements: bool = True) -> tuple[int, list[tuple]]:
    """Run amplifier_check over sampled configurations; returns (checks run, failures)."""
    failures: list[tuple] = []
    runs = 0
    for r, theta, p, n, angles in random_amplifier_configs(count, seed):
        base = SatakePoint.from_angles(angles)
        for pl in (placements(r) if all_placements else [(0, 1)]):
            res = amplifier_check(NonTemperedPoint(theta, base, pl), p, n)
            runs += 1
            if not res.holds:
                failures.append((r, theta, p, n, pl, res.lhs, res.rhs))
    return runs, failures


def sieve_indices(rank: int, p: int, cutoff: int) -> list[tuple[int, ...]]:
    """Exponent vectors a with N = p^{a_1 + ... + a_{r-1}} <= cutoff."""
    top = int(math.floor(math.log(cutoff) / math.log(p) + 1e-12)) if cutoff >= 1 else -1
    out = [a for a in itertools.product(range(top + 1), repeat=rank - 1) if sum(a) <= top]
    return sorted(out, key=lambda a: (sum(a), a))


def sieve_coefficients(rank: int, members: int, cutoff: int, seed: int, p: int = 2,
                       method: str = "rejection") -> tuple[list[tuple[int, ...]], np.ndarray]:
    """lambda_m(p^a) for each member m and index a; shape (members, len(indices))."""
    idx = sieve_indices(rank, p, cutoff)
    angles = _block_angles(rank, members, seed, 0, method)
    z = np.exp(1j * angles)
    lam = characters_many([iota_inverse(a) for a in idx], z).T
    return idx, lam


def sieve_ratio_for(lam: np.ndarray, alpha: np.ndarray) -> float:
    """sum_m |sum_n alpha(n) lambda_m(n)|^2 / (M sum |alpha|^2)."""
    alpha = np.asarray(alpha, dtype=complex)
    num = math.fsum(np.abs(lam @ alpha) ** 2)
    den = lam.shape[0] * math.fsum(np.abs(alpha) ** 2)
    return num / den


def large_sieve_ratio(rank: int, members: int, cutoff: int, seed: int, trials: int = 20,
                      p: int = 2, alpha: np.ndarray | None = None) -> float:
    """Max over random alpha (or the given one) of the large-sieve ratio on synthetic coefficients."""
    if members < 1 or cutoff < 1:
        raise ValueError("members and cutoff must be positive")
    _, lam = sieve_coefficients(rank, members, cutoff, seed, p)
    if alpha is not None:
        return sieve_ratio_for(lam, alpha)
    rng = _block_rng(seed, 1)
    best = 0.0
    for _ in range(trials):
        a = rng.standard_normal(lam.shape[1]) + 1j * rng.standard_normal(lam.shape[1])
        best = max(best, sieve_ratio_for(lam, a))
    return best

