"""Monte-Carlo weighted 1-level density over a synthetic family.

Each member gets independent Sato-Tate Satake points at every prime. The
statistic is the prime side of the explicit formula for rho_* pi, with the
archimedean term replaced by psi_hat(0) (conductor ratio pinned to 1).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..charcalc import CharacterExpansion, DominantWeight, adams_decompose, frobenius_schur
from ..satotate import _block_angles
from .primes import SieveExhausted, primes_up_to
from .testfn import TestFunctionPair

PRIME_CHUNK = 256
PRIME_LIMIT = 1 << 31


@dataclass(frozen=True)
class OneLevelDensityResult:
    estimate: float
    predicted: float
    std_error: float
    finite_prediction: float
    members: int
    n_primes: int
    kmax: int
    indicator: int

    @property
    def zscore(self) -> float:
        return (self.estimate - self.predicted) / self.std_error if self.std_error > 0 else math.inf

    @property
    def finite_zscore(self) -> float:
        if self.std_error <= 0:
            return math.inf
        return (self.estimate - self.finite_prediction) / self.std_error


def _weights(primes: np.ndarray, k: int, psi: TestFunctionPair, logC: float) -> np.ndarray:
    """(2/logC) log p p^{-k/2} psi_hat(k log p / logC); the factor 2 folds in the conjugate term."""
    logp = np.log(primes.astype(float))
    return 2.0 / logC * logp * np.exp(-0.5 * k * logp) * psi.psi_hat(k * logp / logC)


def predicted_density(weight: DominantWeight, psi: TestFunctionPair) -> float:
    """psi_hat(0) - s(rho) psi(0) / 2."""
    return float(psi.psi_hat(0.0)) - frobenius_schur(weight) * psi.psi_at_zero() / 2


def _chunk_sum(
    chunk: int,
    primes: np.ndarray,
    weights: list[np.ndarray],
    expansions: list[CharacterExpansion],
    rank: int,
    members: int,
    seed: int,
    method: str,
    table: Mapping[int, np.ndarray] | None,
) -> np.ndarray:
    if table is None:
        angles = _block_angles(rank, members * len(primes), seed, chunk, method, canonical=False)
        angles = angles.reshape(members, len(primes), rank)
    else:
        angles = np.stack([np.asarray(table[int(p)], dtype=float)[:members] for p in primes], axis=1)
    z = np.exp(1j * angles)
    total = np.zeros(members)
    for w, expansion in zip(weights, expansions):
        live = np.flatnonzero(w)
        if live.size == 0:
            continue
        pts = z[:, live, :].reshape(-1, rank)
        beta = expansion.evaluate_many(pts).real.reshape(members, live.size)
        total += beta @ w[live]
    return total


def one_level_density_sim(
    rank: int,
    rho_weight: DominantWeight,
    members: int,
    logC: float,
    psi: TestFunctionPair,
    seed: int,
    kmax: int | str = 2,
    method: str = "rejection",
    workers: int = 1,
    satake_table: Mapping[int, np.ndarray] | None = None,
    prime_limit: int = PRIME_LIMIT,
) -> OneLevelDensityResult:
    """Average of psi_hat(0) - (1/logC) sum_{p,k} log p p^{-k/2} 2 Re(beta_k) psi_hat(k log p / logC).

    beta_k at p is chi_rho(z_p^k), obtained from the Adams expansion of rho.
    ``kmax="all"`` keeps every k with p^k <= e^{delta logC}. ``satake_table``
    maps p to an (members, rank) array of angles and replaces the random draws.
    """
    if rho_weight.rank != rank:
        raise ValueError("weight rank does not match the group rank")
    if members < 1:
        raise ValueError("members must be positive")
    bound = math.exp(psi.delta * logC)
    if bound > prime_limit:
        raise SieveExhausted(f"primes up to {bound:.3g} exceed the table limit {prime_limit}")
    primes = primes_up_to(bound)
    if satake_table is not None:
        missing = [int(p) for p in primes if int(p) not in satake_table]
        if missing:
            raise SieveExhausted(f"Satake table lacks {len(missing)} primes, first {missing[0]}")
        members = min(members, min(len(np.asarray(satake_table[int(p)])) for p in primes))
    if kmax == "all":
        kmax = max(1, int(math.floor(psi.delta * logC / math.log(2))))
    kmax = int(kmax)
    expansions = [adams_decompose(rho_weight, k) for k in range(1, kmax + 1)]
    all_weights = [_weights(primes, k, psi, logC) for k in range(1, kmax + 1)]

    starts = list(range(0, len(primes), PRIME_CHUNK))

    def job(j: int) -> np.ndarray:
        sl = slice(starts[j], starts[j] + PRIME_CHUNK)
        return _chunk_sum(j, primes[sl], [w[sl] for w in all_weights], expansions, rank, members,
                          seed, method, satake_table)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(job, range(len(starts))))
    else:
        parts = [job(j) for j in range(len(starts))]
    prime_part = np.sum(parts, axis=0) if parts else np.zeros(members)
    head = float(psi.psi_hat(0.0))
    d = head - prime_part
    se = float(np.std(d, ddof=1) / math.sqrt(members)) if members > 1 else math.inf
    finite = head - sum(
        float(exp.zero_coefficient()) * float(np.sum(w)) for exp, w in zip(expansions, all_weights)
    )
    return OneLevelDensityResult(
        estimate=float(np.mean(d)),
        predicted=predicted_density(rho_weight, psi),
        std_error=se,
        finite_prediction=finite,
        members=members,
        n_primes=len(primes),
        kmax=kmax,
        indicator=frobenius_schur(rho_weight),
    )
