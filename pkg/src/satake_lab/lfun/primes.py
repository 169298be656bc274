"""Prime tables: a segmented sieve with an on-disk bit-array cache."""

from __future__ import annotations

import math
import os
import threading
from pathlib import Path

import numpy as np

SEGMENT = 1 << 22


class SieveExhausted(ValueError):
    """Raised when a computation needs primes beyond the available table."""


def _small_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def odd_composite_bits(limit: int) -> np.ndarray:
    """Boolean array a with a[i] true iff 2i+1 <= limit is prime (segmented)."""
    n_odd = (limit + 1) // 2
    out = np.zeros(n_odd, dtype=bool)
    base = _small_primes(math.isqrt(limit))[1:]  # odd base primes
    for lo in range(0, n_odd, SEGMENT):
        hi = min(n_odd, lo + SEGMENT)
        seg = np.ones(hi - lo, dtype=bool)
        # index i <-> value 2i+1
        for p in base:
            start = p * p
            if start > 2 * hi - 1:
                break
            first = max(start, ((2 * lo + 1 + p - 1) // p) * p)
            if first % 2 == 0:
                first += p
            seg[(first - 1) // 2 - lo :: p] = False
        out[lo:hi] = seg
    if n_odd:
        out[0] = False  # 1 is not prime
    return out


class PrimeTable:
    """Primes up to ``limit``, optionally persisted as a packed bit file."""

    def __init__(self, limit: int, cache_dir: str | os.PathLike | None = None):
        self.limit = int(limit)
        bits = None
        path = None
        if cache_dir is not None:
            path = Path(cache_dir) / f"primes_{self.limit}.bits"
            if path.exists():
                raw = np.fromfile(path, dtype=np.uint8)
                bits = np.unpackbits(raw, count=(self.limit + 1) // 2).astype(bool)
        if bits is None:
            bits = odd_composite_bits(self.limit)
            if path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
                tmp = path.with_suffix(".tmp")
                np.packbits(bits).tofile(tmp)
                os.replace(tmp, path)
        odd = 2 * np.flatnonzero(bits).astype(np.int64) + 1
        head = np.array([2], dtype=np.int64) if self.limit >= 2 else np.zeros(0, dtype=np.int64)
        self.primes = np.concatenate([head, odd])

    def up_to(self, x: float) -> np.ndarray:
        if x > self.limit:
            raise SieveExhausted(f"primes needed up to {x:.6g}, table ends at {self.limit}")
        return self.primes[: np.searchsorted(self.primes, math.floor(x), side="right")]


_tables: dict[str | None, PrimeTable] = {}
_lock = threading.Lock()


def default_cache_dir() -> Path:
    """$SATAKE_LAB_CACHE/primes, falling back to ~/.cache/satake-lab/primes."""
    env = os.environ.get("SATAKE_LAB_CACHE")
    return (Path(env) if env else Path.home() / ".cache" / "satake-lab") / "primes"


def primes_up_to(x: float, cache_dir: str | os.PathLike | None = None) -> np.ndarray:
    """All primes <= x; the shared table grows by doubling."""
    key = str(cache_dir) if cache_dir is not None else None
    if cache_dir is None:
        cache_dir = default_cache_dir()
    with _lock:
        table = _tables.get(key)
        if table is None or table.limit < x:
            limit = max(int(x), 1000)
            if table is not None:
                limit = max(limit, 2 * table.limit)
            # Round up to a power of two so cache files are reused across calls.
            limit = 1 << max(10, (limit - 1).bit_length())
            table = PrimeTable(limit, cache_dir)
            _tables[key] = table
    return table.up_to(x)


def clear_tables() -> None:
    with _lock:
        _tables.clear()


def prime_powers(x: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(p, k, p^k) for all prime powers p^k <= x, sorted by p^k."""
    ps, ks, ns = [], [], []
    if x >= 2:
        p = primes_up_to(x)
        k = 1
        power = p.copy()
        while power.size:
            ps.append(p)
            ks.append(np.full(p.size, k))
            ns.append(power)
            k += 1
            keep = power <= x // p
            p = p[keep]
            power = power[keep] * p
    if not ps:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    p, k, n = (np.concatenate(a) for a in (ps, ks, ns))
    order = np.argsort(n, kind="stable")
    return p[order], k[order], n[order]


def chebyshev_psi(x: float) -> float:
    """Sum of the von Mangoldt function over n <= x."""
    if x < 2:
        return 0.0
    p, _, _ = prime_powers(x)
    return math.fsum(np.log(p.astype(float)))


def prime_sum_lemma(k: int, psi, logC: float, weights: str = "prime") -> float:
    """(1/logC) sum_p (log p) p^{-k/2} psi_hat(k log p / logC).

    ``weights="von_mangoldt"`` sums over all prime powers q = p^j instead of
    primes only, i.e. the Chebyshev-weighted version of the same sum.
    """
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    if psi.kind == "zero":
        return 0.0
    bound = math.exp(psi.delta * logC / k)
    if weights == "prime":
        p = primes_up_to(bound).astype(float)
        logq = np.log(p)
        logp = logq
    elif weights == "von_mangoldt":
        p, j, q = prime_powers(bound)
        logq = np.log(q.astype(float))
        logp = np.log(p.astype(float))
    else:
        raise ValueError("weights must be 'prime' or 'von_mangoldt'")
    terms = logp * np.exp(-0.5 * k * logq) * psi.psi_hat(k * logq / logC)
    return math.fsum(terms) / logC
