"""Sato-Tate measure on conjugacy classes of SU(r): density, sampling, integration.

Sampling is organised in fixed-size blocks; block ``b`` draws from its own
``SeedSequence(seed, spawn_key=(b,))`` stream, so a batch depends only on
``(rank, count, seed, method)`` and never on how many workers produced it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np

from .charcalc import DominantWeight, SatakePoint, characters_many, schur_eval_many

BLOCK = 1 << 16
ANGLE_TOL = 1e-12


def canonical_angles(angles: np.ndarray) -> np.ndarray:
    """Wrap into (-pi, pi] and sort each row descending."""
    a = np.asarray(angles, dtype=float)
    wrapped = np.pi - np.mod(np.pi - a, 2 * np.pi)
    return -np.sort(-wrapped, axis=-1)


@dataclass(frozen=True)
class TorusClassPoint:
    """A point of T0/W stored by its sorted eigen-angles."""

    angles: tuple[float, ...]

    def __post_init__(self) -> None:
        a = canonical_angles(np.asarray(self.angles, dtype=float))
        excess = math.remainder(float(np.sum(a)), 2 * math.pi)
        if abs(excess) > ANGLE_TOL * max(1, len(a)):
            raise ValueError(f"angles must sum to 0 mod 2pi (off by {excess:.3g})")
        object.__setattr__(self, "angles", tuple(float(x) for x in a))

    @property
    def rank(self) -> int:
        return len(self.angles)

    def entries(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.angles))

    def to_satake(self) -> SatakePoint:
        e = self.entries()
        # Absorb rounding so the product-1 check is tight.
        e[-1] = 1 / np.prod(e[:-1])
        return SatakePoint(tuple(e))


def vandermonde_sq(z: np.ndarray) -> np.ndarray:
    """prod_{i<j} |z_i - z_j|^2 over the last axis."""
    r = z.shape[-1]
    out = np.ones(z.shape[:-1])
    for i in range(r):
        for j in range(i + 1, r):
            out = out * np.abs(z[..., i] - z[..., j]) ** 2
    return out


def st_density(x: TorusClassPoint | Sequence[float]) -> float:
    """Density w.r.t. d(theta_1)...d(theta_{r-1}) on the sorted angle domain."""
    angles = np.asarray(x.angles if isinstance(x, TorusClassPoint) else x, dtype=float)
    r = angles.shape[-1]
    return float(vandermonde_sq(np.exp(1j * angles)) / (2 * np.pi) ** (r - 1))


def st_density_many(angles: np.ndarray) -> np.ndarray:
    angles = np.asarray(angles, dtype=float)
    return vandermonde_sq(np.exp(1j * angles)) / (2 * np.pi) ** (angles.shape[-1] - 1)


# ---------------------------------------------------------------------------
# Samplers


def haar_su(rng: np.random.Generator, n: int, r: int) -> np.ndarray:
    """``n`` Haar-random matrices in SU(r), shape (n, r, r)."""
    g = (rng.standard_normal((n, r, r)) + 1j * rng.standard_normal((n, r, r))) / math.sqrt(2)
    q, R = np.linalg.qr(g)
    d = np.diagonal(R, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[:, None, :]
    det = np.linalg.det(q)
    return q / (det ** (1.0 / r))[:, None, None]


def _haar_block(rng: np.random.Generator, n: int, r: int) -> np.ndarray:
    eig = np.linalg.eigvals(haar_su(rng, n, r))
    return np.angle(eig)


def _vandermonde_sq_angles(th: np.ndarray, dtype=np.float64) -> np.ndarray:
    """|Delta(e^{i th})|^2 = prod_{i<j} (2 - 2 cos(th_i - th_j)), in real arithmetic."""
    r = th.shape[-1]
    out = np.ones(th.shape[:-1], dtype=dtype)
    for i in range(r):
        for j in range(i + 1, r):
            out *= 2.0 - 2.0 * np.cos((th[..., i] - th[..., j]).astype(dtype))
    return out


def _rejection_block(rng: np.random.Generator, n: int, r: int) -> np.ndarray:
    # Uniform proposals on the maximal torus; accept with |Delta|^2 / r^r.
    bound = float(r**r)
    accept_rate = math.factorial(r) / bound
    parts, have = [], 0
    while have < n:
        need = n - have
        m = int(need / accept_rate * 1.1) + 16
        full = np.empty((m, r))
        full[:, :-1] = rng.uniform(-np.pi, np.pi, size=(m, r - 1))
        full[:, -1] = -full[:, :-1].sum(axis=1)
        # The accept test runs in float32 (vectorised trig is far cheaper); the
        # angles themselves stay float64. Misclassification needs u within ~1e-6
        # relative of |Delta|^2, a negligible bias next to Monte-Carlo error.
        keep = rng.uniform(0.0, bound, size=m) < _vandermonde_sq_angles(full, np.float32)
        acc = full[keep][:need]
        parts.append(acc)
        have += len(acc)
    return np.concatenate(parts) if len(parts) > 1 else parts[0]


_SAMPLERS = {"haar": _haar_block, "rejection": _rejection_block}


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def _block_angles(rank: int, n: int, seed: int, block: int, method: str, canonical: bool = True) -> np.ndarray:
    if method not in _SAMPLERS:
        raise ValueError(f"unknown sampling method {method!r}")
    raw = _SAMPLERS[method](_block_rng(seed, block), n, rank)
    return canonical_angles(raw) if canonical else raw


def iter_blocks(rank: int, count: int, seed: int, method: str = "haar",
                workers: int = 1) -> Iterator[np.ndarray]:
    """Canonical angle arrays, one per block, in block order."""
    sizes = [min(BLOCK, count - b * BLOCK) for b in range((count + BLOCK - 1) // BLOCK)]
    if workers <= 1:
        for b, n in enumerate(sizes):
            yield _block_angles(rank, n, seed, b, method)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # Bounded look-ahead keeps memory flat for very large counts.
        pending = []
        for b, n in enumerate(sizes):
            pending.append(pool.submit(_block_angles, rank, n, seed, b, method))
            if len(pending) > 2 * workers:
                yield pending.pop(0).result()
        for fut in pending:
            yield fut.result()


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """i.i.d. Sato-Tate draws, stored as an (count, rank) array of sorted angles."""

    rank: int
    seed: int
    count: int
    angles: np.ndarray
    method: str = "haar"

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, i: int) -> TorusClassPoint:
        return TorusClassPoint(tuple(self.angles[i]))

    @property
    def points(self) -> list[TorusClassPoint]:
        return [self[i] for i in range(self.count)]

    def entries(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SampleBatch):
            return NotImplemented
        return (self.rank, self.seed, self.count) == (other.rank, other.seed, other.count) and \
            np.array_equal(self.angles, other.angles)

    def to_text(self) -> str:
        lines = [f"{self.rank} {self.seed} {self.count}"]
        lines += [" ".join(repr(float(a)) for a in row) for row in self.angles]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SampleBatch":
        rows = [ln for ln in text.splitlines() if ln.strip()]
        rank, seed, count = (int(x) for x in rows[0].split())
        angles = np.array([[float(x) for x in ln.split()] for ln in rows[1:]], dtype=float)
        angles = angles.reshape(count, rank)
        return cls(rank, seed, count, angles)


def st_sample(rank: int, count: int, seed: int, method: str = "haar", workers: int = 1) -> SampleBatch:
    if count < 1:
        raise ValueError("count must be positive")
    if rank < 2:
        raise ValueError("rank must be at least 2")
    blocks = list(iter_blocks(rank, count, seed, method, workers))
    return SampleBatch(rank, seed, count, np.concatenate(blocks), method)


# ---------------------------------------------------------------------------
# Integration


class _Accumulator:
    """Running sums for a complex mean and its standard error."""

    def __init__(self) -> None:
        self.n = 0
        self.re: list[float] = []
        self.im: list[float] = []
        self.sq: list[float] = []
        self.real_only = True

    def add(self, values: np.ndarray) -> None:
        # numpy's sum is pairwise; blocks are combined with fsum.
        self.n += values.size
        self.real_only &= bool(np.isrealobj(values))
        self.re.append(float(np.sum(values.real)))
        self.im.append(float(np.sum(values.imag)) if np.iscomplexobj(values) else 0.0)
        self.sq.append(float(np.sum(np.abs(values) ** 2)))

    def result(self) -> tuple[complex | float, float]:
        mean = complex(math.fsum(self.re), math.fsum(self.im)) / self.n
        second = math.fsum(self.sq) / self.n
        var = max(second - abs(mean) ** 2, 0.0)
        se = math.sqrt(var / (self.n - 1)) if self.n > 1 else float("inf")
        return (mean.real if self.real_only else mean), se


def st_integrate(f: Callable[[np.ndarray], np.ndarray], rank: int, n: int, seed: int,
                 method: str = "haar", workers: int = 1) -> tuple[complex, float]:
    """Monte-Carlo integral of ``f`` against the Sato-Tate measure.

    ``f`` is vectorised: it receives an (m, rank) complex array of torus
    entries and returns m values. Returns (estimate, standard error).
    """
    acc = _Accumulator()
    for angles in iter_blocks(rank, n, seed, method, workers):
        vals = np.asarray(f(np.exp(1j * angles)))
        if vals.ndim == 0:
            vals = np.full(angles.shape[0], vals)
        acc.add(vals)
    return acc.result()


@dataclass
class GramResult:
    weights: list[DominantWeight]
    estimate: np.ndarray
    std_error: np.ndarray
    count: int

    def max_zscore(self) -> float:
        target = np.eye(len(self.weights))
        dev = np.abs(self.estimate - target)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(self.std_error > 0, dev / self.std_error, np.where(dev > 1e-12, np.inf, 0.0))
        return float(np.max(z))


def orthogonality_matrix(weights: Sequence[DominantWeight], rank: int, n: int, seed: int,
                         method: str = "haar", workers: int = 1) -> GramResult:
    """Monte-Carlo Gram matrix E[chi_a conj(chi_b)] in a single sampling pass."""
    W = len(weights)
    G = np.zeros((W, W), dtype=complex)
    M2 = np.zeros((W, W))
    for angles in iter_blocks(rank, n, seed, method, workers):
        z = np.exp(1j * angles)
        chi = characters_many(weights, z)
        G += chi @ chi.conj().T
        a2 = np.abs(chi) ** 2
        M2 += a2 @ a2.T
    G /= n
    var = np.maximum(M2 / n - np.abs(G) ** 2, 0.0)
    return GramResult(list(weights), G, np.sqrt(var / (n - 1)), n)


@lru_cache(maxsize=None)
def _legendre(m: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def st_quadrature(f: Callable[[np.ndarray], np.ndarray], rank: int, nodes: int = 96) -> complex:
    """Deterministic Gauss-Legendre integral against the Sato-Tate measure (rank 2 or 3)."""
    if rank == 2:
        t, w = _legendre(nodes, 0.0, math.pi)
        z = np.exp(1j * np.stack([t, -t], axis=1))
        dens = (2 / math.pi) * np.sin(t) ** 2
        return complex(np.sum(w * dens * np.asarray(f(z))))
    if rank == 3:
        t, w = _legendre(nodes, -math.pi, math.pi)
        a, b = np.meshgrid(t, t, indexing="ij")
        full = np.stack([a.ravel(), b.ravel(), -(a + b).ravel()], axis=1)
        z = np.exp(1j * full)
        dens = vandermonde_sq(z) / (6 * (2 * math.pi) ** 2)
        ww = np.outer(w, w).ravel()
        return complex(np.sum(ww * dens * np.asarray(f(z))))
    raise ValueError("quadrature path is available for rank 2 and 3 only")


def character(weight: DominantWeight) -> Callable[[np.ndarray], np.ndarray]:
    return lambda z: schur_eval_many(weight, z)


def character_product(a: DominantWeight, b: DominantWeight) -> Callable[[np.ndarray], np.ndarray]:
    return lambda z: schur_eval_many(a, z) * np.conj(schur_eval_many(b, z))
