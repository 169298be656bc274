"""Character calculus for SU(r) and SL_r(C).

Irreducible characters are Schur polynomials indexed by dominant weights.
Evaluation is numerical (numpy); dimensions and decompositions are exact.
"""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import symfunc
from .symfunc import Partition, strip_zeros

log = logging.getLogger(__name__)

PRODUCT_TOL = 1e-12

HeckeIndex = tuple[int, ...]


@dataclass(frozen=True)
class DominantWeight:
    """Highest weight of an irreducible SL_r(C) representation.

    ``coords`` is non-increasing; it is normalised on construction so the
    last coordinate is 0, hence equality is equality modulo (1, ..., 1).
    """

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        c = tuple(int(x) for x in self.coords)
        if len(c) < 2:
            raise ValueError("rank must be at least 2")
        if any(c[i] < c[i + 1] for i in range(len(c) - 1)):
            raise ValueError(f"coordinates must be non-increasing: {c}")
        object.__setattr__(self, "coords", tuple(x - c[-1] for x in c))

    @classmethod
    def of(cls, *coords: int) -> "DominantWeight":
        return cls(tuple(coords))

    @classmethod
    def zero(cls, rank: int) -> "DominantWeight":
        return cls((0,) * rank)

    @classmethod
    def standard(cls, rank: int) -> "DominantWeight":
        return cls((1,) + (0,) * (rank - 1))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def partition(self) -> Partition:
        return strip_zeros(self.coords)

    @property
    def size(self) -> int:
        return sum(self.coords)

    @property
    def height(self) -> int:
        """theta_1 - theta_r."""
        return self.coords[0]

    def is_trivial(self) -> bool:
        return self.coords[0] == 0

    def dual(self) -> "DominantWeight":
        """Highest weight of the contragredient representation."""
        return DominantWeight(tuple(-x for x in reversed(self.coords)))

    def __str__(self) -> str:
        return ",".join(map(str, self.coords))

    @classmethod
    def parse(cls, text: str) -> "DominantWeight":
        return cls(tuple(int(x) for x in text.replace(" ", "").split(",")))


def dominant_weights(rank: int, max_first: int) -> list[DominantWeight]:
    """All normalised dominant weights of the given rank with coords[0] <= max_first."""
    out = []

    def rec(prefix: list[int], cap: int) -> None:
        if len(prefix) == rank - 1:
            out.append(DominantWeight(tuple(prefix) + (0,)))
            return
        for v in range(cap + 1):
            rec(prefix + [v], v)

    for first in range(max_first + 1):
        rec([first], first)
    return sorted(out, key=lambda w: w.coords, reverse=True)


def iota_map(weight: DominantWeight) -> HeckeIndex:
    c = weight.coords
    return tuple(c[i] - c[i + 1] for i in range(len(c) - 1))


def iota_inverse(index: Sequence[int]) -> DominantWeight:
    t = tuple(int(x) for x in index)
    if any(x < 0 for x in t):
        raise ValueError("Hecke index entries must be non-negative")
    coords = [sum(t[i:]) for i in range(len(t))] + [0]
    return DominantWeight(tuple(coords))


# ---------------------------------------------------------------------------
# Satake points


def _canonical_key(z: complex) -> tuple[float, float]:
    return (round(cmath.phase(z), 12), round(abs(z), 12))


@dataclass(frozen=True)
class SatakePoint:
    """Unordered r-tuple of nonzero complex numbers with product 1."""

    entries: tuple[complex, ...]
    tempered: bool = field(init=False)

    def __post_init__(self) -> None:
        raw = tuple(self.entries)
        if len(raw) < 2:
            raise ValueError("rank must be at least 2")
        exact = all(isinstance(x, (int, Fraction)) for x in raw)
        if exact:
            if prod(Fraction(x) for x in raw) != 1:
                raise ValueError("entries of an exact Satake point must multiply to 1")
        else:
            p = prod(complex(x) for x in raw)
            if abs(p - 1) > PRODUCT_TOL:
                raise ValueError(f"entries must multiply to 1 (got {p})")
        vals = tuple(sorted((complex(x) for x in raw), key=_canonical_key))
        object.__setattr__(self, "entries", vals)
        object.__setattr__(self, "tempered", all(abs(abs(x) - 1) <= PRODUCT_TOL for x in vals))

    @classmethod
    def from_angles(cls, angles: Iterable[float]) -> "SatakePoint":
        return cls(tuple(cmath.exp(1j * a) for a in angles))

    @classmethod
    def identity(cls, rank: int) -> "SatakePoint":
        return cls((1,) * rank)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=complex)

    def power(self, k: int) -> "SatakePoint":
        return SatakePoint(tuple(x**k for x in self.entries))

    def conjugate(self) -> "SatakePoint":
        return SatakePoint(tuple(x.conjugate() for x in self.entries))


def _as_points(z) -> np.ndarray:
    """Coerce a SatakePoint, a sequence, or an (n, r) array into a 2-d complex array."""
    if isinstance(z, SatakePoint):
        return z.array()[None, :]
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 1:
        arr = arr[None, :]
    return arr


# ---------------------------------------------------------------------------
# Schur evaluation


def _complete_table(z: np.ndarray, kmax: int) -> np.ndarray:
    """H[i, k] = h_k(z_1, ..., z_{i+1}) for k = 0..kmax, each a row over the n points."""
    n, r = z.shape
    zt = np.ascontiguousarray(z.T)
    H = np.empty((r, kmax + 1, n), dtype=complex)
    H[:, 0] = 1.0
    for k in range(1, kmax + 1):
        np.multiply(H[0, k - 1], zt[0], out=H[0, k])
    for i in range(1, r):
        for k in range(1, kmax + 1):
            np.multiply(H[i, k - 1], zt[i], out=H[i, k])
            H[i, k] += H[i - 1, k]
    return H


def schur_eval_many(weight: DominantWeight, z) -> np.ndarray:
    """Vectorised chi_weight over an (n, r) array of torus points.

    Divided-difference form of the bialternant:
    s_lam(z) = det[h_{lam_j - j + i}(z_1, ..., z_{r+1-i})], which has no
    denominators and so stays exact at repeated entries.
    """
    return characters_many([weight], z)[0]


def characters_many(weights: Sequence[DominantWeight], z) -> np.ndarray:
    """Stack of characters, shape (len(weights), n), sharing one h-table."""
    pts = _as_points(z)
    n, r = pts.shape
    for w in weights:
        if w.rank != r:
            raise ValueError(f"rank mismatch: weight has rank {w.rank}, point has {r}")
    out = np.ones((len(weights), n), dtype=complex)
    top = max((w.coords[0] for w in weights), default=0)
    if top == 0:
        return out
    kmax = top + r - 1
    H = _complete_table(pts, kmax)
    for idx, w in enumerate(weights):
        lam = w.coords
        if lam[0] == 0:
            continue
        M = np.zeros((r, r, n), dtype=complex)
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                k = lam[j - 1] - j + i
                if 0 <= k <= kmax:
                    M[i - 1, j - 1] = H[r - i, k]
        out[idx] = _small_det(M)
    return out


def _small_det(M: np.ndarray) -> np.ndarray:
    """Determinants of an (r, r, n) stack; closed forms beat batched LU for r <= 3."""
    r = M.shape[0]
    if r == 1:
        return M[0, 0].copy()
    if r == 2:
        return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if r == 3:
        return (M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
                - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
                + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0]))
    return np.linalg.det(np.moveaxis(M, -1, 0))


def schur_eval(weight: DominantWeight, z: SatakePoint) -> complex:
    if weight.rank != z.rank:
        raise ValueError(f"rank mismatch: {weight.rank} vs {z.rank}")
    return complex(schur_eval_many(weight, z)[0])


def schur_eval_tableaux(weight: DominantWeight, z: SatakePoint) -> complex:
    """Oracle path: sum of z^content over semistandard tableaux."""
    if weight.rank != z.rank:
        raise ValueError(f"rank mismatch: {weight.rank} vs {z.rank}")
    if weight.size > 8:
        log.warning("tableau enumeration for |theta| = %d may be slow", weight.size)
    ent = z.entries
    total = 0j
    for content, mult in symfunc.ssyt_contents(weight.partition, weight.rank).items():
        total += mult * prod(e**c for e, c in zip(ent, content))
    return total


def weyl_dimension(weight: DominantWeight) -> int:
    c, r = weight.coords, weight.rank
    d = Fraction(1)
    for i in range(r):
        for j in range(i + 1, r):
            d *= Fraction(c[i] - c[j] + j - i, j - i)
    assert d.denominator == 1
    return int(d)


def hecke_from_satake(m: Sequence[int], z: SatakePoint) -> complex:
    """lambda(p^m) = chi_{iota^{-1}(m)}(z)."""
    if len(m) != z.rank - 1:
        raise ValueError(f"rank mismatch: index of length {len(m)} for rank {z.rank}")
    return schur_eval(iota_inverse(m), z)


def elementary_coeff(j: int, z: SatakePoint) -> complex:
    """e_j(z), the character of the j-th exterior power of the standard representation.

    As a Hecke eigenvalue this is lambda at the unit index with a 1 in slot j.
    """
    r = z.rank
    if not 1 <= j <= r - 1:
        raise ValueError(f"j must lie in 1..{r - 1}")
    coeffs = np.poly(np.asarray(z.entries))  # prod (x - z_i)
    return complex((-1) ** j * coeffs[j])


# ---------------------------------------------------------------------------
# Expansions


def _weight_key(w: DominantWeight) -> tuple[int, ...]:
    return w.coords


@dataclass(frozen=True, eq=False)
class CharacterExpansion:
    """Finite integer combination of irreducible characters of one rank."""

    rank: int
    terms: Mapping[DominantWeight, int]

    def __post_init__(self) -> None:
        clean = {}
        for w, c in self.terms.items():
            if w.rank != self.rank:
                raise ValueError("weight rank does not match expansion rank")
            if c:
                clean[w] = int(c)
        ordered = dict(sorted(clean.items(), key=lambda kv: _weight_key(kv[0]), reverse=True))
        object.__setattr__(self, "terms", ordered)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CharacterExpansion):
            return NotImplemented
        return self.rank == other.rank and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.rank, tuple(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, w: DominantWeight) -> int:
        return self.terms.get(w, 0)

    def items(self):
        return self.terms.items()

    def coefficient(self, coords: Sequence[int]) -> int:
        return self.terms.get(DominantWeight(tuple(coords)), 0)

    def zero_coefficient(self) -> int:
        return self.terms.get(DominantWeight.zero(self.rank), 0)

    def dimension(self) -> int:
        return sum(c * weyl_dimension(w) for w, c in self.terms.items())

    def evaluate_many(self, z) -> np.ndarray:
        pts = _as_points(z)
        if not self.terms:
            return np.zeros(pts.shape[0], dtype=complex)
        weights = list(self.terms)
        coeffs = np.array([float(self.terms[w]) for w in weights])
        return coeffs @ characters_many(weights, pts)

    def evaluate(self, z: SatakePoint) -> complex:
        return complex(self.evaluate_many(z)[0])

    def __add__(self, other: "CharacterExpansion") -> "CharacterExpansion":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return CharacterExpansion(self.rank, out)

    def to_text(self) -> str:
        return "".join(f"{c}\t{','.join(map(str, w.coords))}\n" for w, c in self.terms.items())

    @classmethod
    def from_text(cls, text: str, rank: int | None = None) -> "CharacterExpansion":
        terms: dict[DominantWeight, int] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                coeff, coords = line.split("\t")
                w = DominantWeight.parse(coords)
                terms[w] = terms.get(w, 0) + int(coeff)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: cannot parse {line!r}") from exc
        if rank is None:
            if not terms:
                raise ValueError("rank required for an empty expansion")
            rank = next(iter(terms)).rank
        return cls(rank, terms)


def _from_partitions(rank: int, parts: Mapping[Partition, int]) -> CharacterExpansion:
    terms: dict[DominantWeight, int] = {}
    for lam, c in parts.items():
        if len(lam) > rank:
            continue
        w = DominantWeight(tuple(lam) + (0,) * (rank - len(lam)))
        terms[w] = terms.get(w, 0) + c
    return CharacterExpansion(rank, terms)


def tensor_decompose(a: DominantWeight, b: DominantWeight) -> CharacterExpansion:
    """chi_a * chi_b in the Schur basis (Littlewood-Richardson)."""
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} vs {b.rank}")
    return _from_partitions(a.rank, _tensor_cached(a.partition, b.partition, a.rank))


@lru_cache(maxsize=4096)
def _tensor_cached(mu: Partition, nu: Partition, rank: int) -> dict[Partition, int]:
    # Multiplying the larger by the smaller keeps the strip recursion small.
    if sum(nu) > sum(mu):
        mu, nu = nu, mu
    return symfunc.lr_product(mu, nu, rank)


POWER_SUM_LIMIT = 40


def adams_decompose(weight: DominantWeight, k: int, method: str = "auto") -> CharacterExpansion:
    """Expand chi_weight(z^k) in irreducible characters.

    ``method`` is "power_sum" (power-sum basis change with symmetric-group
    characters), "alternant" (Weyl numerator with Kostka numbers), or "auto",
    which picks the power-sum route for k*|weight| <= POWER_SUM_LIMIT.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if method == "auto":
        method = "power_sum" if k * weight.size <= POWER_SUM_LIMIT else "alternant"
    if method == "power_sum":
        parts = _adams_power_sum(weight.partition, k, weight.rank)
    elif method == "alternant":
        parts = _adams_alternant(weight.partition, k, weight.rank)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _from_partitions(weight.rank, parts)


def _candidate_shapes(theta: Partition, k: int, rank: int) -> list[Partition]:
    top = tuple(k * t for t in theta)
    n = sum(top)
    return [lam for lam in symfunc.partitions(n, max_len=rank) if symfunc.dominated_by(lam, top)]


@lru_cache(maxsize=4096)
def _adams_power_sum(theta: Partition, k: int, rank: int) -> dict[Partition, int]:
    # s_theta = sum_mu chi^theta(mu) p_mu / z_mu ; p_mu(z^k) = p_{k mu}(z) ;
    # p_nu = sum_lam chi^lam(nu) s_lam.
    n = sum(theta)
    classes = [(mu, Fraction(symfunc.sn_character(theta, mu), symfunc.z_centralizer(mu)))
               for mu in symfunc.partitions(n)]
    classes = [(tuple(k * m for m in mu), w) for mu, w in classes if w]
    out: dict[Partition, int] = {}
    for lam in _candidate_shapes(theta, k, rank):
        c = sum((w * symfunc.sn_character(lam, kmu) for kmu, w in classes), Fraction(0))
        if c.denominator != 1:
            raise ArithmeticError(f"non-integral Adams coefficient {c} at {lam}")
        if c:
            out[lam] = int(c)
    return out


@lru_cache(maxsize=4096)
def _adams_alternant(theta: Partition, k: int, rank: int) -> dict[Partition, int]:
    # a_delta(z) s_theta(z^k) = sum_w sgn(w) z^{w delta} sum_beta K_{theta,beta} z^{k beta};
    # the coefficient of z^{lam + delta} reads off c_lam.
    delta = tuple(range(rank - 1, -1, -1))
    signed = []
    for perm in permutations(range(rank)):
        inv = sum(1 for i in range(rank) for j in range(i + 1, rank) if perm[i] > perm[j])
        signed.append((tuple(delta[p] for p in perm), -1 if inv % 2 else 1))
    out: dict[Partition, int] = {}
    padded_theta = tuple(theta)
    for lam in _candidate_shapes(theta, k, rank):
        full = tuple(lam) + (0,) * (rank - len(lam))
        total = 0
        for wdelta, sgn in signed:
            beta = []
            for i in range(rank):
                diff = full[i] + delta[i] - wdelta[i]
                if diff < 0 or diff % k:
                    break
                beta.append(diff // k)
            else:
                total += sgn * symfunc.kostka(padded_theta, tuple(beta))
        if total:
            out[lam] = total
    return out


def frobenius_schur(weight: DominantWeight) -> int:
    if weight.is_trivial():
        raise ValueError("Frobenius-Schur indicator is not defined here for the trivial weight")
    c0 = adams_decompose(weight, 2).zero_coefficient()
    if c0 not in (-1, 0, 1):
        raise ArithmeticError(f"indicator {c0} outside {{-1, 0, 1}} for {weight}")
    return c0


def clear_caches() -> None:
    _tensor_cached.cache_clear()
    _adams_power_sum.cache_clear()
    _adams_alternant.cache_clear()
    symfunc.clear_caches()
