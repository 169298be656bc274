"""L-function data records, zero lists and Satake power moments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Sequence

import numpy as np

from .gamma import ArchimedeanParams, analytic_conductor


class InsufficientCoefficients(ValueError):
    """Raised when more Dirichlet coefficients are needed than are available."""


CoeffSource = Callable[[int], np.ndarray]


@dataclass(frozen=True, eq=False)
class LFunctionData:
    """Dirichlet series sum lambda(n) n^{-s} with its functional-equation data.

    ``coeffs`` is either an array holding lambda(1..cutoff) or a callable
    ``n -> array of lambda(1..n)``. ``poles`` are the poles of the completed
    L-function in the closed critical strip; ``residues`` pairs each pole of
    L(s) itself with its residue. ``local_roots(p)`` (optional) returns the
    Satake tuple at an unramified prime p.
    """

    label: str
    arch: ArchimedeanParams
    coeffs: np.ndarray | CoeffSource
    epsilon: complex = 1.0
    poles: tuple[complex, ...] = ()
    residues: tuple[tuple[complex, complex], ...] = ()
    self_dual: bool = True
    level: int = 1
    local_roots: Callable[[int], Sequence[complex]] | None = field(default=None, repr=False)
    ramified: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if abs(abs(self.epsilon) - 1) > 1e-12:
            raise ValueError("epsilon must have modulus 1")
        if not callable(self.coeffs):
            arr = np.asarray(self.coeffs, dtype=complex)
            object.__setattr__(self, "coeffs", arr)
        first = self.coefficients(1)
        if abs(first[1] - 1) > 1e-12:
            raise ValueError("lambda(1) must be 1")

    @property
    def degree(self) -> int:
        return self.arch.degree

    @property
    def cutoff(self) -> float:
        return math.inf if callable(self.coeffs) else len(self.coeffs)

    def conductor(self) -> float:
        """Level times the analytic conductor at infinity."""
        return self.level * analytic_conductor(self.arch)

    def coefficients(self, n: int) -> np.ndarray:
        """Array a with a[k] = lambda(k) for 1 <= k <= n and a[0] = 0."""
        n = int(n)
        if callable(self.coeffs):
            vals = np.asarray(self.coeffs(n), dtype=complex)[:n]
        else:
            if n > len(self.coeffs):
                raise InsufficientCoefficients(f"need {n} coefficients, have {len(self.coeffs)}")
            vals = self.coeffs[:n]
        return np.concatenate([[0j], vals])

    def contragredient(self) -> "LFunctionData":
        if self.self_dual:
            return self
        src = self.coeffs
        coeffs = (lambda n: np.conj(src(n))) if callable(src) else np.conj(src)
        roots = self.local_roots
        return LFunctionData(
            label=f"dual({self.label})",
            arch=self.arch.contragredient(),
            coeffs=coeffs,
            epsilon=complex(self.epsilon).conjugate(),
            poles=tuple(complex(p).conjugate() for p in self.poles),
            residues=tuple((complex(p).conjugate(), complex(r).conjugate()) for p, r in self.residues),
            self_dual=False,
            level=self.level,
            local_roots=(lambda p: [complex(z).conjugate() for z in roots(p)]) if roots else None,
            ramified=self.ramified,
        )

    def prime_power_moments(self, p: int, kmax: int) -> np.ndarray:
        """beta_1..beta_kmax at p, i.e. Lambda(p^k) / log p."""
        if self.local_roots is not None and p not in self.ramified:
            z = np.asarray(self.local_roots(p), dtype=complex)
            return np.array([np.sum(z**k) for k in range(1, kmax + 1)])
        return _moments_from_coefficients(self.coefficients(p**kmax), p, kmax)


def _moments_from_coefficients(lam: np.ndarray, p: int, kmax: int) -> np.ndarray:
    """Newton recursion k lambda(p^k) = sum_{j=1}^k beta_j lambda(p^{k-j})."""
    a = [lam[p**k] for k in range(kmax + 1)]
    beta = np.zeros(kmax, dtype=complex)
    for k in range(1, kmax + 1):
        beta[k - 1] = k * a[k] - sum(beta[j - 1] * a[k - j] for j in range(1, k))
    return beta


def beta_moment(z: Sequence[complex], k: int) -> complex:
    """Power sum sum_j z_j^k of a Satake tuple."""
    if k < 1:
        raise ValueError("k must be positive")
    entries = getattr(z, "entries", z)
    return complex(sum(complex(x) ** k for x in entries))


@dataclass(frozen=True)
class ZeroList:
    """Ordinates gamma of zeros 1/2 + i gamma, ascending, repeated for multiplicity."""

    ordinates: np.ndarray
    source: str = ""

    def __post_init__(self) -> None:
        arr = np.asarray(self.ordinates, dtype=float).reshape(-1)
        if np.any(np.diff(arr) < 0):
            raise ValueError("ordinates must be sorted ascending")
        object.__setattr__(self, "ordinates", arr)

    def __len__(self) -> int:
        return len(self.ordinates)

    def first(self, n: int) -> "ZeroList":
        return ZeroList(self.ordinates[:n], self.source)

    @property
    def height(self) -> float:
        return float(np.max(np.abs(self.ordinates))) if len(self) else 0.0


def parse_zero_text(text: str, source: str = "") -> tuple[ZeroList, str | None, list[str]]:
    """Parse a zero-list file body. Returns (zeros, label, warnings)."""
    label = None
    vals: list[float] = []
    warnings: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            head = line[1:].split()
            if len(head) >= 2 and head[0] == "L" and label is None:
                label = " ".join(head[1:])
            continue
        try:
            v = float(line.split()[0])
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse ordinate {line!r}") from None
        if not math.isfinite(v):
            raise ValueError(f"line {lineno}: non-finite ordinate {line!r}")
        vals.append(v)
    arr = np.array(vals, dtype=float)
    if np.any(np.diff(arr) < 0):
        warnings.append("ordinates were not sorted; sorted on ingestion")
        arr = np.sort(arr)
    return ZeroList(arr, source or (label or "")), label, warnings


def bundled_zeros(name: str) -> ZeroList:
    """Zero ordinates shipped with the package: ``"zeta"`` or ``"chi_minus4"``."""
    path = resources.files("satake_lab.data").joinpath(f"zeros_{name}.txt")
    zeros, _, _ = parse_zero_text(path.read_text(), source=f"bundled:{name}")
    return zeros


def _ones(n: int) -> np.ndarray:
    return np.ones(n, dtype=complex)


def _chi4(n: int) -> np.ndarray:
    k = np.arange(1, n + 1)
    return np.where(k % 2 == 0, 0, np.where(k % 4 == 1, 1, -1)).astype(complex)


def zeta() -> LFunctionData:
    """The Riemann zeta function: poles of Lambda at 0 and 1, residue 1 of zeta at 1."""
    return LFunctionData(
        label="zeta",
        arch=ArchimedeanParams((0,)),
        coeffs=_ones,
        poles=(0.0, 1.0),
        residues=((1.0, 1.0),),
        local_roots=lambda p: (1.0,),
    )


def chi_minus4() -> LFunctionData:
    """L(s, chi_{-4}) (Dirichlet beta): odd character, conductor 4, root number 1."""
    return LFunctionData(
        label="chi_-4",
        arch=ArchimedeanParams((1,)),
        coeffs=_chi4,
        level=4,
        local_roots=lambda p: (0.0,) if p == 2 else ((1.0,) if p % 4 == 1 else (-1.0,)),
        ramified=(2,),
    )
