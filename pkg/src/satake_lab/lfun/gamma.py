"""Archimedean data: Gamma_R, gamma factors, analytic conductor."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

POLE_DISTANCE = 1e-8


class PoleProximityError(ValueError):
    """Raised when an argument sits within POLE_DISTANCE of a Gamma pole."""


@dataclass(frozen=True)
class ArchimedeanParams:
    """Langlands parameters mu_1, ..., mu_d at infinity."""

    mu: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", tuple(complex(m) for m in self.mu))

    @classmethod
    def of(cls, *mu: complex) -> "ArchimedeanParams":
        return cls(tuple(mu))

    @property
    def degree(self) -> int:
        return len(self.mu)

    def contragredient(self) -> "ArchimedeanParams":
        return ArchimedeanParams(tuple(m.conjugate() for m in self.mu))

    def twist(self, t: float) -> "ArchimedeanParams":
        """Parameters of pi tensor |det|^{it}."""
        return ArchimedeanParams(tuple(m + 1j * t for m in self.mu))

    def is_self_dual(self, tol: float = 1e-12) -> bool:
        a = sorted(self.mu, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        b = sorted(self.contragredient().mu, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        return all(abs(x - y) <= tol for x, y in zip(a, b))


def analytic_conductor(arch: ArchimedeanParams) -> float:
    return math.prod(1 + abs(m) for m in arch.mu)


def _near_pole(s: np.ndarray) -> np.ndarray:
    """Whether s lies within POLE_DISTANCE of a pole 0, -2, -4, ... of Gamma_R."""
    half = np.asarray(s, dtype=complex) / 2
    k = np.minimum(0, np.round(half.real))
    return (half.real < 0.5) & (np.abs(half - k) * 2 < POLE_DISTANCE)


def _check_pole(s: complex) -> None:
    if _near_pole(np.asarray(s)):
        raise PoleProximityError(f"Gamma_R has a pole near s = {s}")


def gamma_R(s: complex) -> complex:
    """pi^{-s/2} Gamma(s/2)."""
    s = complex(s)
    _check_pole(s)
    return complex(math.pi ** (-s / 2) * special.gamma(s / 2))


def log_gamma_R(s) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    return -0.5 * s * math.log(math.pi) + special.loggamma(s / 2)


def gamma_factor(s, arch: ArchimedeanParams, epsilon: complex = 1.0, level: int = 1):
    """gamma_inf(1/2 + s) = eps N^{-s} prod Gamma_R(1/2 - s + conj mu) / prod Gamma_R(1/2 + s + mu).

    Vectorised in ``s``. A pole of a denominator factor makes the value 0;
    a pole of a numerator factor raises PoleProximityError.
    """
    s_arr = np.asarray(s, dtype=complex)
    logv = np.zeros_like(s_arr) - s_arr * math.log(level)
    zero = np.zeros(s_arr.shape, dtype=bool)
    for m in arch.mu:
        num = 0.5 - s_arr + np.conj(m)
        den = 0.5 + s_arr + m
        if np.any(_near_pole(num)):
            raise PoleProximityError("numerator Gamma_R pole in gamma factor")
        bad = _near_pole(den)
        zero |= bad
        den = np.where(bad, 1.0, den)
        logv = logv + log_gamma_R(num) - log_gamma_R(den)
    out = complex(epsilon) * np.exp(logv)
    out = np.where(zero, 0.0, out)
    return complex(out) if np.ndim(s) == 0 else out


def stirling_ratio(s: complex, arch: ArchimedeanParams, epsilon: complex = 1.0) -> float:
    """|gamma_inf(1/2 - s)| / C(pi x |det|^{Im s})^{Re s}."""
    s = complex(s)
    g = abs(gamma_factor(-s, arch, epsilon))
    return g / analytic_conductor(arch.twist(s.imag)) ** s.real


def digamma_R(s) -> np.ndarray:
    """Gamma_R'/Gamma_R(s) = -log(pi)/2 + digamma(s/2)/2."""
    s = np.asarray(s, dtype=complex)
    return -0.5 * math.log(math.pi) + 0.5 * special.digamma(s / 2)
