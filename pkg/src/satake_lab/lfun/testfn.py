"""Paley-Wiener test-function pairs with psi(x) = int psi_hat(t) e(xt) dt."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

KINDS = ("fejer", "gauss", "zero")


PANEL = 50


@lru_cache(maxsize=32)
def _gl_nodes(delta: float, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [0, delta] with about ``size`` nodes."""
    if size <= 400:
        x, w = np.polynomial.legendre.leggauss(size)
        return 0.5 * delta * (x + 1), 0.5 * delta * w
    panels = -(-size // PANEL)
    x, w = np.polynomial.legendre.leggauss(PANEL)
    h = delta / panels
    left = h * np.arange(panels)[:, None]
    return (left + 0.5 * h * (x + 1)).ravel(), np.tile(0.5 * h * w, panels)


@dataclass(frozen=True)
class TestFunctionPair:
    """(psi, psi_hat) with psi_hat even, real, supported in [-delta, delta].

    ``fejer``: psi_hat(t) = max(0, 1 - |t|/delta), psi(x) = delta sinc^2(delta x).
    ``gauss``: a Gaussian of width delta/2 times the standard smooth bump on
    [-delta, delta]; psi is computed by quadrature.
    ``zero``: the zero function.
    """

    __test__ = False  # keep pytest from collecting this class

    delta: float = 1.0
    kind: str = "fejer"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if not self.delta > 0:
            raise ValueError("delta must be positive")

    @classmethod
    def fejer(cls, delta: float = 1.0) -> "TestFunctionPair":
        return cls(delta, "fejer")

    @classmethod
    def zero(cls, delta: float = 1.0) -> "TestFunctionPair":
        return cls(delta, "zero")

    def psi_hat(self, t):
        t = np.asarray(t, dtype=float)
        u = np.abs(t) / self.delta
        if self.kind == "fejer":
            out = np.clip(1.0 - u, 0.0, None)
        elif self.kind == "gauss":
            inside = u < 1
            safe = np.where(inside, u, 0.0)
            out = np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe**2) - (2 * safe) ** 2), 0.0)
        else:
            out = np.zeros_like(t)
        return out if out.ndim else float(out)

    def _nodes(self, size: int = 400) -> tuple[np.ndarray, np.ndarray]:
        # psi_hat is smooth on [0, delta] (Fejer's kink sits at the endpoint).
        return _gl_nodes(self.delta, size)

    def psi_complex(self, z):
        """psi at complex arguments; psi(z) = 2 int_0^delta psi_hat(t) cos(2 pi z t) dt."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = np.empty(flat.shape, dtype=complex)
        # group by |Re z| so each chunk gets just enough nodes for its oscillation
        order = np.argsort(np.abs(flat.real))
        for lo in range(0, flat.size, 256):
            idx = order[lo : lo + 256]
            reach = float(np.abs(flat[idx[-1]].real))
            size = 400 if reach * self.delta < 40 else int(8 * reach * self.delta + 200)
            t, w = self._nodes(size)
            vals = self.psi_hat(t) * w
            out[idx] = 2 * np.cos(2 * np.pi * np.multiply.outer(flat[idx], t)) @ vals
        out = out.reshape(z.shape)
        return out if out.ndim else complex(out)

    def psi(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "fejer":
            out = self.delta * np.sinc(self.delta * x) ** 2
        elif self.kind == "zero":
            out = np.zeros_like(x)
        else:
            out = np.real(self.psi_complex(x))
        return out if np.ndim(out) else float(out)

    def psi_at_zero(self) -> float:
        return float(self.psi(0.0))

    def half_integral(self) -> float:
        """int_0^infty psi_hat(t) dt."""
        t, w = self._nodes()
        return float(np.sum(w * self.psi_hat(t)))

    def envelope(self, x):
        """Upper envelope of |psi| for large |x| (used for tail estimates)."""
        x = np.abs(np.asarray(x, dtype=float))
        if self.kind == "fejer":
            return np.minimum(self.delta, 1.0 / (math.pi**2 * self.delta * np.maximum(x, 1e-300) ** 2))
        if self.kind == "zero":
            return np.zeros_like(x)
        # Smooth psi_hat: psi decays faster than any power; bound by a generous x^-4.
        return np.minimum(self.delta, 10.0 / np.maximum(x, 1e-300) ** 4)
