"""Central values L(1/2) from a smoothed two-sided Dirichlet sum."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import LFunctionData
from .gamma import gamma_factor


def mollifier(s):
    """h(s) = exp(s^2): even, entire, h(0) = 1."""
    return np.exp(np.asarray(s, dtype=complex) ** 2)


@dataclass(frozen=True)
class AFEResult:
    value: complex
    X: float
    n_terms: int
    nodes: int
    height: float
    pole_correction: complex
    tail_bound: float


def _h_x(s, L: LFunctionData, X: float, gamma_half: complex):
    """H_X(s, pi) = X^{s/2}/2 + X^{-s/2} gamma(1/2, pi) gamma(1/2 - s, dual pi) / 2."""
    dual = L.contragredient()
    g = gamma_factor(-np.asarray(s, dtype=complex), dual.arch, dual.epsilon, dual.level)
    return 0.5 * X ** (np.asarray(s) / 2) + 0.5 * X ** (-np.asarray(s) / 2) * gamma_half * g


def _dirichlet_poly(lam: np.ndarray, s: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """sum_n lam[n] n^{-1/2-s} for every s."""
    out = np.zeros(s.shape, dtype=complex)
    n_all = np.arange(1, len(lam))
    for lo in range(0, len(n_all), chunk):
        n = n_all[lo : lo + chunk]
        a = lam[n]
        keep = a != 0
        if not np.any(keep):
            continue
        logn = np.log(n[keep].astype(float))
        out += np.exp(-np.multiply.outer(0.5 + s, logn)) @ a[keep]
    return out


def _pole_terms(L: LFunctionData, X: float, gamma_half: complex) -> complex:
    """Residue contributions picked up when the contour crosses poles of L at s = rho - 1/2."""
    total = 0j
    for pi, weight in ((L, 1.0), (L.contragredient(), gamma_half)):
        for rho, res in pi.residues:
            u = complex(rho) - 0.5
            if u == 0:
                raise ValueError("pole at the central point is not supported")
            total += weight * res * _h_x(u, pi, X, gamma_half) * mollifier(u) / u
    return complex(total)


def afe_central_value(
    L: LFunctionData,
    X: float | None = None,
    c: float = 1.0,
    eps: float = 1e-9,
    max_nodes: int = 4096,
) -> AFEResult:
    """L(1/2) via the approximate functional equation with balancing parameter X.

    The V-weights are folded into one contour integral per side:
    sum_n lambda(n) n^{-1/2} V(n) = (1/2 pi) int D(c+it) H_X(c+it) h(c+it)/(c+it) dt,
    with D the Dirichlet polynomial truncated where the weights drop below ``eps``.
    The reported tail bound is a heuristic estimate of the neglected terms.
    """
    C = L.conductor()
    if X is None:
        X = C
    X = float(X)
    if X <= 0:
        raise ValueError("X must be positive")
    dual = L.contragredient()
    gamma_half = complex(gamma_factor(0.0, L.arch, L.epsilon, L.level))
    # V(n) ~ exp(-(log(n/Y))^2 / 4) beyond the balancing point Y.
    span = 2 * math.sqrt(math.log(1 / eps))
    n_max = int(math.ceil(max(math.sqrt(X), C / math.sqrt(X)) * math.exp(span)))
    lam = L.coefficients(n_max)
    lam_dual = lam if L.self_dual else dual.coefficients(n_max)
    height = min(max(math.sqrt(1 + math.log(1 / eps)) + 2 + L.degree, 1.0), max(8.0, math.log(X) ** 2))

    def integral(nodes: int) -> complex:
        x, w = np.polynomial.legendre.leggauss(nodes)
        s = c + 1j * height * x
        w = w * height
        base = mollifier(s) / s
        d_one = _dirichlet_poly(lam, s)
        d_two = d_one if lam_dual is lam else _dirichlet_poly(lam_dual, s)
        one = d_one * _h_x(s, L, X, gamma_half) * base
        two = d_two * _h_x(s, dual, X, gamma_half) * base
        return complex(w @ one + gamma_half * (w @ two)) / (2 * math.pi)

    nodes = 64
    prev = integral(nodes)
    while nodes < max_nodes:
        nodes *= 2
        cur = integral(nodes)
        done = abs(cur - prev) < 1e-11
        prev = cur
        if done:
            break
    corr = _pole_terms(L, X, gamma_half)
    tail = math.exp(-(span**2) / 4) * n_max ** 0.5 + math.exp(1 + c * c - height**2)
    return AFEResult(prev - corr, X, n_max, nodes, height, corr, tail)
