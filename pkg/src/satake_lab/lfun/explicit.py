"""Explicit formula: zeros against primes, archimedean term and poles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .core import LFunctionData, ZeroList
from .primes import prime_powers
from .testfn import TestFunctionPair

FLAG_LEVEL = 1e-3


@dataclass(frozen=True)
class ExplicitFormulaResult:
    zero_side: float
    prime_side: float
    arch_side: float
    pole_side: float
    residual: float
    zero_tail: float
    n_zeros: int
    prime_cutoff: float
    truncation_dominated: bool


def zero_side(zeros: ZeroList, psi: TestFunctionPair, scale: float, mirror: bool) -> float:
    vals = psi.psi(zeros.ordinates * scale / (2 * math.pi))
    return float(math.fsum(np.atleast_1d(vals)) * (2 if mirror else 1))


def pole_side(L: LFunctionData, psi: TestFunctionPair, scale: float) -> float:
    """sum over poles rho = 1/2 + i tau of the completed L-function of psi(tau scale / 2 pi)."""
    if not L.poles or psi.kind == "zero":
        return 0.0
    tau = np.array([-1j * (complex(rho) - 0.5) for rho in L.poles])
    return float(np.real(np.sum(psi.psi_complex(tau * scale / (2 * math.pi)))))


def prime_side(L: LFunctionData, psi: TestFunctionPair, scale: float, cutoff: float | None = None) -> float:
    """-(1/scale) sum_{p^k} log p p^{-k/2} [beta_k psi_hat(k log p/scale) + conj(beta_k) psi_hat(-k log p/scale)]."""
    if psi.kind == "zero":
        return 0.0
    if cutoff is None:
        cutoff = math.exp(psi.delta * scale)
    ps, ks, ns = prime_powers(cutoff)
    if ps.size == 0:
        return 0.0
    kmax = int(ks.max())
    moments: dict[int, np.ndarray] = {}
    total = []
    for p, k, n in zip(ps.tolist(), ks.tolist(), ns.tolist()):
        if p not in moments:
            moments[p] = L.prime_power_moments(p, kmax_for(p, cutoff, kmax))
        b = moments[p][k - 1]
        x = math.log(n) / scale
        total.append(math.log(p) * n ** -0.5 * (b * psi.psi_hat(x) + b.conjugate() * psi.psi_hat(-x)).real)
    return -math.fsum(total) / scale


def kmax_for(p: int, cutoff: float, cap: int) -> int:
    k, q = 1, p
    while k < cap and q * p <= cutoff:
        q *= p
        k += 1
    return k


def _j_integral(a: complex, psi: TestFunctionPair, scale: float) -> complex:
    """int_0^infty e^{-a t} (g(0) - g(t/2)) / (1 - e^{-t}) dt with g(u) = psi_hat(u/scale)/scale."""
    g0 = psi.psi_hat(0.0) / scale
    T = 2 * psi.delta * scale

    def f(t: float) -> complex:
        if t < 1e-12:
            return 0j if psi.kind == "zero" else complex(_slope(psi, scale))
        return np.exp(-a * t) * (g0 - psi.psi_hat(t / (2 * scale)) / scale) / -np.expm1(-t)

    re = integrate.quad(lambda t: f(t).real, 0, T, limit=400, epsabs=1e-13, epsrel=1e-12)[0]
    im = integrate.quad(lambda t: f(t).imag, 0, T, limit=400, epsabs=1e-13, epsrel=1e-12)[0]
    # beyond T the window vanishes: g0 int_T^infty e^{-at}/(1-e^{-t}) dt
    tail = sum(np.exp(-(a + m) * T) / (a + m) for m in range(60))
    return complex(re + 1j * im + g0 * tail)


def _slope(psi: TestFunctionPair, scale: float) -> float:
    h = 1e-7
    return (psi.psi_hat(0.0) - psi.psi_hat(h / (2 * scale))) / scale / h


def arch_side(L: LFunctionData, psi: TestFunctionPair, scale: float) -> float:
    """(1/2 pi) int psi(r scale/2 pi) [log N + 2 Re sum_j Gamma_R'/Gamma_R(1/2 + ir + mu_j)] dr.

    Uses digamma(a) = int (e^{-t}/t - e^{-at}/(1-e^{-t})) dt to split off the exact
    digamma at r = 0 and integrate only a smooth remainder.
    """
    if psi.kind == "zero":
        return 0.0
    g0 = psi.psi_hat(0.0) / scale
    d = L.degree
    total = g0 * (math.log(L.level) - d * math.log(math.pi))
    for mu in L.arch.mu:
        for a in ((0.5 + mu) / 2, (0.5 + mu.conjugate()) / 2):
            total += 0.5 * (g0 * complex(special.digamma(a)) + _j_integral(a, psi, scale))
    return float(np.real(total))


def arch_side_direct(L: LFunctionData, psi: TestFunctionPair, scale: float, limit: float = 4000.0) -> float:
    """Same quantity by brute quadrature in r; slow, used for cross-checks.

    Composite Gauss-Legendre over panels one oscillation of psi wide.
    """
    from .gamma import digamma_R

    width = 2 * math.pi / (psi.delta * scale)
    panels = max(1, int(math.ceil(limit / width)))
    x, w = np.polynomial.legendre.leggauss(16)
    left = width * np.arange(panels)[:, None]
    r = (left + 0.5 * width * (x + 1)).ravel()
    weights = np.tile(0.5 * width * w, panels)
    core = math.log(L.level) + 2 * sum(np.real(digamma_R(0.5 + 1j * r + mu)) for mu in L.arch.mu)
    vals = np.asarray(psi.psi(r * scale / (2 * math.pi))) * core
    return 2 * math.fsum(weights * vals) / (2 * math.pi)


def zero_tail_estimate(L: LFunctionData, zeros: ZeroList, psi: TestFunctionPair, scale: float) -> float:
    """Rough size of the zero-side terms beyond the last ingested ordinate."""
    height = max(zeros.height, 1.0)
    N, d = L.level, L.degree

    def density(t: float) -> float:
        return max(math.log(N * (t / (2 * math.pi)) ** d), 1.0) / (2 * math.pi)

    val = integrate.quad(
        lambda t: density(t) * float(psi.envelope(t * scale / (2 * math.pi))), height, np.inf, limit=200
    )[0]
    return 2 * val


def explicit_formula_check(
    L: LFunctionData,
    zeros: ZeroList,
    psi: TestFunctionPair,
    scale: float,
    n_zeros: int | None = None,
    prime_cutoff: float | None = None,
) -> ExplicitFormulaResult:
    """Evaluate both sides; residual = zeros - poles - (arch + primes)."""
    if n_zeros is not None:
        zeros = zeros.first(n_zeros)
    if prime_cutoff is None:
        prime_cutoff = math.exp(psi.delta * scale)
    zs = zero_side(zeros, psi, scale, mirror=L.self_dual)
    ps = pole_side(L, psi, scale)
    ar = arch_side(L, psi, scale)
    pr = prime_side(L, psi, scale, prime_cutoff)
    tail = zero_tail_estimate(L, zeros, psi, scale) if psi.kind != "zero" else 0.0
    residual = zs - ps - ar - pr
    return ExplicitFormulaResult(zs, pr, ar, ps, residual, tail, len(zeros), prime_cutoff, tail > FLAG_LEVEL)
