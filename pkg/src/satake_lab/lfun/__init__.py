"""Gamma factors, central values, explicit formula and low-lying zero statistics."""

from .core import LFunctionData, ZeroList, beta_moment, bundled_zeros, chi_minus4, zeta
from .gamma import ArchimedeanParams, analytic_conductor, gamma_factor, gamma_R
from .testfn import TestFunctionPair

__all__ = [
    "ArchimedeanParams",
    "LFunctionData",
    "TestFunctionPair",
    "ZeroList",
    "analytic_conductor",
    "beta_moment",
    "bundled_zeros",
    "chi_minus4",
    "gamma_R",
    "gamma_factor",
    "zeta",
]
