import numpy as np
import pytest

from satake_lab.charcalc import DominantWeight, SatakePoint, schur_eval
from satake_lab.lfun.core import (InsufficientCoefficients, LFunctionData, ZeroList, beta_moment, bundled_zeros,
                                  chi_minus4, parse_zero_text, zeta)
from satake_lab.lfun.gamma import ArchimedeanParams

from conftest import random_torus_points


def test_lfunction_validation():
    arch = ArchimedeanParams((0,))
    with pytest.raises(ValueError, match="modulus"):
        LFunctionData("x", arch, np.ones(5), epsilon=1.1)
    with pytest.raises(ValueError, match="lambda"):
        LFunctionData("x", arch, np.array([2.0, 1.0]))
    L = LFunctionData("x", arch, np.ones(5), epsilon=np.exp(0.3j), self_dual=False)
    assert L.degree == 1 and L.cutoff == 5
    with pytest.raises(InsufficientCoefficients):
        L.coefficients(6)
    assert L.coefficients(3).tolist() == [0, 1, 1, 1]


def test_contragredient_conjugates_everything():
    arch = ArchimedeanParams.of(0.1 + 2j, 0.1 - 1j)
    coeffs = np.array([1, 1j, -1j, 0.5 + 0.5j])
    L = LFunctionData("x", arch, coeffs, epsilon=1j, self_dual=False)
    D = L.contragredient()
    assert np.allclose(D.coefficients(4)[1:], np.conj(coeffs))
    assert D.epsilon == -1j
    assert D.arch.mu == (0.1 - 2j, 0.1 + 1j)
    assert zeta().contragredient() is not None


def test_standard_l_functions():
    z, c = zeta(), chi_minus4()
    assert z.conductor() == 1 and c.conductor() == 8
    assert c.coefficients(8)[1:].real.tolist() == [1, 0, -1, 0, 1, 0, -1, 0]
    assert z.poles == (0.0, 1.0) and c.poles == ()


def test_prime_power_moments_two_routes_agree():
    c = chi_minus4()
    for p in (3, 5, 7, 13):
        from_roots = c.prime_power_moments(p, 4)
        generic = LFunctionData("c", c.arch, c.coeffs, level=4)
        assert np.allclose(generic.prime_power_moments(p, 4), from_roots)
    # ramified prime: moments come from the coefficients, which all vanish
    assert np.allclose(c.prime_power_moments(2, 3), 0)


def test_beta_moment_examples():
    assert beta_moment(SatakePoint.identity(3), 2) == 3
    assert beta_moment((1j, -1j), 2) == -2
    rng = np.random.default_rng(4)
    for r in (2, 3, 4):
        z = SatakePoint(tuple(random_torus_points(rng, 1, r)[0]))
        assert abs(beta_moment(z, 1) - schur_eval(DominantWeight.standard(r), z)) < 1e-13
    with pytest.raises(ValueError):
        beta_moment((1, 1), 0)


def test_beta_moment_conjugation_symmetry_is_exact():
    rng = np.random.default_rng(5)
    for _ in range(50):
        z = tuple(complex(x) for x in rng.standard_normal(4) + 1j * rng.standard_normal(4))
        for k in (1, 2, 3, 5):
            assert beta_moment(tuple(x.conjugate() for x in z), k) == beta_moment(z, k).conjugate()


def test_zero_list_parsing():
    zeros, label, warnings = parse_zero_text("# L zeta\n# comment\n21.0220396388\n14.1347251417\n\n25.01\n")
    assert label == "zeta"
    assert zeros.ordinates.tolist() == [14.1347251417, 21.0220396388, 25.01]
    assert warnings and "sorted" in warnings[0]
    empty, label, _ = parse_zero_text("")
    assert len(empty) == 0 and label is None and empty.height == 0
    with pytest.raises(ValueError, match="line 3"):
        parse_zero_text("# L x\n1.0\nnot-a-number\n")
    with pytest.raises(ValueError, match="line 1"):
        parse_zero_text("nan\n")


def test_zero_list_invariants():
    with pytest.raises(ValueError):
        ZeroList(np.array([2.0, 1.0]))
    z = ZeroList(np.array([1.0, 1.0, 3.0]), "t")  # multiplicity allowed
    assert len(z.first(2)) == 2 and z.height == 3.0


def test_bundled_zero_lists():
    z = bundled_zeros("zeta")
    assert len(z) == 200
    assert z.ordinates[0] == pytest.approx(14.1347251417, abs=1e-9)
    c = bundled_zeros("chi_minus4")
    assert len(c) == 100
    assert c.ordinates[0] == pytest.approx(6.0209489046976, abs=1e-9)
