import cmath
import itertools
import math
import threading

import numpy as np
import pytest

from satake_lab import charcalc, satotate
from satake_lab.charcalc import (CharacterExpansion, DominantWeight, SatakePoint, adams_decompose, elementary_coeff,
                                 frobenius_schur, hecke_from_satake, iota_inverse, iota_map, schur_eval,
                                 schur_eval_many, schur_eval_tableaux, tensor_decompose, weyl_dimension)

from conftest import random_torus_points

W = DominantWeight.of
OMEGA = cmath.exp(2j * math.pi / 3)


def test_weight_normalisation_and_equality():
    assert W(3, 2, 2) == W(1, 0, 0)
    assert W(3, 2, 2).coords == (1, 0, 0)
    with pytest.raises(ValueError):
        W(0, 1)
    with pytest.raises(ValueError):
        W(1)
    assert DominantWeight.parse("2, 1, 0") == W(2, 1, 0)
    assert W(2, 1, 0).dual() == W(2, 1, 0)
    assert W(1, 0, 0).dual() == W(1, 1, 0)


@pytest.mark.parametrize("weight,index", [((1, 0, 0), (1, 0)), ((2, 1, 0), (1, 1)), ((0, 0), (0,))])
def test_iota_map_examples(weight, index):
    assert iota_map(W(*weight)) == index


def test_iota_is_a_bijection():
    for r in range(2, 6):
        for w in charcalc.dominant_weights(r, 6):
            assert iota_inverse(iota_map(w)) == w
        for t in itertools.product(range(4), repeat=r - 1):
            assert iota_map(iota_inverse(t)) == t
    with pytest.raises(ValueError):
        iota_inverse((-1, 0))


def test_dominant_weight_enumeration():
    ws = charcalc.dominant_weights(3, 2)
    assert len(ws) == 6
    assert ws[0] == W(2, 2, 0)
    assert ws[-1] == W(0, 0, 0)


def test_satake_point_product_check_and_unordered_equality():
    assert SatakePoint((1j, -1j)) == SatakePoint((-1j, 1j))
    assert SatakePoint((2, 1, 0.5)).tempered is False
    assert SatakePoint.from_angles([0.3, -0.3]).tempered
    with pytest.raises(ValueError):
        SatakePoint((1, 2))
    from fractions import Fraction
    exact = SatakePoint((Fraction(2), Fraction(1, 2)))
    assert exact.rank == 2
    with pytest.raises(ValueError):
        SatakePoint((Fraction(2), Fraction(1, 3)))


def test_schur_eval_examples():
    phi = 0.7
    z = SatakePoint.from_angles([phi, -phi])
    assert abs(schur_eval(W(1, 0), z) - 2 * math.cos(phi)) < 1e-14
    for r in (2, 3, 4):
        pt = SatakePoint(tuple(random_torus_points(np.random.default_rng(r), 1, r)[0]))
        assert abs(schur_eval(DominantWeight.zero(r), pt) - 1) < 1e-14
    assert abs(schur_eval(W(2, 0), SatakePoint.identity(2)) - 3) < 1e-12
    assert schur_eval_tableaux(W(2, 0), SatakePoint.identity(2)) == 3


def test_schur_eval_rank_mismatch():
    with pytest.raises(ValueError):
        schur_eval(W(1, 0, 0), SatakePoint.identity(2))


def test_schur_eval_matches_tableau_oracle():
    rng = np.random.default_rng(11)
    for r in (2, 3, 4):
        for w in charcalc.dominant_weights(r, 3):
            if w.size > 8:
                continue
            for pt in random_torus_points(rng, 3, r):
                z = SatakePoint(tuple(pt))
                assert abs(schur_eval(w, z) - schur_eval_tableaux(w, z)) < 1e-10


@pytest.mark.parametrize("entries", [
    (1, 1, 1),
    (OMEGA, OMEGA, OMEGA),
    (1j, 1j, -1),
    (OMEGA, OMEGA, OMEGA.conjugate() ** 2),
])
def test_schur_eval_at_repeated_entries(entries):
    z = SatakePoint(entries)
    for w in charcalc.dominant_weights(3, 4):
        assert abs(schur_eval(w, z) - schur_eval_tableaux(w, z)) < 1e-9


def test_schur_eval_near_coincident_entries():
    eps = 1e-9
    z = SatakePoint.from_angles([0.4 + eps, 0.4, -0.8 - eps])
    w = W(3, 1, 0)
    assert abs(schur_eval(w, z) - schur_eval_tableaux(w, z)) < 1e-8


def test_weyl_dimension_examples_and_identity_value():
    assert weyl_dimension(DominantWeight.zero(4)) == 1
    assert weyl_dimension(W(1, 0)) == 2
    assert weyl_dimension(W(1, 1, 0)) == 3
    assert weyl_dimension(W(2, 1, 0)) == 8
    for r in (2, 3, 4):
        for w in charcalc.dominant_weights(r, 4):
            assert abs(schur_eval(w, SatakePoint.identity(r)) - weyl_dimension(w)) < 1e-9 * weyl_dimension(w)


def test_tensor_decompose_examples():
    assert tensor_decompose(W(1, 0), W(1, 0)).terms == {W(2, 0): 1, W(0, 0): 1}
    e = tensor_decompose(W(1, 0, 0), W(1, 1, 0))
    assert e.terms == {W(2, 1, 0): 1, W(0, 0, 0): 1}
    assert e.dimension() == 9
    for a in charcalc.dominant_weights(3, 3):
        assert tensor_decompose(a, DominantWeight.zero(3)).terms == {a: 1}
    with pytest.raises(ValueError):
        tensor_decompose(W(1, 0), W(1, 0, 0))


def fit_expansion(target, basis, pts):
    """Least-squares coefficients of target values in the span of basis characters."""
    A = np.stack([schur_eval_many(b, pts) for b in basis], axis=1)
    coef, *_ = np.linalg.lstsq(A, target, rcond=None)
    return {b: int(round(c.real)) for b, c in zip(basis, coef) if abs(c) > 0.5}


def test_tensor_decompose_matches_pointwise_fit_oracle():
    rng = np.random.default_rng(5)
    for r, top in ((2, 6), (3, 4)):
        pts = random_torus_points(rng, 200, r)
        basis = charcalc.dominant_weights(r, top)
        for a, b in [(W(1, 0) if r == 2 else W(1, 0, 0), W(2, 0) if r == 2 else W(1, 1, 0)),
                     (W(2, 0) if r == 2 else W(2, 1, 0), W(3, 0) if r == 2 else W(1, 0, 0))]:
            target = schur_eval_many(a, pts) * schur_eval_many(b, pts)
            assert fit_expansion(target, basis, pts) == tensor_decompose(a, b).terms


def test_adams_decompose_examples():
    for w in charcalc.dominant_weights(3, 3):
        assert adams_decompose(w, 1).terms == {w: 1}
    assert adams_decompose(W(1, 0), 2).terms == {W(2, 0): 1, W(0, 0): -1}
    assert adams_decompose(W(2, 1, 0), 1).zero_coefficient() == 0
    with pytest.raises(ValueError):
        adams_decompose(W(1, 0), 0)


def test_adams_power_sum_oracle_by_hand():
    # p_2(z) and p_1(z)^2 - 2 e_2 agree: chi_(1,0,0)(z^2) = s_(2) - s_(1,1)
    assert adams_decompose(W(1, 0, 0), 2).terms == {W(2, 0, 0): 1, W(1, 1, 0): -1}
    # chi_(1,0)(z^3) = h_3 - s_(2,1) + s_(1,1,1) restricted to two variables
    assert adams_decompose(W(1, 0), 3).terms == {W(3, 0): 1, W(1, 0): -1}


def test_adams_methods_agree():
    for r in (2, 3, 4):
        for w in charcalc.dominant_weights(r, 3):
            for k in (2, 3):
                ps = adams_decompose(w, k, method="power_sum")
                alt = adams_decompose(w, k, method="alternant")
                assert ps == alt, (w, k)


def test_adams_height_bound_and_c0():
    for r in (2, 3, 4):
        for w in charcalc.dominant_weights(r, 4):
            for k in (1, 2, 3):
                e = adams_decompose(w, k)
                assert all(g.coords[0] - g.coords[-1] <= k * w.height for g, _ in e.items())
            if not w.is_trivial():
                assert adams_decompose(w, 1).zero_coefficient() == 0


def weyl_integral_of_square(w):
    return satotate.st_quadrature(lambda z: schur_eval_many(w, z ** 2), w.rank)


@pytest.mark.parametrize("weight,expected", [((1, 0), -1), ((1, 0, 0), 0), ((2, 0), 1)])
def test_frobenius_schur_examples(weight, expected):
    w = W(*weight)
    assert frobenius_schur(w) == expected
    assert abs(weyl_integral_of_square(w) - expected) < 1e-3


def test_frobenius_schur_matches_weyl_integral():
    for r in (2, 3):
        for w in charcalc.dominant_weights(r, 3):
            if w.is_trivial():
                continue
            s = frobenius_schur(w)
            assert s in (-1, 0, 1)
            assert abs(weyl_integral_of_square(w) - s) < 1e-3
    # SU(2): the indicator alternates with the parity of the highest weight
    assert [frobenius_schur(W(n, 0)) for n in range(1, 7)] == [-1, 1, -1, 1, -1, 1]
    with pytest.raises(ValueError):
        frobenius_schur(DominantWeight.zero(3))


def test_hecke_from_satake_examples():
    for r in (2, 3):
        z = SatakePoint(tuple(random_torus_points(np.random.default_rng(0), 1, r)[0]))
        assert abs(hecke_from_satake((0,) * (r - 1), z) - 1) < 1e-14
    assert abs(hecke_from_satake((1,), SatakePoint((1j, -1j)))) < 1e-14
    assert abs(hecke_from_satake((1, 0), SatakePoint.identity(3)) - 3) < 1e-12
    with pytest.raises(ValueError):
        hecke_from_satake((1,), SatakePoint.identity(3))


def test_elementary_coeff_examples():
    assert abs(elementary_coeff(1, SatakePoint((1j, -1j)))) < 1e-14
    assert abs(elementary_coeff(2, SatakePoint.identity(3)) - 3) < 1e-12
    assert abs(elementary_coeff(1, SatakePoint((1, OMEGA, OMEGA.conjugate())))) < 1e-14
    with pytest.raises(ValueError):
        elementary_coeff(3, SatakePoint.identity(3))


def test_elementary_coeff_is_hecke_at_unit_index():
    rng = np.random.default_rng(3)
    for r in (3, 4, 5):
        z = SatakePoint(tuple(random_torus_points(rng, 1, r)[0]))
        for j in range(1, r):
            idx = tuple(1 if i == j - 1 else 0 for i in range(r - 1))
            assert abs(elementary_coeff(j, z) - hecke_from_satake(idx, z)) < 1e-12


def test_expansion_invariants_and_text_round_trip():
    e = CharacterExpansion(2, {W(2, 0): 1, W(0, 0): 0, W(1, 0): -3})
    assert W(0, 0) not in e.terms
    assert len(e) == 2
    text = e.to_text()
    assert text == "1\t2,0\n-3\t1,0\n"
    assert CharacterExpansion.from_text(text) == e
    assert CharacterExpansion.from_text("", rank=3).terms == {}
    with pytest.raises(ValueError, match="line 1"):
        CharacterExpansion.from_text("x\t1,0\n")


def test_expansion_evaluation_linearity():
    rng = np.random.default_rng(9)
    pts = random_torus_points(rng, 50, 3)
    e = tensor_decompose(W(2, 1, 0), W(1, 0, 0))
    direct = sum(c * schur_eval_many(w, pts) for w, c in e.items())
    assert np.max(np.abs(e.evaluate_many(pts) - direct)) < 1e-10


def test_decomposition_cache_is_thread_safe_and_transparent():
    charcalc.clear_caches()
    weights = charcalc.dominant_weights(3, 3)
    cold = {(w, k): adams_decompose(w, k).terms for w in weights for k in (2, 3)}
    results = {}

    def work(i):
        results[i] = {(w, k): adams_decompose(w, k).terms for w in weights for k in (2, 3)}

    threads = [threading.Thread(target=work, args=(i,)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == cold for r in results.values())
