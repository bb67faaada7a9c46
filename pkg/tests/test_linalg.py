from fractions import Fraction

import numpy as np
import pytest

from speclab import (IntMatrix, NotContractive, SingularMatrix,
                     contraction_factor, det, is_complete_residue_set,
                     is_expansive, multi_step_contraction,
                     residue_classes_distinct, solve_exact)
from speclab.linalg import as_int_matrix, charpoly, inv_transpose_norm_series

import oracles


@pytest.mark.parametrize("m,expected", [
    ([[2]], 2),
    ([[2, 0], [0, 2]], 4),
    ([[1, 2], [3, 4]], -2),
    ([[0, 1], [1, 0]], -1),
    ([[3, 1, 0], [0, 3, 1], [1, 0, 3]], 28),
])
def test_det_exact(m, expected):
    assert det(m) == expected


def test_det_matches_float_oracle_randomized():
    rng = np.random.default_rng(42)
    for _ in range(300):
        d = int(rng.integers(1, 5))
        m = rng.integers(-5, 6, size=(d, d))
        assert det(m) == round(float(np.linalg.det(m)))


def test_charpoly_small_cases():
    assert charpoly(as_int_matrix([[2]])) == (-2, 1)
    # x^2 - 2 for the swap-and-double matrix
    assert charpoly(as_int_matrix([[0, 2], [1, 0]])) == (-2, 0, 1)
    assert charpoly(as_int_matrix([[1, 1], [0, 1]])) == (1, -2, 1)


@pytest.mark.parametrize("m,expected", [
    ([[2]], True),
    ([[1]], False),
    ([[-1]], False),
    ([[0, 2], [1, 0]], True),     # eigenvalues +-sqrt(2)
    ([[0, 1], [1, 0]], False),    # eigenvalues +-1 (tie -> not expansive)
    ([[2, 0], [0, 1]], False),
    ([[0, -4], [1, 0]], True),    # eigenvalues +-2i
])
def test_is_expansive_cases(m, expected):
    assert is_expansive(m) is expected


def test_is_expansive_agrees_with_float_eigen_oracle():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 1000:
        d = int(rng.integers(1, 4))
        m = rng.integers(-5, 6, size=(d, d))
        if oracles.eig_near_unit_circle(m):
            continue  # borderline spectra excluded from the float oracle
        assert is_expansive(m) == oracles.eig_expansive(m), f"matrix {m}"
        checked += 1


def test_solve_exact_basic():
    assert solve_exact([[1]], [Fraction(3, 2)]) == (Fraction(3, 2),)
    assert solve_exact([[3]], [1]) == (Fraction(1, 3),)
    assert solve_exact([[15]], [5]) == (Fraction(1, 3),)
    x = solve_exact([[2, 1], [1, 1]], [3, 2])
    assert x == (Fraction(1), Fraction(1))


def test_solve_exact_roundtrip_randomized():
    rng = np.random.default_rng(3)
    for _ in range(200):
        d = int(rng.integers(1, 4))
        a = rng.integers(-9, 10, size=(d, d))
        if round(float(np.linalg.det(a))) == 0:
            continue
        v = [Fraction(int(p), int(q)) for p, q in
             zip(rng.integers(-9, 10, size=d), rng.integers(1, 9, size=d))]
        rows = tuple(tuple(Fraction(int(x)) for x in row) for row in a)
        sol = solve_exact(rows, v)
        for i in range(d):
            assert sum(rows[i][j] * sol[j] for j in range(d)) == v[i]


def test_solve_exact_singular():
    with pytest.raises(SingularMatrix):
        solve_exact([[1, 1], [1, 1]], [1, 2])


@pytest.mark.parametrize("r,b,expected", [
    (2, [0, 1], True),
    (2, [0, 3], True),
    (2, [0, 2], False),
])
def test_residue_classes_distinct_1d(r, b, expected):
    assert residue_classes_distinct([[r]], b) is expected


def test_complete_residue_cases():
    assert is_complete_residue_set([[2]], [0, 3])
    assert not is_complete_residue_set([[4]], [0, 2])
    assert is_complete_residue_set([[2, 0], [0, 2]],
                                   [(0, 0), (1, 0), (0, 1), (1, 1)])


def test_complete_residue_matches_bruteforce():
    rng = np.random.default_rng(11)
    for _ in range(60):
        d = int(rng.integers(1, 3))
        while True:
            m = rng.integers(-3, 4, size=(d, d))
            dm = abs(round(float(np.linalg.det(m))))
            if 1 <= dm <= 16:
                break
        k = int(rng.integers(1, dm + 2))
        digs = [tuple(int(x) for x in rng.integers(-6, 7, size=d))
                for _ in range(k)]
        digs = list(dict.fromkeys(digs))
        assert is_complete_residue_set(m, digs) == \
            oracles.complete_residue_bruteforce(m, digs)
        assert residue_classes_distinct(m, digs) == \
            oracles.residues_distinct_bruteforce(m, digs)


def test_contraction_factor_values():
    assert contraction_factor([[2]]) == pytest.approx(0.5, rel=1e-12)
    assert contraction_factor([[4]]) == pytest.approx(0.25, rel=1e-12)


def test_contraction_factor_not_contractive_example():
    # Expansive (eigenvalues +-sqrt(2)) yet the inverse transpose has
    # operator norm exactly 1, so the one-step bound is refused.
    with pytest.raises(NotContractive):
        contraction_factor([[0, 2], [1, 0]])
    k, c = multi_step_contraction([[0, 2], [1, 0]])
    assert (k, c) == (2, pytest.approx(0.5))
    k2, c2 = multi_step_contraction([[0, -4], [1, 0]])
    assert k2 == 2 and c2 == pytest.approx(0.25)


def test_norm_series_bounds_partial_sums():
    for m in ([[2]], [[0, 2], [1, 0]], [[3, 1], [0, 2]]):
        series = inv_transpose_norm_series(m)
        inv_t = np.linalg.inv(np.array(m, dtype=float).T)
        acc, power = 0.0, np.eye(len(inv_t))
        for _ in range(60):
            power = power @ inv_t
            acc += np.linalg.norm(power, 2)
        assert series >= acc


def test_int_matrix_validation():
    with pytest.raises(ValueError):
        IntMatrix(((1, 2),))
    with pytest.raises(ValueError):
        as_int_matrix([[1.5]])
