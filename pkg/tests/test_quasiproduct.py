import numpy as np
import pytest

from speclab import (ExplicitGenerator, InvalidPadding, LatticeGenerator,
                     build_1d_padding, build_quasi_product, det,
                     dual_lattice_basis, fiber_system, find_tiling_lattice,
                     ft_eval, ft_eval_many, is_complete_residue_set,
                     lattice_tiling_check, product_spectrum_check,
                     quasi_product_spec, self_affine, triple)

import oracles


@pytest.fixture(scope="module")
def example_spec():
    """Scale-2 family {0,1}/{0,3} under a scale-2 base layer."""
    return quasi_product_spec(2, [0, 1], [0, 1], 2, [[0, 1], [0, 3]], [0, 1])


def test_build_quasi_product_block_structure(example_spec):
    big = build_quasi_product(example_spec)
    assert big.R.rows == ((2, 0), (0, 2))
    assert set(big.B.vectors) == {(0, 0), (0, 1), (1, 0), (1, 3)}
    assert set(big.L.vectors) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert big.status == "verified" and big.residual < 1e-12


def test_quasi_product_determinant_and_size(example_spec):
    big = build_quasi_product(example_spec)
    assert abs(det(big.R)) == abs(det(example_spec.R1)) * abs(det(example_spec.R))
    assert len(big.B) == example_spec.outer_size * example_spec.inner_size


def test_quasi_product_any_coupling_verifies():
    for c in (-2, -1, 1, 2):
        spec = quasi_product_spec(2, [0, 1], [0, 1], 2, [[0, 1], [0, 3]],
                                  [0, 1], c=[[c]])
        big = build_quasi_product(spec)
        assert big.residual < 1e-12
        assert big.R.rows == ((2, 0), (c, 2))


def test_quasi_product_complete_residue_block(example_spec):
    big = build_quasi_product(example_spec)
    assert is_complete_residue_set(big.R, big.B.vectors)


def test_trivial_outer_reduces_to_padding():
    spec = quasi_product_spec(2, [0], [0], 2, [[0, 1]], [0, 1])
    big = build_quasi_product(spec)
    assert set(big.B.vectors) == {(0, 0), (0, 1)}
    assert big.residual < 1e-12


def test_randomized_specs_verify():
    # pools of verified one-dimensional triples sharing (R, L) per family
    inner_pools = {
        (2, (0, 1)): [[0, 1], [0, 3], [0, 5]],
        (3, (0, 1, 2)): [[0, 1, 2], [0, 1, 5], [0, 4, 2]],
        (4, (0, 1)): [[0, 2], [0, 6]],
    }
    outer_pool = [(2, [0, 1], [0, 1]), (2, [0, 3], [0, 1]),
                  (3, [0, 1, 2], [0, 1, 2]), (4, [0, 2], [0, 1])]
    rng = np.random.default_rng(2024)
    built = 0
    while built < 100:
        r1, a, l1 = outer_pool[rng.integers(0, len(outer_pool))]
        n = len(a)
        (r, l), pool = list(inner_pools.items())[rng.integers(0, len(inner_pools))]
        b_family = [pool[rng.integers(0, len(pool))] for _ in range(n)]
        c = int(rng.integers(-2, 3))
        spec = quasi_product_spec(r1, a, l1, r, b_family, list(l), c=[[c]])
        big = build_quasi_product(spec)
        assert big.residual < 1e-9
        built += 1


def test_padding_construction():
    spec = build_1d_padding(2, [[0, 1], [0, 3]], [0, 1], p=3)
    assert spec.R1.rows == ((6,),)
    assert [b.vectors for b in spec.B_family] == \
        [((0,), (1,)), ((0,), (3,))] * 3
    assert spec.L1.vectors == tuple((i,) for i in range(6))
    big = build_quasi_product(spec)
    assert big.residual < 1e-9


def test_padding_rejects_colliding_scale():
    with pytest.raises(InvalidPadding):
        build_1d_padding(2, [[0, 1], [0, 3]], [0, 1], p=1)
    # default picks the smallest usable p
    assert build_1d_padding(2, [[0, 1], [0, 3]], [0, 1]).R1.rows == ((4,),)
    one_set = build_1d_padding(3, [[0, 1, 2]], [0, 1, 2], p=2)
    assert one_set.R1.rows == ((2,),)
    assert one_set.B_family[0] == one_set.B_family[1]


def test_fiber_system_words(example_spec, two_digit_family):
    fib = fiber_system(example_spec, [0] * 8)
    assert fib.system.kind == "random_word"
    assert fib.system.triple_at(3).B.vectors == ((0,), (1,))
    assert fib.base_point[0] == pytest.approx(0.0, abs=1e-12)
    assert fib.shear[0] == 0.0
    bad = fiber_system(example_spec, (0,) + (1,) * 12)
    assert bad.system.triple_at(2).B.vectors == ((0,), (3,))
    # pi(omega) = sum 2^{-k} a_k = 1/2 for 0111...
    assert bad.base_point[0] == pytest.approx(0.5, abs=1e-6)


def test_fiber_shear_vanishes_only_for_zero_coupling():
    spec = quasi_product_spec(2, [0, 1], [0, 1], 2, [[0, 1], [0, 3]],
                              [0, 1], c=[[1]])
    fib = fiber_system(spec, (1,) * 10)
    assert fib.shear[0] != 0.0
    fib0 = fiber_system(spec, (0,) * 10)
    assert fib0.shear[0] == 0.0  # a_0 = 0 kills every term


def test_fiber_transform_matches_second_coordinate(example_spec):
    # with C = 0 the full transform restricted to (0, xi2) factors through
    # the Lebesgue base layer; the fiber-average identity is checked by
    # comparing the fiber product against its own digit expansion
    rng = np.random.default_rng(8)
    for _ in range(10):
        word = tuple(int(x) for x in rng.integers(0, 2, size=12))
        fib = fiber_system(example_spec, word)
        xi2 = rng.uniform(-6, 6, size=5)
        vals, bounds = ft_eval_many(fib.system, xi2)
        for x, v, bd in zip(xi2, vals, bounds):
            assert abs(abs(v) - oracles.word_ft_abs(word, x)) <= bd + 1e-9


def test_product_spectrum_check_trivial_outer():
    # N = 1: the block measure is (point mass) x Lebesgue; Z x Z passes
    spec = quasi_product_spec(2, [0], [0], 2, [[0, 1]], [0, 1])
    rep = product_spectrum_check(spec, ExplicitGenerator([0]),
                                 LatticeGenerator([[1]]),
                                 grid=np.array([[0.0, 0.3], [0.0, 0.7]]),
                                 window=64)
    assert rep.passed
    # an incomplete fiber lattice fails
    rep2 = product_spectrum_check(spec, ExplicitGenerator([0]),
                                  LatticeGenerator([[2]]),
                                  grid=np.array([[0.0, 0.5]]), window=64)
    assert not rep2.passed and rep2.min_q < 0.6


def test_product_spectrum_check_example_family(example_spec):
    # fragmented 2-D tile: orthogonality is exact, the windowed completeness
    # floor sits well below 1 at this window, matching the per-fiber picture
    grid = np.array([[0.25, 0.5], [0.5, 0.25]])
    rep = product_spectrum_check(example_spec, LatticeGenerator([[1]]),
                                 LatticeGenerator([[1]]), grid=grid, window=32)
    assert rep.max_q <= 1 + 1e-4
    assert not rep.passed


def test_lattice_tiling_checks(lebesgue_system, quarter_cantor_system):
    rep = lattice_tiling_check(lebesgue_system, 1.0, window=64)
    assert rep.passed and rep.max_offlattice_mass < 1e-9
    rep = lattice_tiling_check(quarter_cantor_system, 1.0, window=64)
    assert not rep.passed
    assert abs(rep.worst_point[0]) == 2.0
    assert rep.max_offlattice_mass == pytest.approx(
        oracles.scale4_ft_abs(2.0), abs=1e-9)


def test_tiling_random_words(two_digit_family):
    from speclab import random_word
    rng = np.random.default_rng(11)
    for _ in range(20):
        word = tuple(int(x) for x in rng.integers(0, 2, size=20))
        sys = random_word(two_digit_family, word)
        rep = lattice_tiling_check(sys, 1.0, window=64)
        assert rep.passed, word


def test_dual_lattice_and_search(two_digit_family):
    assert dual_lattice_basis([[2]]).tolist() == [[0.5]]
    assert dual_lattice_basis([[1, 0], [1, 2]]).tolist() == [[1.0, -0.5], [0.0, 0.5]]
    # Lebesgue on [0,1]: the integer lattice is found immediately
    basis, rep = find_tiling_lattice(self_affine(triple(2, [0, 1], [0, 1])),
                                     window=32)
    assert basis.tolist() == [[1]] and rep.passed
    # singular measure: no lattice up to the index cap works
    basis, rep = find_tiling_lattice(self_affine(triple(4, [0, 2], [0, 1])),
                                     window=16, max_index=4)
    assert basis is None and not rep.passed