import numpy as np
import pytest
from numpy.testing import assert_allclose
from numpy.testing import assert_array_equal
from scipy.linalg import hilbert as scipy_hilbert

from saddleqr.errors import DimensionError
from saddleqr.linalg import cholesky
from saddleqr.linalg import condition_number
from saddleqr.linalg import identity_defect
from saddleqr.linalg import singular_values
from saddleqr.linalg import spectral_norm
from saddleqr.linalg import symmetric_eigenvalues
from saddleqr.saddle import assemble
from saddleqr.saddle import validate
from saddleqr.testgen import GeneratorSpec
from saddleqr.testgen import build_example
from saddleqr.testgen import derive_seed
from saddleqr.testgen import example_specs
from saddleqr.testgen import hilbert
from saddleqr.testgen import logspace_diag
from saddleqr.testgen import matrix1
from saddleqr.testgen import matrix2
from saddleqr.testgen import ones_rank_one
from saddleqr.testgen import random_orthogonal
from saddleqr.testgen import scale_problem
from saddleqr.vars import EPS


def in_half_decade(kappa, s):
    return 10 ** (s - 0.5) <= kappa <= 10 ** (s + 0.5)


def test_logspace_diag():
    assert_allclose(np.diag(logspace_diag(10, 6)), [1, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10], rtol=1e-14)
    assert_array_equal(logspace_diag(0, 5), np.eye(5))
    assert_allclose(logspace_diag(3, 2), np.diag([1.0, 1e-3]), rtol=1e-15)
    assert_allclose(logspace_diag(2, 1), [[1e-2]])
    with pytest.raises(DimensionError):
        logspace_diag(1, 0)


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(5, 1) == derive_seed(5, 1)
    assert len({derive_seed(5, 1), derive_seed(5, 2), derive_seed(6, 1), derive_seed(5, 0, 1)}) == 4
    with pytest.raises(ValueError):
        derive_seed(-1, 1)
    with pytest.raises(ValueError):
        derive_seed(1 << 64, 1)


def test_random_orthogonal():
    for seed in range(10):
        q = random_orthogonal(50, seed)
        assert spectral_norm(identity_defect(q)).value <= 1e2 * EPS * 50
    assert_array_equal(random_orthogonal(20, 3), random_orthogonal(20, 3))
    assert not np.array_equal(random_orthogonal(20, 3), random_orthogonal(20, 4))
    assert abs(random_orthogonal(1, 9)[0, 0]) == pytest.approx(1.0, abs=1e-15)


def test_matrix1_well_conditioned_is_left_orthogonal():
    x = matrix1(12, 5, 0.0, 1)
    assert spectral_norm(identity_defect(x)).value <= 1e2 * EPS * 12


def test_matrix1_condition():
    assert in_half_decade(condition_number(matrix1(12, 6, 10.0, 1)).value, 10)


def test_matrix1_singular_values():
    sv = singular_values(matrix1(10, 4, 3.0, 2))
    assert_allclose(sv, np.diag(logspace_diag(3, 4)), rtol=1e-8)


def test_matrix1_dimension_check():
    with pytest.raises(DimensionError):
        matrix1(3, 4, 1.0, 0)


def test_matrix2():
    assert np.max(np.abs(matrix2(10, 0.0, 5) - np.eye(10))) <= 1e2 * EPS * 10
    x = matrix2(20, 6.0, 5)
    assert_array_equal(x, x.T)
    assert cholesky(x).ok
    assert_allclose(symmetric_eigenvalues(x), np.logspace(-6, 0, 20), rtol=1e-6)
    assert cholesky(matrix2(20, 12.0, 6)).ok


@pytest.mark.parametrize('s', [2.0, 6.0, 10.0])
def test_generator_conditioning(s):
    for seed in range(5):
        assert in_half_decade(condition_number(matrix1(20, 10, s, seed)).value, s)
        assert in_half_decade(condition_number(matrix2(10, s, seed)).value, s)


def test_hilbert():
    assert_array_equal(hilbert(1), [[1.0]])
    assert_allclose(hilbert(3), [[1, 1 / 2, 1 / 3], [1 / 2, 1 / 3, 1 / 4], [1 / 3, 1 / 4, 1 / 5]], rtol=0)
    assert_array_equal(hilbert(7), scipy_hilbert(7))
    kappa = condition_number(hilbert(12)).value
    assert 1e15 <= kappa <= 10 ** 17.5


def test_ones_rank_one():
    assert_array_equal(ones_rank_one(1), [[1.0]])
    x = ones_rank_one(3)
    assert_array_equal(x, np.ones((3, 3)))
    lam = symmetric_eigenvalues(x)
    assert_allclose(lam, [0.0, 0.0, 3.0], atol=1e-14)
    assert lam[0] >= -1e2 * EPS * 3


def test_generator_spec():
    assert GeneratorSpec('hilbert', m=3).order == 3
    assert GeneratorSpec('ones_rank_one', m=9, n=4).generate().shape == (4, 4)
    assert_array_equal(GeneratorSpec('matrix1', 6, 3, 1.0, 7).generate(), matrix1(6, 3, 1.0, 7))
    with pytest.raises(ValueError):
        GeneratorSpec('gauss', n=3)
    with pytest.raises(DimensionError):
        GeneratorSpec('matrix1', 2, 3)
    with pytest.raises(DimensionError):
        GeneratorSpec('matrix2')
    with pytest.raises(ValueError):
        GeneratorSpec('matrix2', n=3, s=-1.0)


def test_scale_problem_identity_scaling():
    a, b, c = matrix2(4, 2.0, 1), matrix1(4, 2, 2.0, 2), matrix2(2, 2.0, 3)
    p = scale_problem(a, b, c, 1.0)
    assert_array_equal(p.blocks.a, a)
    assert_array_equal(p.blocks.b, b)
    assert_array_equal(p.blocks.c, c)
    assert_array_equal(p.z_star, np.ones(6))


def test_scale_problem_solution_pattern():
    p = scale_problem(np.eye(2), np.ones((2, 1)), np.ones((1, 1)), 10.0)
    assert_allclose(p.z_star, [10.0, 10.0, 0.1])
    assert_allclose(p.f, assemble(p.blocks) @ p.z_star, rtol=1e-15)
    with pytest.raises(ValueError):
        scale_problem(np.eye(2), np.ones((2, 1)), np.ones((1, 1)), 0.0)


def test_scaling_keeps_block_condition_numbers():
    a1 = matrix2(20, 4.0, 8)
    base = condition_number(a1).value
    for t in (0.01, 100.0):
        scaled = scale_problem(a1, matrix1(20, 5, 2.0, 9), matrix2(5, 2.0, 10), t).blocks.a
        assert condition_number(scaled).value == pytest.approx(base, rel=1e-6)


def test_example_recipes():
    specs = example_specs('1', 12, 6, 0.0, 10.0, 0.0, 4)
    assert [s.kind for s in specs] == ['hilbert', 'matrix1', 'ones_rank_one']
    specs = example_specs('2', 30, 10, 10.0, 10.0, 10.0, 4)
    assert [s.kind for s in specs] == ['matrix2', 'matrix1', 'matrix2']
    assert len({s.seed for s in specs}) == 3
    with pytest.raises(ValueError):
        example_specs('7', 12, 6, 0.0, 10.0, 0.0, 4)


def test_build_example_is_deterministic():
    a = build_example('custom', 12, 6, 2.0, 2.0, 2.0, 10.0, seed=1)
    b = build_example('custom', 12, 6, 2.0, 2.0, 2.0, 10.0, seed=1)
    assert_array_equal(a.matrix, b.matrix)
    assert_array_equal(a.f, b.f)
    assert a.provenance == b.provenance
    assert validate(a.blocks).ok


def test_matrix2_blocks_pass_spd_check():
    assert validate(build_example('2', 20, 10, 12.0, 2.0, 2.0, 1.0, seed=2).blocks).a_spd


@pytest.mark.slow
def test_scaling_changes_saddle_conditioning():
    small = build_example('2', 100, 50, 10.0, 10.0, 10.0, 0.01, seed=0).matrix
    unit = build_example('2', 100, 50, 10.0, 10.0, 10.0, 1.0, seed=0).matrix
    assert condition_number(small).value >= 1e2 * condition_number(unit).value
