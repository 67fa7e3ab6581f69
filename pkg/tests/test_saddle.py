import numpy as np
import pytest
from numpy.testing import assert_allclose
from numpy.testing import assert_array_equal

from saddleqr.errors import DimensionError
from saddleqr.errors import SingularMatrixError
from saddleqr.saddle import SaddleBlocks
from saddleqr.saddle import assemble
from saddleqr.saddle import factorize
from saddleqr.saddle import solve
from saddleqr.saddle import validate
from saddleqr.testgen import build_example
from saddleqr.vars import EPS
from saddleqr.vars import METHODS


def test_assemble_examples():
    assert_array_equal(
        assemble(SaddleBlocks([[2.0]], [[1.0]], [[1.0]])),
        [[2.0, 1.0], [1.0, -1.0]],
    )
    assert_array_equal(
        assemble(SaddleBlocks(np.eye(2), np.zeros((2, 1)), [[3.0]])),
        np.diag([1.0, 1.0, -3.0]),
    )


def test_assemble_places_blocks(small_blocks):
    assert_array_equal(assemble(small_blocks), [[2, 0, 1], [0, 2, 0], [1, 0, -1]])


def test_blocks_reject_inconsistent_shapes():
    with pytest.raises(DimensionError, match='3x3.*2x1'):
        SaddleBlocks(np.eye(3), np.ones((2, 1)), np.ones((1, 1)))
    with pytest.raises(DimensionError):
        SaddleBlocks(np.eye(2), np.ones((2, 1)), np.ones((2, 2)))


def test_validate_accepts_valid_system():
    report = validate(SaddleBlocks(np.eye(2), [[1.0], [0.0]], [[0.0]]))
    assert report.ok
    assert report.b_min_diagonal == pytest.approx(1.0)


def test_validate_reports_indefinite_a():
    report = validate(SaddleBlocks([[1.0, 2.0], [2.0, 1.0]], [[1.0], [0.0]], [[0.0]]))
    assert not report.a_spd
    assert report.c_psd and report.b_full_rank
    assert not report.ok


def test_validate_reports_rank_deficient_b():
    report = validate(SaddleBlocks(np.eye(2), [[1.0, 1.0], [1.0, 1.0]], np.zeros((2, 2))))
    assert report.a_spd
    assert not report.b_full_rank


def test_validate_reports_indefinite_c():
    report = validate(SaddleBlocks(np.eye(2), [[1.0], [0.0]], [[-1.0]]))
    assert not report.c_psd
    assert report.c_min_eigenvalue == pytest.approx(-1.0)


@pytest.mark.parametrize('method', METHODS)
def test_solve_small_system(small_blocks, method):
    kappa = np.linalg.cond(assemble(small_blocks))
    sol = solve(small_blocks, [3.0, 2.0, 0.0], method)
    assert_allclose(sol.z, [1.0, 1.0, 1.0], atol=1e3 * EPS * kappa)
    sol = solve(small_blocks, [1.0, 0.0, 0.0], method)
    assert_allclose(sol.z, [1 / 3, 0.0, 1 / 3], atol=1e3 * EPS * kappa)
    assert_array_equal(sol.x, sol.z[:2])
    assert_array_equal(sol.y, sol.z[2:])
    assert sol.method == method


@pytest.mark.parametrize('method', METHODS)
@pytest.mark.parametrize('scale', [1e-170, 1e-155, 1e160])
def test_solve_is_scale_invariant(small_blocks, method, scale):
    blocks = SaddleBlocks(small_blocks.a * scale, small_blocks.b * scale, small_blocks.c * scale)
    sol = solve(blocks, np.array([1.0, 0.0, 0.0]) * scale, method)
    assert_allclose(sol.z, [1 / 3, 0.0, 1 / 3], atol=1e3 * EPS)
    assert np.all(np.diag(sol.r) > 0.0)

@pytest.mark.parametrize('method', METHODS)
def test_solve_singular_system(singular_blocks, method):
    with pytest.raises(SingularMatrixError):
        solve(singular_blocks, [1.0, 1.0, 1.0], method)


def test_solve_checks_rhs_length(small_blocks):
    with pytest.raises(DimensionError):
        solve(small_blocks, [1.0, 2.0])


def test_unknown_method(small_blocks):
    with pytest.raises(ValueError, match='unknown method'):
        factorize(assemble(small_blocks), 2, 'mgs')


def test_methods_agree_on_generated_problem():
    problem = build_example('custom', 20, 10, 2.0, 2.0, 2.0, 1.0, seed=3)
    kappa = np.linalg.cond(problem.matrix)
    a = solve(problem.blocks, problem.f, 'bcgs2').z
    b = solve(problem.blocks, problem.f, 'householder').z
    assert np.linalg.norm(a - b) <= 1e4 * EPS * kappa * np.linalg.norm(a)
    for z in (a, b):
        err = np.linalg.norm(z - problem.z_star) / np.linalg.norm(problem.z_star)
        assert err <= 1e3 * EPS * kappa


def test_generated_blocks_validate():
    problem = build_example('custom', 20, 10, 2.0, 2.0, 2.0, 1.0, seed=3)
    assert validate(problem.blocks).ok
