"""
End-to-end runs of the experiment families with order-of-magnitude bands.
"""
import numpy as np
import pytest

from saddleqr.bench import BenchConfig
from saddleqr.bench import BenchRunner
from saddleqr.errors import SingularMatrixError
from saddleqr.linalg import condition_number
from saddleqr.saddle import SaddleBlocks
from saddleqr.saddle import assemble
from saddleqr.saddle import factorize
from saddleqr.saddle import solve_factored
from saddleqr.saddle import validate
from saddleqr.stability import backward_certificate
from saddleqr.testgen import build_example
from saddleqr.testgen import matrix1
from saddleqr.testgen import matrix2
from saddleqr.vars import EPS


def bench_rows(cfg):
    return list(BenchRunner(cfg, progress=False).run())


@pytest.fixture(scope='module')
def example1_rows():
    cfg = BenchConfig.for_example('1', methods=('bcgs', 'bcgs2'))
    return bench_rows(cfg)


def test_example1_bcgs2_is_stable(example1_rows):
    for row in example1_rows:
        assert row.cells['res_bcgs2'] <= 1e2
        assert row.cells['stab_bcgs2'] <= 1e2


def test_example1_bcgs_loses_residual(example1_rows):
    large = [row.t for row in example1_rows if row.cells['res_bcgs'] >= 1e3]
    assert len(large) >= 3


def test_example1_forward_follows_backward(example1_rows):
    for row in example1_rows:
        assert row.cells['stab_bcgs2'] <= 10 * row.cells['res_bcgs2']


def test_example2_reduced_orthogonality_contrast():
    cfg = BenchConfig.for_example('2', m=200, n=100, t_list=(1.0,))
    (row,) = bench_rows(cfg)
    assert row.cells['orth_bcgs2'] <= 1e3
    assert row.cells['orth_bcgs'] >= 1e3 * row.cells['orth_bcgs2']
    assert row.cells['stab_bcgs2'] <= 10 * row.cells['res_bcgs2']


def certified_cases():
    cfg = BenchConfig.for_example('1')
    for t in cfg.t_list:
        yield pytest.param(cfg, t, id=f'example1-t{t:g}')
    cfg = BenchConfig.for_example('2', m=200, n=100, t_list=(1.0,))
    yield pytest.param(cfg, 1.0, id='example2-reduced')


@pytest.mark.parametrize('cfg, t', list(certified_cases()))
def test_bcgs2_residual_is_certified(cfg, t):
    problem = build_example(cfg.example, cfg.m, cfg.n, cfg.s_a, cfg.s_b, cfg.s_c, t, cfg.seed)
    mat = problem.matrix
    q, r = factorize(mat, cfg.m, 'bcgs2')
    z = solve_factored(q, r, problem.f)
    cert = backward_certificate(mat, q, r, problem.f, z)
    assert cert.hypotheses_hold
    bound = cert.residual_bound(np.linalg.norm(mat, 2), np.linalg.norm(z), np.linalg.norm(problem.f))
    assert np.linalg.norm(mat @ z - problem.f) <= bound


def random_saddle(rng, seed):
    m = int(rng.integers(1, 6))
    n = int(rng.integers(1, min(m, 8 - m) + 1))
    return SaddleBlocks(
        matrix2(m, float(rng.uniform(0, 2)), seed),
        matrix1(m, n, float(rng.uniform(0, 2)), seed + 1),
        matrix2(n, float(rng.uniform(0, 2)), seed + 2),
    )


def test_small_systems_match_dense_oracle(rng):
    checked = 0
    for k in range(100):
        blocks = random_saddle(rng, 3 * k)
        mat = assemble(blocks)
        try:
            kappa = condition_number(mat).value
        except SingularMatrixError:
            continue
        if kappa > 1e6 or not validate(blocks).ok:
            continue
        f = rng.standard_normal(blocks.l)
        expected = np.linalg.solve(mat, f)
        for method in ('bcgs2', 'householder'):
            q, r = factorize(mat, blocks.m, method)
            z = solve_factored(q, r, f)
            err = np.linalg.norm(z - expected) / np.linalg.norm(expected)
            assert err <= 1e4 * EPS * kappa
            if method == 'bcgs2':
                cert = backward_certificate(mat, q, r, f, z, kappa=kappa)
                assert cert.hypotheses_hold
                bound = cert.residual_bound(np.linalg.norm(mat, 2), np.linalg.norm(z), np.linalg.norm(f))
                assert np.linalg.norm(mat @ z - f) <= bound
        checked += 1
    assert checked >= 50


@pytest.mark.slow
def test_full_scale_smoke():
    cfg = BenchConfig.for_example('2', t_list=(1.0,))
    (row,) = bench_rows(cfg)
    assert row.cells['dec_bcgs'] <= 1e3
    assert row.cells['dec_bcgs2'] <= 1e3
    assert row.cells['res_bcgs2'] <= 1e2
    assert row.cells['stab_bcgs2'] <= 10 * row.cells['res_bcgs2']
