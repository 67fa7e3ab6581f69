"""
Dense kernels shared by every other module: products, norms, condition
estimation, triangular solves and the Cholesky SPD certificate.

Matrices are C-contiguous float64 numpy arrays. Every reduction is carried out
in a fixed serial order (cumulative sums along the reduced index), so repeated
runs give bitwise identical results regardless of the BLAS build or the
number of threads numpy was started with.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError
from .errors import NonFiniteError
from .errors import SingularMatrixError
from .errors import ZeroPivotError
from .vars import DEFAULT_TOL
from .vars import EPS
from .vars import JACOBI_MAX_DIM
from .vars import default_max_iter

logger = logging.getLogger(__name__)

TINY = float(np.finfo(np.float64).tiny)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class CholeskyResult:
    """Outcome of :func:`cholesky`. A failed factorization is a normal result:
    ``factor`` is None and ``pivot`` names the 1-based offending pivot."""
    factor: Optional[np.ndarray]
    pivot: Optional[int]
    min_pivot: float
    reason: str = ''

    @property
    def ok(self):
        return self.factor is not None


def shape_str(a):
    return 'x'.join(str(d) for d in np.shape(a))


def as_matrix(a, name='matrix'):
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 2 or 0 in arr.shape:
        raise DimensionError(f'{name} must be a non-empty 2-D array, got shape {shape_str(arr)}')
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f'{name} has NaN or Inf entries')
    return arr


def as_vector(v, name='vector'):
    arr = np.ascontiguousarray(v, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = np.ascontiguousarray(arr[:, 0])
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise DimensionError(f'{name} must be a non-empty 1-D array, got shape {shape_str(arr)}')
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f'{name} has NaN or Inf entries')
    return arr


def _square(a, name):
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f'{name} must be square, got {shape_str(a)}')


def dot(x, y):
    """Inner product accumulated left to right."""
    prod = np.multiply(x, y)
    if prod.size == 0:
        return 0.0
    return float(np.cumsum(prod)[-1])


def vector_norm(x):
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        return 0.0
    scale = float(np.max(np.abs(x)))
    if scale == 0.0 or not math.isfinite(scale):
        return scale
    y = x / scale
    return scale * math.sqrt(dot(y, y))


def matmul(a, b):
    """Matrix product with the inner index accumulated in ascending order.

    Entry (i, j) is ``((a[i,0]*b[0,j] + a[i,1]*b[1,j]) + ...)``, the same
    value a naive triple loop produces.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f'cannot multiply {shape_str(a)} by {shape_str(b)}')
    rows, inner = a.shape
    cols = b.shape[1]
    if inner == 0:
        return np.zeros((rows, cols))
    if cols == 1:
        return np.ascontiguousarray(np.cumsum(a * b[:, 0], axis=1)[:, -1:])
    if rows == 1:
        return np.ascontiguousarray(np.cumsum(a[0, :, None] * b, axis=0)[-1:])
    # one rank-one update per inner index, added in ascending order
    out = a[:, 0, None] * b[0]
    term = np.empty_like(out)
    for k in range(1, inner):
        np.multiply(a[:, k, None], b[k], out=term)
        out += term
    return out


def matvec(a, x):
    x = np.asarray(x, dtype=np.float64)
    return matmul(a, x.reshape(-1, 1))[:, 0]


def transpose(a):
    return np.ascontiguousarray(np.asarray(a, dtype=np.float64).T)


def identity_defect(q):
    """I - Q^T Q for a (left) orthogonal candidate Q."""
    g = matmul(transpose(q), q)
    return np.eye(g.shape[0]) - g


def _pow2_scale(x):
    """Power of two near max|x_ij|; dividing by it is exact and leaves the
    largest entry in [0.5, 1)."""
    big = float(np.max(np.abs(x))) if x.size else 0.0
    if big == 0.0:
        return 0.0
    if not math.isfinite(big):
        raise NonFiniteError('matrix has NaN or Inf entries')
    return math.ldexp(1.0, math.frexp(big)[1])


def _power_iteration(step, v, tol, max_iter):
    """Run ``rq, w = step(v)`` from unit ``v`` until the Rayleigh quotient
    settles to relative change ``tol``."""
    rq_prev = None
    rq = 0.0
    for it in range(1, max_iter + 1):
        rq, w = step(v)
        if not math.isfinite(rq):
            return rq, it, False
        wn = vector_norm(w)
        if wn == 0.0:
            return rq, it, True
        v = w / wn
        if rq_prev is not None and abs(rq - rq_prev) <= tol * rq:
            return rq, it, True
        rq_prev = rq
    return rq, max_iter, False


def spectral_norm(x, tol=DEFAULT_TOL, max_iter=None):
    """Estimate ||X||_2 by power iteration on X^T X.

    Starts from the normalized all-ones vector. If the estimate ends below the
    largest column norm (a known lower bound) the start vector missed the
    dominant subspace and the iteration is restarted from that column's
    basis vector.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise DimensionError(f'spectral_norm expects a matrix, got {shape_str(x)}')
    if tol <= 0:
        raise ValueError('tol must be positive')
    n = x.shape[1]
    if max_iter is None:
        max_iter = default_max_iter(max(x.shape))
    scale = _pow2_scale(x)
    if scale == 0.0:
        return NormEstimate(0.0, 0, True)
    x = x / scale
    col_norms = np.array([vector_norm(x[:, j]) for j in range(n)])
    xt = transpose(x)

    def step(v):
        y = matvec(x, v)
        return dot(y, y), matvec(xt, y)

    rq, its, ok = _power_iteration(step, np.full(n, 1.0 / math.sqrt(n)), tol, max_iter)
    j = int(np.argmax(col_norms))
    if not rq >= col_norms[j] ** 2 * (1.0 - 10 * EPS):
        logger.debug('power iteration stalled at %g below column bound %g; restarting from e_%d',
                     math.sqrt(max(rq, 0.0)) * scale, col_norms[j] * scale, j + 1)
        e = np.zeros(n)
        e[j] = 1.0
        rq2, its2, ok = _power_iteration(step, e, tol, max_iter)
        its += its2
        rq = max(rq2, rq)
    if not ok:
        logger.debug('spectral_norm did not converge in %d iterations', max_iter)
    return NormEstimate(scale * math.sqrt(max(rq, 0.0)), its, ok)


def smallest_singular_value(x, tol=DEFAULT_TOL, max_iter=None):
    """Estimate sigma_min of a square or tall X by inverse iteration.

    X = QR by Householder reflections; (X^T X)^{-1} = R^{-1} R^{-T}, so the
    iteration only needs the two triangular solves with R.
    """
    from .householder import triangularize
    x = np.asarray(x, dtype=np.float64)
    rows, cols = x.shape
    if rows < cols:
        raise DimensionError(f'need rows >= cols, got {shape_str(x)}')
    if max_iter is None:
        max_iter = default_max_iter(rows)
    xscale = _pow2_scale(x)
    if xscale == 0.0:
        raise SingularMatrixError('singular-to-working-precision')
    try:
        r = triangularize(x / xscale, rank_tol=0.0).r
    except SingularMatrixError as err:
        raise SingularMatrixError('singular-to-working-precision') from err
    scale = float(np.max(np.abs(r)))
    if np.min(np.abs(np.diag(r))) <= EPS * EPS * cols * scale:
        raise SingularMatrixError('singular-to-working-precision')
    rt = transpose(r)

    def step(v):
        u = forward_substitute(rt, v)
        return dot(u, u), back_substitute(r, u)

    try:
        rq, its, ok = _power_iteration(step, np.full(cols, 1.0 / math.sqrt(cols)), tol, max_iter)
    except ZeroPivotError as err:
        raise SingularMatrixError('singular-to-working-precision') from err
    if not math.isfinite(rq) or rq <= 0.0:
        raise SingularMatrixError('singular-to-working-precision')
    return NormEstimate(xscale / math.sqrt(rq), its, ok)


def condition_number(m, tol=DEFAULT_TOL, max_iter=None):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < m.shape[1]:
        raise DimensionError(f'condition_number needs a square (or tall) matrix, got {shape_str(m)}')
    smax = spectral_norm(m, tol, max_iter)
    if smax.value == 0.0:
        raise SingularMatrixError('singular-to-working-precision')
    smin = smallest_singular_value(m, tol, max_iter)
    return NormEstimate(
        smax.value / smin.value,
        smax.iterations + smin.iterations,
        smax.converged and smin.converged,
    )


def back_substitute(r, g):
    """Solve R z = g for upper triangular R, summing each row from the last
    column down."""
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if r.ndim != 2 or r.shape[0] != r.shape[1] or g.shape != (r.shape[0],):
        raise DimensionError(f'back_substitute: R is {shape_str(r)}, g is {shape_str(g)}')
    n = r.shape[0]
    z = np.zeros(n)
    for i in range(n - 1, -1, -1):
        d = r[i, i]
        if not abs(d) >= TINY:
            raise ZeroPivotError(i + 1)
        if i == n - 1:
            z[i] = g[i] / d
        else:
            terms = (r[i, i + 1:] * z[i + 1:])[::-1]
            z[i] = (g[i] - np.cumsum(terms)[-1]) / d
    return z


def forward_substitute(l, g):
    l = np.asarray(l, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if l.ndim != 2 or l.shape[0] != l.shape[1] or g.shape != (l.shape[0],):
        raise DimensionError(f'forward_substitute: L is {shape_str(l)}, g is {shape_str(g)}')
    n = l.shape[0]
    z = np.zeros(n)
    for i in range(n):
        d = l[i, i]
        if not abs(d) >= TINY:
            raise ZeroPivotError(i + 1)
        if i == 0:
            z[i] = g[i] / d
        else:
            z[i] = (g[i] - np.cumsum(l[i, :i] * z[:i])[-1]) / d
    return z


def is_symmetric(a, factor=10.0):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = spectral_norm(a).value
    return bool(np.max(np.abs(a - a.T)) <= factor * EPS * scale)


def cholesky(a):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionError(f'cholesky expects a matrix, got {shape_str(a)}')
    _square(a, 'A')
    if not is_symmetric(a):
        return CholeskyResult(None, None, math.nan, 'not symmetric')
    n = a.shape[0]
    l = np.zeros((n, n))
    min_pivot = math.inf
    for j in range(n):
        d = a[j, j] - dot(l[j, :j], l[j, :j])
        min_pivot = min(min_pivot, d)
        if not d > 0.0:
            return CholeskyResult(None, j + 1, min_pivot, 'not positive definite')
        l[j, j] = math.sqrt(d)
        if j + 1 < n:
            if j == 0:
                s = np.zeros(n - 1)
            else:
                s = np.cumsum(l[j + 1:, :j] * l[j, :j], axis=1)[:, -1]
            l[j + 1:, j] = (a[j + 1:, j] - s) / l[j, j]
    return CholeskyResult(l, None, min_pivot)


def symmetric_eigenvalues(s, tol=EPS, max_sweeps=64):
    """Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations,
    ascending. Only meant for dimension <= 64 (used as an exact oracle)."""
    a = np.array(s, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionError(f'expected a matrix, got {shape_str(a)}')
    _square(a, 'S')
    n = a.shape[0]
    if n > JACOBI_MAX_DIM:
        raise DimensionError(f'Jacobi eigensolver is limited to dimension {JACOBI_MAX_DIM}, got {n}')
    for sweep in range(max_sweeps):
        off = a - np.diag(np.diag(a))
        if vector_norm(off.ravel()) <= tol * vector_norm(a.ravel()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                sn = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - sn * aq
                a[:, q] = sn * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - sn * aq
                a[q, :] = sn * ap + c * aq
    else:
        logger.warning('Jacobi eigensolver stopped after %d sweeps', max_sweeps)
    return np.sort(np.diag(a))


def singular_values(x):
    """Singular values, descending, from the Jacobi eigenvalues of X^T X."""
    x = np.asarray(x, dtype=np.float64)
    scale = _pow2_scale(x)
    if scale == 0.0:
        return np.zeros(x.shape[1])
    x = x / scale
    lam = symmetric_eigenvalues(matmul(transpose(x), x))
    return scale * np.sqrt(np.clip(lam, 0.0, None))[::-1]
