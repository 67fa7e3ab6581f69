"""
Thin Householder QR, the orthogonal factorization every block algorithm in
this package is built on.

Reflectors use v = x / ||x|| + sign(x_1) e_1 (sign(0) = +1), the classical
x + sign(x_1)||x|| e_1 scaled to unit size. Q is formed
explicitly and the signs are fixed once at the end so that R has a positive
diagonal.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DimensionError
from .errors import RankDeficientError
from .linalg import as_matrix
from .linalg import dot
from .linalg import identity_defect
from .linalg import matmul
from .linalg import shape_str
from .linalg import spectral_norm
from .linalg import vector_norm
from .vars import DEFAULT_TOL
from .vars import EPS

logger = logging.getLogger(__name__)

ACCUMULATE = ('backward', 'columns')


@dataclass(frozen=True)
class Reflectors:
    """Householder vectors and the raw (unsigned) triangular factor."""
    vectors: Tuple[np.ndarray, ...]
    betas: Tuple[float, ...]
    r: np.ndarray
    rows: int


@dataclass(frozen=True)
class ThinQR:
    q: np.ndarray
    r: np.ndarray


def rank_threshold(x):
    return EPS * math.sqrt(x.shape[0]) * spectral_norm(x, tol=1e-3).value


def triangularize(x, rank_tol=None):
    """Reduce X (l x k, l >= k) to upper triangular form by reflections.

    ``rank_tol`` is the absolute pivot threshold; None means
    eps * sqrt(l) * ||X||, 0.0 rejects only exactly zero pivots.
    """
    x = as_matrix(x, 'X')
    l, k = x.shape
    if l < k:
        raise DimensionError(f'thin QR needs rows >= cols, got {shape_str(x)}')
    if rank_tol is None:
        rank_tol = rank_threshold(x)
    work = x.copy()
    vectors = []
    betas = []
    for j in range(k):
        col = work[j:, j]
        alpha = vector_norm(col)
        if not alpha > rank_tol:
            raise RankDeficientError(j + 1, alpha)
        sign = 1.0 if col[0] >= 0.0 else -1.0
        # unit-scaled v keeps v^T v in [2, 4] whatever the size of X
        v = col / alpha
        v[0] += sign
        beta = 2.0 / dot(v, v)
        if j + 1 < k:
            w = matmul(v[None, :], work[j:, j + 1:])[0]
            work[j:, j + 1:] -= np.outer(beta * v, w)
        work[j, j] = -sign * alpha
        work[j + 1:, j] = 0.0
        vectors.append(v)
        betas.append(beta)
    return Reflectors(tuple(vectors), tuple(betas), np.triu(work[:k, :k]), l)


def _accumulate_backward(refl):
    l, k = refl.rows, refl.r.shape[0]
    q = np.eye(l, k)
    for j in range(k - 1, -1, -1):
        v = refl.vectors[j]
        w = matmul(v[None, :], q[j:, j:])[0]
        q[j:, j:] -= np.outer(refl.betas[j] * v, w)
    return q


def _accumulate_columns(refl):
    l, k = refl.rows, refl.r.shape[0]
    q = np.zeros((l, k))
    for c in range(k):
        e = np.zeros(l)
        e[c] = 1.0
        # H_j with j > c leaves e_c alone
        for j in range(c, -1, -1):
            v = refl.vectors[j]
            e[j:] -= refl.betas[j] * dot(v, e[j:]) * v
        q[:, c] = e
    return q


def thin_householder_qr(x, rank_tol=None, accumulate='backward'):
    """Positive-diagonal thin QR of a full column rank l x k matrix."""
    if accumulate not in ACCUMULATE:
        raise ValueError(f'accumulate must be one of {ACCUMULATE}')
    refl = triangularize(x, rank_tol)
    if accumulate == 'backward':
        q = _accumulate_backward(refl)
    else:
        q = _accumulate_columns(refl)
    r = refl.r
    signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
    r = r * signs[:, None]
    q = q * signs[None, :]
    logger.debug('thin QR %s done', shape_str(q))
    return ThinQR(np.ascontiguousarray(q), np.ascontiguousarray(r))


def qr_residuals(x, f, tol=DEFAULT_TOL):
    """(orth, dec) of a thin factorization, in units of eps."""
    x = as_matrix(x, 'X')
    if f.q.shape[0] != x.shape[0] or f.q.shape[1] != f.r.shape[0] or f.r.shape[1] != x.shape[1]:
        raise DimensionError(
            f'factors {shape_str(f.q)} and {shape_str(f.r)} do not match X {shape_str(x)}')
    orth = spectral_norm(identity_defect(f.q), tol).value / EPS
    resid = spectral_norm(x - matmul(f.q, f.r), tol).value
    norm_x = spectral_norm(x, tol).value
    dec = resid / (EPS * norm_x) if norm_x else 0.0
    return orth, dec
