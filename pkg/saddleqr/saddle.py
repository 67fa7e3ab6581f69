"""
Symmetric saddle point systems

    [ A   B ] [x]   [b]
    [ B^T -C ] [y] = [c]

with A SPD (m x m), C symmetric PSD (n x n) and B (m x n) of full column rank.
Solved through a QR factorization M = QR as z = R^{-1} (Q^T f).
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Optional

import numpy as np

from .blockgs import BlockPartition
from .blockgs import bcgs
from .blockgs import bcgs2
from .errors import DimensionError
from .errors import RankDeficientError
from .householder import thin_householder_qr
from .linalg import as_matrix
from .linalg import as_vector
from .linalg import back_substitute
from .linalg import cholesky
from .linalg import is_symmetric
from .linalg import matvec
from .linalg import shape_str
from .linalg import spectral_norm
from .linalg import transpose
from .linalg import vector_norm
from .vars import EPS
from .vars import METHODS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SaddleBlocks:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.a, 'A')
        b = as_matrix(self.b, 'B')
        c = as_matrix(self.c, 'C')
        m, n = b.shape
        if a.shape != (m, m):
            raise DimensionError(f'A is {shape_str(a)} but B is {shape_str(b)}')
        if c.shape != (n, n):
            raise DimensionError(f'C is {shape_str(c)} but B is {shape_str(b)}')
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'c', c)

    @property
    def m(self):
        return self.b.shape[0]

    @property
    def n(self):
        return self.b.shape[1]

    @property
    def l(self):
        return self.m + self.n


@dataclass(frozen=True)
class ValidationReport:
    a_spd: bool
    c_psd: bool
    b_full_rank: bool
    a_min_pivot: float
    c_min_eigenvalue: float
    b_min_diagonal: float

    @property
    def ok(self):
        return self.a_spd and self.c_psd and self.b_full_rank


@dataclass(frozen=True)
class SaddleSolution:
    z: np.ndarray
    m: int
    method: str
    q: Optional[np.ndarray] = field(default=None, repr=False)
    r: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def x(self):
        return self.z[:self.m]

    @property
    def y(self):
        return self.z[self.m:]


def assemble(blocks):
    return np.block([
        [blocks.a, blocks.b],
        [transpose(blocks.b), -blocks.c],
    ])


def min_eigenvalue_estimate(c):
    """Smallest eigenvalue of a symmetric C from the dominant eigenvalue of
    the shifted ||C|| I - C, which is PSD."""
    norm_c = spectral_norm(c).value
    if norm_c == 0.0:
        return 0.0, 0.0
    shifted = norm_c * np.eye(c.shape[0]) - c
    return norm_c - spectral_norm(shifted).value, norm_c


def validate(blocks):
    chol = cholesky(blocks.a)
    c_sym = is_symmetric(blocks.c)
    c_min, norm_c = min_eigenvalue_estimate(blocks.c)
    c_psd = c_sym and c_min >= -1e2 * EPS * norm_c
    b_rank = blocks.n <= blocks.m
    b_min = 0.0
    if b_rank:
        try:
            b_min = float(np.min(np.diag(thin_householder_qr(blocks.b).r)))
        except RankDeficientError as err:
            b_rank = False
            b_min = err.pivot_norm
    report = ValidationReport(chol.ok, c_psd, b_rank, chol.min_pivot, c_min, b_min)
    if not report.ok:
        logger.info('saddle validation failed: %s', report)
    return report


def factorize(mat, m, method):
    """(Q, R) of the assembled M along the chosen path."""
    if method == 'householder':
        f = thin_householder_qr(mat)
        return f.q, f.r
    if method == 'bcgs':
        f = bcgs(BlockPartition.split(mat, m))
    elif method == 'bcgs2':
        f = bcgs2(BlockPartition.split(mat, m))
    else:
        raise ValueError(f'unknown method {method!r}, expected one of {METHODS}')
    return f.q, f.r


def solve_factored(q, r, f):
    return back_substitute(r, matvec(transpose(q), f))


def solve(blocks, f, method='bcgs2'):
    f = as_vector(f, 'f')
    if f.shape[0] != blocks.l:
        raise DimensionError(f'f has length {f.shape[0]} but M is {blocks.l}x{blocks.l}')
    mat = assemble(blocks)
    q, r = factorize(mat, blocks.m, method)
    z = solve_factored(q, r, f)
    logger.debug('%s solve: ||z|| = %g', method, vector_norm(z))
    return SaddleSolution(z, blocks.m, method, q, r)
