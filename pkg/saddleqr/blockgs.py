"""
Block classical Gram-Schmidt on the two-panel partition M = (M1, M2) of a
saddle point matrix, once (BCGS) and with one reorthogonalization pass
(BCGS2). Both use thin Householder QR on each panel.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError
from .errors import FactorizationError
from .errors import RankDeficientError
from .householder import thin_householder_qr
from .linalg import as_matrix
from .linalg import matmul
from .linalg import shape_str
from .linalg import smallest_singular_value
from .linalg import spectral_norm
from .linalg import transpose

logger = logging.getLogger(__name__)

FIRST_PANEL = 'first panel'
SECOND_PANEL = 'second panel'
REORTH_PANEL = 'reorthogonalization panel'


@dataclass(frozen=True)
class BlockPartition:
    m1: np.ndarray
    m2: np.ndarray

    def __post_init__(self):
        m1 = as_matrix(self.m1, 'M1')
        m2 = as_matrix(self.m2, 'M2')
        if m1.shape[0] != m2.shape[0]:
            raise DimensionError(f'panels differ in rows: M1 {shape_str(m1)}, M2 {shape_str(m2)}')
        if m1.shape[1] + m2.shape[1] != m1.shape[0]:
            raise DimensionError(f'panels {shape_str(m1)} and {shape_str(m2)} do not make a square matrix')
        object.__setattr__(self, 'm1', m1)
        object.__setattr__(self, 'm2', m2)

    @classmethod
    def split(cls, mat, m):
        mat = as_matrix(mat, 'M')
        if not 0 < m < mat.shape[1]:
            raise DimensionError(f'cannot split {shape_str(mat)} after column {m}')
        return cls(mat[:, :m], mat[:, m:])

    @property
    def m(self):
        return self.m1.shape[1]

    @property
    def n(self):
        return self.m2.shape[1]

    @property
    def matrix(self):
        return np.hstack([self.m1, self.m2])


@dataclass(frozen=True)
class Reorthogonalization:
    """BCGS2 intermediates: S^(new) = S1 + S2 R2 and R2^(new) = R2bar R2."""
    s1: np.ndarray
    s2: np.ndarray
    r2: np.ndarray
    r2_bar: np.ndarray


@dataclass(frozen=True)
class BlockQR:
    q1: np.ndarray
    q2: np.ndarray
    r1: np.ndarray
    s: np.ndarray
    r2: np.ndarray
    diagnostics: Optional[Reorthogonalization] = None

    @property
    def q(self):
        return np.hstack([self.q1, self.q2])

    @property
    def r(self):
        m, n = self.r1.shape[0], self.r2.shape[0]
        out = np.zeros((m + n, m + n))
        out[:m, :m] = self.r1
        out[:m, m:] = self.s
        out[m:, m:] = self.r2
        return out


def _panel_qr(x, step):
    try:
        return thin_householder_qr(x)
    except RankDeficientError as err:
        raise err.in_step(step) from err


def _project_out(q1, x):
    """Return (Q1^T X, X - Q1 Q1^T X)."""
    s = matmul(transpose(q1), x)
    return s, x - matmul(q1, s)


def bcgs(p):
    f1 = _panel_qr(p.m1, FIRST_PANEL)
    s, y = _project_out(f1.q, p.m2)
    f2 = _panel_qr(y, SECOND_PANEL)
    logger.debug('BCGS on %s + %s done', shape_str(p.m1), shape_str(p.m2))
    return BlockQR(f1.q, f2.q, f1.r, s, f2.r)


def bcgs2(p):
    f1 = _panel_qr(p.m1, FIRST_PANEL)
    s1, y1 = _project_out(f1.q, p.m2)
    f2 = _panel_qr(y1, SECOND_PANEL)
    s2, y2 = _project_out(f1.q, f2.q)
    f3 = _panel_qr(y2, REORTH_PANEL)
    s_new = s1 + matmul(s2, f2.r)
    r2_new = matmul(f3.r, f2.r)
    diag = np.diag(r2_new)
    if not np.all(diag > 0.0):
        bad = int(np.argmin(diag)) + 1
        raise FactorizationError(f'R2 lost its positive diagonal at row {bad} ({diag[bad - 1]:g})')
    logger.debug('BCGS2 on %s + %s done', shape_str(p.m1), shape_str(p.m2))
    return BlockQR(f1.q, f3.q, f1.r, s_new, r2_new, Reorthogonalization(s1, s2, f2.r, f3.r))


def orthogonality_driver(p, f):
    """||M2|| * ||R2^{-1}||, the factor BCGS loss of orthogonality scales with.
    For a BCGS2 result the first-pass R2 is used."""
    r2 = f.diagnostics.r2 if f.diagnostics is not None else f.r2
    return spectral_norm(p.m2).value / smallest_singular_value(r2).value
