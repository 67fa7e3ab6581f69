"""
Error metrics of a QR-based solve of M z = f and the perturbation bounds that
turn a measured factorization into a backward-error certificate.

All metrics are reported in units of the machine precision eps:

    orth = ||I - Q^T Q|| / eps
    dec  = ||M - Q R|| / (eps ||M||)
    res  = ||M z - f|| / (eps ||M|| ||z||)
    stab = ||z - z*|| / (eps kappa(M) ||z||)

Both res and stab are normalized by the computed solution z.
"""
import logging
import math
from dataclasses import astuple
from dataclasses import dataclass
from dataclasses import fields

import numpy as np

from .errors import DegenerateSolutionError
from .errors import DimensionError
from .errors import HypothesisError
from .linalg import as_matrix
from .linalg import as_vector
from .linalg import condition_number
from .linalg import identity_defect
from .linalg import matmul
from .linalg import matvec
from .linalg import shape_str
from .linalg import smallest_singular_value
from .linalg import spectral_norm
from .linalg import symmetric_eigenvalues
from .linalg import transpose
from .linalg import vector_norm
from .vars import BACKWARD_STABLE
from .vars import DEFAULT_TOL
from .vars import EPS
from .vars import JACOBI_MAX_DIM

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StabilityReport:
    kappa: float
    orth: float
    dec: float
    res: float
    stab: float

    @classmethod
    def columns(cls):
        return tuple(f.name for f in fields(cls))

    def as_row(self):
        return astuple(self)


@dataclass(frozen=True)
class Lemma1Bounds:
    beta: float
    norm_q: float
    norm_q_inv: float
    right_defect: float

    def holds(self, slack=10 * EPS):
        b = self.beta
        return (
            self.norm_q <= math.sqrt(1.0 + b) * (1.0 + slack) + slack
            and self.norm_q_inv <= (1.0 + slack) / math.sqrt(1.0 - b) + slack
            and self.right_defect <= b * (1.0 + slack) + slack
        )


@dataclass(frozen=True)
class PerturbationBound:
    alpha: float
    beta: float
    gamma: float
    delta: float
    mu: float
    nu: float
    hypotheses_hold: bool = True

    def residual_bound(self, norm_m, norm_z, norm_f, slack=1e2 * EPS):
        """Right-hand side of ||M z - f|| <= mu ||M|| ||z|| + nu ||f||, plus slack."""
        return (self.mu * norm_m * norm_z + self.nu * norm_f
                + slack * (norm_m * norm_z + norm_f))

    def is_backward_stable(self, threshold=BACKWARD_STABLE):
        return self.hypotheses_hold and self.mu <= threshold and self.nu <= threshold


def _check_shapes(mat, q, r, f, *vectors):
    l = mat.shape[0]
    if mat.shape != (l, l) or q.shape != (l, l) or r.shape != (l, l):
        raise DimensionError(f'M {shape_str(mat)}, Q {shape_str(q)}, R {shape_str(r)} must all be {l}x{l}')
    for v in (f,) + vectors:
        if v.shape != (l,):
            raise DimensionError(f'vector of shape {shape_str(v)} does not match M {shape_str(mat)}')


def metrics(mat, q, r, f, z_computed, z_star, tol=DEFAULT_TOL, kappa=None):
    mat = as_matrix(mat, 'M')
    q = as_matrix(q, 'Q')
    r = as_matrix(r, 'R')
    f = as_vector(f, 'f')
    z = as_vector(z_computed, 'z')
    z_star = as_vector(z_star, 'z_star')
    _check_shapes(mat, q, r, f, z, z_star)
    norm_z = vector_norm(z)
    if norm_z == 0.0:
        raise DegenerateSolutionError()
    if kappa is None:
        kappa = condition_number(mat, tol).value
    norm_m = spectral_norm(mat, tol).value
    orth = spectral_norm(identity_defect(q), tol).value / EPS
    dec = spectral_norm(mat - matmul(q, r), tol).value / (EPS * norm_m)
    res = vector_norm(matvec(mat, z) - f) / (EPS * norm_m * norm_z)
    stab = vector_norm(z - z_star) / (EPS * kappa * norm_z)
    return StabilityReport(kappa, orth, dec, res, stab)


def lemma1_bounds(qt, tol=DEFAULT_TOL):
    """Measure beta = ||I - Qt^T Qt|| together with ||Qt||, ||Qt^{-1}|| and
    ||I - Qt Qt^T||.

    Up to dimension 64 the four quantities come from the exact Jacobi
    eigenvalues of Qt^T Qt and Qt Qt^T; larger matrices use power and inverse
    iteration.
    """
    qt = as_matrix(qt, 'Qt')
    if qt.shape[0] != qt.shape[1]:
        raise DimensionError(f'Qt must be square, got {shape_str(qt)}')
    gram = matmul(transpose(qt), qt)
    if qt.shape[0] <= JACOBI_MAX_DIM:
        lam = symmetric_eigenvalues(gram)
        beta = float(np.max(np.abs(1.0 - lam)))
        if beta >= 1.0:
            raise HypothesisError(f'Lemma 1 hypothesis violated: beta = {beta:g}')
        right = symmetric_eigenvalues(matmul(qt, transpose(qt)))
        return Lemma1Bounds(
            beta,
            math.sqrt(lam[-1]),
            1.0 / math.sqrt(lam[0]),
            float(np.max(np.abs(1.0 - right))),
        )
    beta = spectral_norm(np.eye(qt.shape[0]) - gram, tol).value
    if beta >= 1.0:
        raise HypothesisError(f'Lemma 1 hypothesis violated: beta = {beta:g}')
    return Lemma1Bounds(
        beta,
        spectral_norm(qt, tol).value,
        1.0 / smallest_singular_value(qt, tol).value,
        spectral_norm(identity_defect(transpose(qt)), tol).value,
    )


def theorem1_bound(alpha, beta, gamma, delta):
    """(mu, nu) of the backward perturbation certified by a QR solve.

    mu = alpha + gamma (1 + alpha) sqrt((1 + beta) / (1 - beta))
    nu = beta + delta (1 + beta)

    nu carries delta, the bound on the Q^T f perturbation, as the bound on
    Delta f is derived from ||I - Q Q^T|| + delta ||Q||^2.
    """
    if min(alpha, beta, gamma, delta) < 0.0:
        raise HypothesisError('perturbation bound inputs must be nonnegative')
    if beta >= 1.0:
        raise HypothesisError(f'perturbation bound needs beta < 1, got {beta:g}')
    mu = alpha + gamma * (1.0 + alpha) * math.sqrt((1.0 + beta) / (1.0 - beta))
    nu = beta + delta * (1.0 + beta)
    return mu, nu


def backward_certificate(mat, q, r, f, z_computed, tol=DEFAULT_TOL, kappa=None):
    mat = as_matrix(mat, 'M')
    q = as_matrix(q, 'Q')
    r = as_matrix(r, 'R')
    f = as_vector(f, 'f')
    z = as_vector(z_computed, 'z')
    _check_shapes(mat, q, r, f, z)
    l = mat.shape[0]
    norm_m = spectral_norm(mat, tol).value
    alpha = spectral_norm(mat - matmul(q, r), tol).value / norm_m
    beta = spectral_norm(identity_defect(q), tol).value
    gamma = delta = EPS * l
    if kappa is None:
        kappa = condition_number(mat, tol).value
    if beta >= 1.0 or alpha * kappa >= 1.0:
        logger.info('no backward certificate: beta = %g, alpha*kappa = %g', beta, alpha * kappa)
        return PerturbationBound(alpha, beta, gamma, delta, math.inf, math.inf, False)
    mu, nu = theorem1_bound(alpha, beta, gamma, delta)
    return PerturbationBound(alpha, beta, gamma, delta, mu, nu)
