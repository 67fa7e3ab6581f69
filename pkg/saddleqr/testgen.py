"""
Seeded test problems: matrices with prescribed singular values or eigenvalues,
the Hilbert matrix, the rank-one e e^T, and the t-scaled saddle family

    A = A1 / t,  B = B1 t,  C = C1 t,
    x* = t (1, ..., 1),  y* = (1, ..., 1) / t,  f = M z*.

Random matrices come from numpy's PCG64 generator. Every call gets its own
generator seeded from an explicit 64-bit seed, and sub-seeds are derived with
numpy's SeedSequence, so a generator output depends on its arguments only.
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Optional
from typing import Tuple

import numpy as np

from .errors import DimensionError
from .householder import thin_householder_qr
from .linalg import as_matrix
from .linalg import matmul
from .linalg import matvec
from .linalg import shape_str
from .linalg import transpose
from .saddle import SaddleBlocks
from .saddle import assemble
from .vars import EXAMPLES
from .vars import GENERATOR_KINDS
from .vars import SEED_KEYS

logger = logging.getLogger(__name__)

SEED_LIMIT = 1 << 64


def check_seed(seed):
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f'seed must be an unsigned 64-bit integer, got {seed}')
    return seed


def derive_seed(seed, *keys):
    """Child seed of ``seed`` under the integer path ``keys``."""
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0])


def _rng(seed):
    return np.random.Generator(np.random.PCG64(check_seed(seed)))


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    m: Optional[int] = None
    n: Optional[int] = None
    s: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f'unknown generator kind {self.kind!r}, expected one of {GENERATOR_KINDS}')
        if self.s < 0:
            raise ValueError(f's must be nonnegative, got {self.s}')
        check_seed(self.seed)
        if self.kind == 'matrix1':
            if self.m is None or self.n is None:
                raise DimensionError('matrix1 needs both m and n')
            if not self.m >= self.n >= 1:
                raise DimensionError(f'matrix1 needs m >= n >= 1, got m={self.m}, n={self.n}')
        elif self.order < 1:
            raise DimensionError(f'{self.kind} needs a positive order, got {self.order}')

    @property
    def order(self):
        """Size of a square generator: n when given, m otherwise."""
        order = self.n if self.n is not None else self.m
        if order is None:
            raise DimensionError(f'{self.kind} needs n (or m)')
        return order

    def generate(self):
        if self.kind == 'matrix1':
            return matrix1(self.m, self.n, self.s, self.seed)
        if self.kind == 'matrix2':
            return matrix2(self.order, self.s, self.seed)
        if self.kind == 'hilbert':
            return hilbert(self.order)
        return ones_rank_one(self.order)


@dataclass(frozen=True)
class ScaledProblem:
    blocks: SaddleBlocks
    t: float
    z_star: np.ndarray
    f: np.ndarray
    provenance: Tuple[GeneratorSpec, ...] = field(default=(), repr=False)

    @property
    def matrix(self):
        return assemble(self.blocks)


def logspace_diag(s, n):
    """diag of n points from 1 down to 10^-s, logarithmically spaced."""
    if n < 1:
        raise DimensionError(f'n must be positive, got {n}')
    if s < 0:
        raise ValueError(f's must be nonnegative, got {s}')
    if n == 1:
        return np.array([[10.0 ** -s]])
    return np.diag(np.logspace(0.0, -s, n))


def random_orthogonal(n, seed):
    g = _rng(seed).standard_normal((n, n))
    return thin_householder_qr(g).q


def matrix1(m, n, s, seed):
    """m x n matrix P D Q^T with P left orthogonal, Q orthogonal and
    D = logspace_diag(s, n), so kappa is about 10^s."""
    if not m >= n >= 1:
        raise DimensionError(f'matrix1 needs m >= n >= 1, got m={m}, n={n}')
    p = random_orthogonal(m, derive_seed(seed, 1))[:, :n]
    q = random_orthogonal(n, derive_seed(seed, 2))
    d = np.diag(logspace_diag(s, n))
    return matmul(p * d[None, :], transpose(q))


def matrix2(n, s, seed):
    """Symmetric positive definite P D P^T with eigenvalues logspace_diag(s, n)."""
    p = random_orthogonal(n, seed)
    d = np.diag(logspace_diag(s, n))
    x = matmul(p * d[None, :], transpose(p))
    return 0.5 * (x + transpose(x))


def hilbert(m):
    if m < 1:
        raise DimensionError(f'Hilbert order must be positive, got {m}')
    i = np.arange(1, m + 1, dtype=np.float64)
    return 1.0 / (i[:, None] + i[None, :] - 1.0)


def ones_rank_one(n):
    if n < 1:
        raise DimensionError(f'order must be positive, got {n}')
    return np.ones((n, n))


def scale_problem(a1, b1, c1, t, provenance=()):
    t = float(t)
    if t == 0.0:
        raise ValueError('scaling parameter t must be nonzero')
    blocks = SaddleBlocks(as_matrix(a1, 'A1') / t, as_matrix(b1, 'B1') * t, as_matrix(c1, 'C1') * t)
    z_star = np.concatenate([np.full(blocks.m, t), np.full(blocks.n, 1.0 / t)])
    f = matvec(assemble(blocks), z_star)
    return ScaledProblem(blocks, t, z_star, f, tuple(provenance))


def example_specs(example, m, n, s_a, s_b, s_c, seed):
    """GeneratorSpecs of the base blocks (A1, B1, C1) of a bench example.

    Example 1 uses Hilbert(m) for A1 and e e^T for C1; every other recipe uses
    matrix2 for both. Each random block gets its own sub-seed of ``seed``
    keyed by the example and the block role.
    """
    if example not in EXAMPLES:
        raise ValueError(f'unknown example {example!r}, expected one of {tuple(EXAMPLES)}')
    index = list(EXAMPLES).index(example)

    def sub(role):
        return derive_seed(seed, index, SEED_KEYS[role])

    spec_b = GeneratorSpec('matrix1', m, n, s_b, sub('B'))
    if example == '1':
        return (
            GeneratorSpec('hilbert', m=m),
            spec_b,
            GeneratorSpec('ones_rank_one', n=n),
        )
    return (
        GeneratorSpec('matrix2', n=m, s=s_a, seed=sub('A')),
        spec_b,
        GeneratorSpec('matrix2', n=n, s=s_c, seed=sub('C')),
    )


def base_blocks(specs):
    a1, b1, c1 = (spec.generate() for spec in specs)
    logger.debug('base blocks A1 %s, B1 %s, C1 %s', shape_str(a1), shape_str(b1), shape_str(c1))
    return a1, b1, c1


def build_example(example, m, n, s_a, s_b, s_c, t, seed):
    specs = example_specs(example, m, n, s_a, s_b, s_c, seed)
    a1, b1, c1 = base_blocks(specs)
    return scale_problem(a1, b1, c1, t, specs)
