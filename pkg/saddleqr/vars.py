import numpy as np

EPS = float(np.finfo(np.float64).eps)

DEFAULT_TOL = 1e-8
JACOBI_MAX_DIM = 64

METHODS = ('bcgs', 'bcgs2', 'householder')
METRICS = ('orth', 'dec', 'res', 'stab')
METHOD_LABELS = {
    'bcgs': 'BCGS',
    'bcgs2': 'BCGS2',
    'householder': 'HOUSE',
}

GENERATOR_KINDS = ('matrix1', 'matrix2', 'hilbert', 'ones_rank_one')

T_LIST = (0.01, 0.1, 1.0, 10.0, 100.0)
KAPPA_LIMITED = 1e14
BACKWARD_STABLE = 1e4 * EPS

EXAMPLES = {
    '1': {'m': 12, 'n': 6, 'sA': 0.0, 'sB': 10.0, 'sC': 0.0},
    '2': {'m': 1000, 'n': 500, 'sA': 10.0, 'sB': 10.0, 'sC': 10.0},
    '3': {'m': 3000, 'n': 100, 'sA': 10.0, 'sB': 10.0, 'sC': 10.0},
    'custom': {'m': 20, 'n': 10, 'sA': 2.0, 'sB': 2.0, 'sC': 2.0},
}

# sub-seed keys of the three base blocks of a bench problem
SEED_KEYS = {
    'A': 1,
    'B': 2,
    'C': 3,
}

MM_HEADER = '%%MatrixMarket matrix array real general'
FLOAT_FORMAT = '{:.17g}'


def default_max_iter(dim):
    return 5 * dim + 100
