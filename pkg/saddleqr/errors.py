"""
Exceptions raised by saddleqr. Everything derives from numpy's LinAlgError so
code that already guards numpy.linalg calls catches ours too.
"""
import numpy as np


class SaddleQRError(np.linalg.LinAlgError):
    code = 'error'


class DimensionError(SaddleQRError, ValueError):
    code = 'dimension'


class NonFiniteError(SaddleQRError, ValueError):
    code = 'nonfinite'


class SingularMatrixError(SaddleQRError):
    code = 'singular'


class RankDeficientError(SingularMatrixError):
    code = 'rank'

    def __init__(self, column, pivot_norm=0.0, step=None):
        self.column = column
        self.pivot_norm = pivot_norm
        self.step = step
        msg = f'rank-deficient at column {column}'
        if step:
            msg = f'{step}: {msg}'
        super().__init__(msg)

    def in_step(self, step):
        return RankDeficientError(self.column, self.pivot_norm, step)

    def __reduce__(self):
        return type(self), (self.column, self.pivot_norm, self.step)


class ZeroPivotError(SingularMatrixError):
    code = 'zero-pivot'

    def __init__(self, row):
        self.row = row
        super().__init__(f'zero diagonal entry at row {row}')

    def __reduce__(self):
        return type(self), (self.row,)


class FactorizationError(SaddleQRError):
    code = 'factorization'


class HypothesisError(SaddleQRError, ValueError):
    code = 'hypothesis'


class DegenerateSolutionError(SaddleQRError, ValueError):
    code = 'degenerate'

    def __init__(self, msg='degenerate solution for metric normalization'):
        super().__init__(msg)


class MatrixMarketError(SaddleQRError, ValueError):
    code = 'parse'

    def __init__(self, path, line, msg):
        self.path = path
        self.line = line
        self.msg = msg
        super().__init__(f'{path}:{line}: {msg}')

    def __reduce__(self):
        return type(self), (self.path, self.line, self.msg)


def error_code(err):
    return getattr(err, 'code', 'error')
