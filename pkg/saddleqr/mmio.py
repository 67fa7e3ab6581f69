"""
Matrix Market array files (dense, real, general).

    %%MatrixMarket matrix array real general
    % optional comment lines
    rows cols
    a11
    a21
    ...

Entries are stored column by column, one per line, with 17 significant digits
so that a write/read cycle reproduces every float64 bit.
"""
import logging
import math
from pathlib import Path

import numpy as np

from .errors import MatrixMarketError
from .linalg import as_matrix
from .linalg import as_vector
from .vars import FLOAT_FORMAT
from .vars import MM_HEADER

logger = logging.getLogger(__name__)


def _parse_int(token, path, lineno, what):
    try:
        value = int(token)
    except ValueError:
        raise MatrixMarketError(path, lineno, f'{what} is not an integer: {token!r}') from None
    if value < 1:
        raise MatrixMarketError(path, lineno, f'{what} must be positive, got {value}')
    return value


def read_matrix(path):
    path = Path(path)
    with path.open('rt', encoding='utf-8') as fp:
        lines = fp.read().splitlines()
    if not lines:
        raise MatrixMarketError(path, 1, 'empty file')
    if lines[0].lower().split() != MM_HEADER.lower().split():
        raise MatrixMarketError(path, 1, f'expected header {MM_HEADER!r}')
    body = (
        (lineno, line.strip())
        for lineno, line in enumerate(lines[1:], start=2)
        if line.strip() and not line.lstrip().startswith('%')
    )
    try:
        lineno, size = next(body)
    except StopIteration:
        raise MatrixMarketError(path, len(lines), 'missing size line') from None
    tokens = size.split()
    if len(tokens) != 2:
        raise MatrixMarketError(path, lineno, f'size line must be "rows cols", got {size!r}')
    rows = _parse_int(tokens[0], path, lineno, 'rows')
    cols = _parse_int(tokens[1], path, lineno, 'cols')
    values = np.empty(rows * cols)
    k = 0
    for lineno, line in body:
        if k == values.size:
            raise MatrixMarketError(path, lineno, f'more than {values.size} entries')
        try:
            v = float(line)
        except ValueError:
            raise MatrixMarketError(path, lineno, f'not a number: {line!r}') from None
        if not math.isfinite(v):
            raise MatrixMarketError(path, lineno, f'non-finite entry {line!r}')
        values[k] = v
        k += 1
    if k != values.size:
        raise MatrixMarketError(path, len(lines), f'expected {values.size} entries, found {k}')
    logger.debug('read %dx%d matrix from %s', rows, cols, path)
    return np.ascontiguousarray(values.reshape((cols, rows)).T)


def read_vector(path):
    """Read a rows x 1 array file as a 1-D vector."""
    a = read_matrix(path)
    if a.shape[1] != 1:
        raise MatrixMarketError(Path(path), 2, f'expected a single column, got {a.shape[0]}x{a.shape[1]}')
    return as_vector(a)


def write_matrix(path, a):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    a = as_matrix(a)
    rows, cols = a.shape
    path = Path(path)
    with path.open('wt', encoding='utf-8') as fp:
        fp.write(MM_HEADER + '\n')
        fp.write(f'{rows} {cols}\n')
        for v in a.T.ravel():
            fp.write(FLOAT_FORMAT.format(v) + '\n')
    logger.debug('wrote %dx%d matrix to %s', rows, cols, path)
