"""
Stability experiments on the t-scaled saddle families.

For every t the base blocks are scaled, f = M z* is formed, M is factored by
each requested method, the system is solved from those factors, and the
orth / dec / res / stab metrics are recorded. One row per t, written as CSV
(one column per method and metric) or as a Markdown table with metrics as
rows and t as columns.
"""
import csv
import logging
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from pathlib import Path
from typing import Dict
from typing import Tuple
from typing import Union

from .errors import SaddleQRError
from .errors import error_code
from .linalg import condition_number
from .saddle import factorize
from .saddle import solve_factored
from .stability import metrics
from .testgen import base_blocks
from .testgen import check_seed
from .testgen import example_specs
from .testgen import scale_problem
from .tools import WorkerBase
from .vars import DEFAULT_TOL
from .vars import EXAMPLES
from .vars import FLOAT_FORMAT
from .vars import KAPPA_LIMITED
from .vars import METHOD_LABELS
from .vars import METHODS
from .vars import METRICS
from .vars import T_LIST

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'md')
DEFAULT_METHODS = ('bcgs', 'bcgs2')

Cell = Union[float, str]


@dataclass(frozen=True)
class BenchConfig:
    example: str = '1'
    m: int = 12
    n: int = 6
    s_a: float = 0.0
    s_b: float = 10.0
    s_c: float = 0.0
    t_list: Tuple[float, ...] = T_LIST
    seed: int = 0
    methods: Tuple[str, ...] = DEFAULT_METHODS
    format: str = 'csv'
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.example not in EXAMPLES:
            raise ValueError(f'unknown example {self.example!r}, expected one of {tuple(EXAMPLES)}')
        if not self.m >= self.n >= 1:
            raise ValueError(f'need m >= n >= 1, got m={self.m}, n={self.n}')
        if min(self.s_a, self.s_b, self.s_c) < 0:
            raise ValueError('decade exponents must be nonnegative')
        if not self.t_list:
            raise ValueError('t_list is empty')
        if any(t == 0 or not math.isfinite(t) for t in self.t_list):
            raise ValueError(f't values must be finite and nonzero, got {self.t_list}')
        unknown = set(self.methods) - set(METHODS)
        if unknown or not self.methods:
            raise ValueError(f'methods must be a nonempty subset of {METHODS}, got {self.methods}')
        if self.format not in FORMATS:
            raise ValueError(f'format must be one of {FORMATS}, got {self.format!r}')
        if not self.tol > 0:
            raise ValueError('tol must be positive')
        check_seed(self.seed)
        object.__setattr__(self, 't_list', tuple(float(t) for t in self.t_list))
        object.__setattr__(self, 'methods', tuple(m for m in METHODS if m in self.methods))

    @classmethod
    def for_example(cls, example, **overrides):
        """Config of a named example; ``None`` overrides keep the example default."""
        if example not in EXAMPLES:
            raise ValueError(f'unknown example {example!r}, expected one of {tuple(EXAMPLES)}')
        d = EXAMPLES[example]
        cfg = cls(example, d['m'], d['n'], d['sA'], d['sB'], d['sC'])
        return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})

    @property
    def columns(self):
        return ('t', 'kappa_M') + tuple(
            f'{metric}_{method}' for method in self.methods for metric in METRICS
        )


@dataclass(frozen=True)
class BenchRow:
    t: float
    kappa_m: Cell
    cells: Dict[str, Cell] = field(default_factory=dict)

    @property
    def failed(self):
        return isinstance(self.kappa_m, str) or any(isinstance(v, str) for v in self.cells.values())

    def values(self, columns):
        head = {'t': self.t, 'kappa_M': self.kappa_m}
        return [head[c] if c in head else self.cells[c] for c in columns]


def err_cell(err):
    return f'ERR:{error_code(err)}'


class BenchRunner(WorkerBase):
    def __init__(self, cfg, processes=0, progress=True):
        super().__init__(processes, progress)
        self.cfg = cfg
        self.specs = example_specs(cfg.example, cfg.m, cfg.n, cfg.s_a, cfg.s_b, cfg.s_c, cfg.seed)
        self.base = None

    def run_cell(self, t):
        cfg = self.cfg
        problem = scale_problem(*self.base, t, self.specs)
        mat = problem.matrix
        kappa_err = None
        try:
            kappa = condition_number(mat, cfg.tol).value
        except SaddleQRError as err:
            logger.warning('t = %g: condition number failed: %s', t, err)
            kappa, kappa_err = math.nan, err_cell(err)
        cells = {}
        with self.position() as position:
            for method in self.tqdm(cfg.methods, f't = {t:g}', position):
                try:
                    q, r = factorize(mat, cfg.m, method)
                    z = solve_factored(q, r, problem.f)
                    report = metrics(mat, q, r, problem.f, z, problem.z_star, cfg.tol, kappa=kappa)
                except SaddleQRError as err:
                    logger.warning('t = %g, %s: %s', t, method, err)
                    cells.update((f'{metric}_{method}', err_cell(err)) for metric in METRICS)
                    continue
                for metric in METRICS:
                    cells[f'{metric}_{method}'] = getattr(report, metric)
                if kappa_err is not None:
                    cells[f'stab_{method}'] = kappa_err
        return BenchRow(t, kappa if kappa_err is None else kappa_err, cells)

    def run(self):
        self.base = base_blocks(self.specs)
        with self.positioned():
            yield from self.map(self.run_cell, self.cfg.t_list)


def format_cell(v):
    return v if isinstance(v, str) else FLOAT_FORMAT.format(v)


def format_md(v, flag=False):
    if isinstance(v, str):
        return v
    s = f'{v:.4e}'
    return '~' + s if flag and v >= KAPPA_LIMITED else s


def write_csv(fp, cfg, rows):
    writer = csv.writer(fp, lineterminator='\n')
    writer.writerow(cfg.columns)
    for row in rows:
        writer.writerow([format_cell(v) for v in row.values(cfg.columns)])


def write_markdown(fp, cfg, rows):
    fp.write('| | ' + ' | '.join(f't = {row.t:g}' for row in rows) + ' |\n')
    fp.write('|---|' + '---:|' * len(rows) + '\n')
    fp.write('| κ(M) | ' + ' | '.join(format_md(row.kappa_m, True) for row in rows) + ' |\n')
    for metric in METRICS:
        for method in cfg.methods:
            key = f'{metric}_{method}'
            label = f'{metric}_{METHOD_LABELS[method]}'
            fp.write(f'| {label} | ' + ' | '.join(format_md(row.cells[key]) for row in rows) + ' |\n')


def read_csv(path):
    """Parse a bench CSV back into dicts of floats (ERR cells stay strings)."""
    def value(s):
        return s if s.startswith('ERR:') else float(s)
    with Path(path).open('rt', encoding='utf-8', newline='') as fp:
        return [{k: value(v) for k, v in rec.items()} for rec in csv.DictReader(fp)]


@contextmanager
def _output(out):
    if out is None or str(out) == '-':
        yield sys.stdout
    else:
        with Path(out).open('wt', encoding='utf-8', newline='') as fp:
            yield fp


def run_bench(cfg, out=None, processes=0, progress=True):
    """Run ``cfg`` and write the table to ``out`` (stdout for None or '-').

    Returns 0 when every cell was computed and 1 when some are ERR.
    """
    runner = BenchRunner(cfg, processes, progress)
    rows = list(runner.tqdm(runner.run(), 'total', 0, len(cfg.t_list)))
    with _output(out) as fp:
        if cfg.format == 'csv':
            write_csv(fp, cfg, rows)
        else:
            write_markdown(fp, cfg, rows)
    failed = sum(row.failed for row in rows)
    if failed:
        logger.warning('%d of %d rows have failed cells', failed, len(rows))
        return 1
    return 0
