"""
Solve symmetric saddle point systems by block Gram-Schmidt QR and measure how
stable the solve was.

    gen    write a seeded test matrix as a Matrix Market file
    solve  solve [[A, B], [B^T, -C]] z = f read from Matrix Market files
    bench  run the t-scaled stability experiments and write a table
"""
import argparse
import csv
import logging
import sys

from .bench import FORMATS
from .bench import BenchConfig
from .bench import format_cell
from .bench import run_bench
from .errors import DimensionError
from .errors import MatrixMarketError
from .errors import SaddleQRError
from .errors import SingularMatrixError
from .linalg import condition_number
from .mmio import read_matrix
from .mmio import read_vector
from .mmio import write_matrix
from .saddle import SaddleBlocks
from .saddle import assemble
from .saddle import solve
from .stability import StabilityReport
from .stability import metrics
from .testgen import GeneratorSpec
from .vars import DEFAULT_TOL
from .vars import EXAMPLES
from .vars import FLOAT_FORMAT
from .vars import GENERATOR_KINDS
from .vars import METHODS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def setup_logging(verbose=False, quiet=False):
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s',
    )


def cmd_gen(args):
    try:
        spec = GeneratorSpec(args.kind, args.m, args.n, args.s, args.seed)
        x = spec.generate()
    except ValueError as e:
        logger.error('gen: %s', e)
        return EXIT_CONFIG
    out = args.out or f'{args.kind}.mtx'
    try:
        write_matrix(out, x)
    except OSError as e:
        logger.error('cannot write %s: %s', out, e)
        return EXIT_CONFIG
    try:
        kappa = condition_number(x, args.tol).value
    except SingularMatrixError:
        kappa = float('inf')
    print(f'{out}: {x.shape[0]}x{x.shape[1]} kappa {FLOAT_FORMAT.format(kappa)}')
    return EXIT_OK


def _write_report(path, report):
    fp = sys.stdout if path in (None, '-') else open(path, 'wt', encoding='utf-8', newline='')
    try:
        writer = csv.writer(fp, lineterminator='\n')
        writer.writerow(StabilityReport.columns())
        writer.writerow([format_cell(v) for v in report.as_row()])
    finally:
        if fp is not sys.stdout:
            fp.close()


def cmd_solve(args):
    try:
        blocks = SaddleBlocks(read_matrix(args.A), read_matrix(args.B), read_matrix(args.C))
        f = read_vector(args.f)
        z_star = read_vector(args.z_star) if args.z_star else None
    except FileNotFoundError as e:
        logger.error('no such file: %s', e.filename)
        return EXIT_CONFIG
    except (OSError, MatrixMarketError, DimensionError) as e:
        logger.error('%s', e)
        return EXIT_CONFIG
    if f.shape[0] != blocks.l or (z_star is not None and z_star.shape[0] != blocks.l):
        logger.error('right-hand side or z* length does not match M (%dx%d)', blocks.l, blocks.l)
        return EXIT_CONFIG
    try:
        sol = solve(blocks, f, args.method)
    except SaddleQRError as e:
        logger.error('solve failed (%s): %s', e.code, e)
        return EXIT_FAILED
    try:
        write_matrix(args.out, sol.z)
    except OSError as e:
        logger.error('cannot write %s: %s', args.out, e)
        return EXIT_CONFIG
    if z_star is not None:
        try:
            report = metrics(assemble(blocks), sol.q, sol.r, f, sol.z, z_star, args.tol)
        except SaddleQRError as e:
            logger.error('metrics failed (%s): %s', e.code, e)
            return EXIT_FAILED
        _write_report(args.report, report)
    return EXIT_OK


def cmd_bench(args):
    try:
        cfg = BenchConfig.for_example(
            args.example,
            m=args.m,
            n=args.n,
            s_a=args.sA,
            s_b=args.sB,
            s_c=args.sC,
            t_list=args.t,
            seed=args.seed,
            methods=args.methods,
            format=args.format,
            tol=args.tol,
        )
    except ValueError as e:
        logger.error('bench: %s', e)
        return EXIT_CONFIG
    if args.processes < 0:
        logger.error('bench: --processes must be >= 0')
        return EXIT_CONFIG
    if args.out not in (None, '-'):
        try:
            open(args.out, 'wt').close()
        except OSError as e:
            logger.error('cannot write %s: %s', args.out, e)
            return EXIT_CONFIG
    return run_bench(cfg, args.out, args.processes, not args.no_progress)


def make_parser():
    def formatter(prog):
        return argparse.ArgumentDefaultsHelpFormatter(prog, max_help_position=80)

    parser = argparse.ArgumentParser(
        prog='saddleqr',
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        '-v', '--verbose',
        action='store_true',
        help='Log debug messages.'
    )
    parser.add_argument(
        '-q', '--quiet',
        action='store_true',
        help='Only log errors.'
    )
    parser.add_argument(
        '--tol',
        type=float,
        default=DEFAULT_TOL,
        help='Relative tolerance of the norm estimates.'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', help='Write a test matrix.', formatter_class=formatter)
    gen.add_argument(
        '--kind',
        choices=GENERATOR_KINDS,
        required=True,
        help='Generator family.'
    )
    gen.add_argument('--m', type=int, default=None, help='Rows (order of square kinds if --n is absent).')
    gen.add_argument('--n', type=int, default=None, help='Columns, or order of square kinds.')
    gen.add_argument('--s', type=float, default=0.0, help='Singular values span 1 to 10^-s.')
    gen.add_argument('--seed', type=int, default=0, help='Unsigned 64-bit seed.')
    gen.add_argument('--out', type=str, default=None, help='Output file. Defaults to KIND.mtx.')
    gen.set_defaults(run=cmd_gen)

    slv = sub.add_parser('solve', help='Solve a saddle point system.', formatter_class=formatter)
    slv.add_argument('--A', required=True, metavar='PATH', help='m x m block A.')
    slv.add_argument('--B', required=True, metavar='PATH', help='m x n block B.')
    slv.add_argument('--C', required=True, metavar='PATH', help='n x n block C.')
    slv.add_argument('--f', required=True, metavar='PATH', help='Right-hand side, (m+n) x 1.')
    slv.add_argument('--method', choices=METHODS, default='bcgs2', help='QR path.')
    slv.add_argument('--out', default='z.mtx', metavar='PATH', help='Solution file.')
    slv.add_argument(
        '--z-star',
        default=None,
        metavar='PATH',
        help='Known solution; enables the stability report.'
    )
    slv.add_argument(
        '--report',
        default=None,
        metavar='PATH',
        help='Stability report CSV. Defaults to stdout.'
    )
    slv.set_defaults(run=cmd_solve)

    bench = sub.add_parser('bench', help='Run the stability experiments.', formatter_class=formatter)
    bench.add_argument('--example', choices=tuple(EXAMPLES), default='1', help='Problem recipe.')
    bench.add_argument('--m', type=int, default=None, help='Rows of B. Defaults per example.')
    bench.add_argument('--n', type=int, default=None, help='Columns of B. Defaults per example.')
    bench.add_argument('--sA', type=float, default=None, help='kappa(A) = 10^sA (ignored by example 1).')
    bench.add_argument('--sB', type=float, default=None, help='kappa(B) = 10^sB.')
    bench.add_argument('--sC', type=float, default=None, help='kappa(C) = 10^sC (ignored by example 1).')
    bench.add_argument('--t', type=float, nargs='+', default=None, help='Scaling parameters t.')
    bench.add_argument('--seed', type=int, default=0, help='Unsigned 64-bit seed.')
    bench.add_argument('--methods', choices=METHODS, nargs='+', default=None, help='Methods to compare.')
    bench.add_argument('--format', choices=FORMATS, default='csv', help='Table format.')
    bench.add_argument('--out', default=None, metavar='PATH', help='Output file. Defaults to stdout.')
    bench.add_argument(
        '-p', '--processes',
        type=int,
        default=0,
        help='Number of t values run in parallel; 0 runs in-process.'
    )
    bench.add_argument('--no-progress', action='store_true', help='Hide progress bars.')
    bench.set_defaults(run=cmd_bench)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    try:
        return args.run(args)
    except KeyboardInterrupt:
        return EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
