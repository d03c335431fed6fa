"""
Command-line arguments - sub-commands, solver flags, option resolution
"""

import argparse
import os

from modules.certify import MODES
from modules.constants import (
    DEFAULT_MARGIN,
    DEFAULT_MAX_ITER,
    DEFAULT_SEED,
    DEFAULT_STARTS,
    DEFAULT_TOL,
    EXIT_INPUT_ERROR,
    SEED_ENV_VAR,
)
from modules.errors import TensorInputError
from modules.spectra import Z_SHIFT_POLICIES, SolverOptions


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code instead of argparse's 2"""

    def error(self, message):
        self.print_usage()
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _common_flags():
    common = ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for INFO, -vv for DEBUG logging on stderr")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"master seed (overridden by ${SEED_ENV_VAR})")
    return common


def _solver_flags():
    solver = ArgumentParser(add_help=False)
    solver.add_argument("--starts", type=int, default=DEFAULT_STARTS,
                        help="random starts per eigenvalue search (basis vectors are always tried)")
    solver.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    solver.add_argument("--tol", type=float, default=DEFAULT_TOL, help="residual tolerance")
    solver.add_argument("--margin", type=float, default=DEFAULT_MARGIN,
                        help="positive definiteness needs a lower bound above this")
    solver.add_argument("--jobs", type=int, default=1, help="parallel workers for the vertex map")
    solver.add_argument("--z-shift", choices=Z_SHIFT_POLICIES, default="adaptive")
    solver.add_argument("--no-timing", action="store_true",
                        help="omit timing_ms so repeated runs print identical output")
    return solver


def build_parser():
    """
    Build the argument parser

    Returns
    -------
    parser : ArgumentParser
    """
    common, solver = _common_flags(), _solver_flags()
    parser = ArgumentParser(
        prog="itcheck",
        description="Positive definiteness and Hurwitz stability of interval tensors",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    check_pd = sub.add_parser("check-pd", parents=[common, solver],
                              help="decide positive (semi-)definiteness of a tensor or interval tensor")
    check_pd.add_argument("input", help="TensorDocument or IntervalDocument JSON file")
    check_pd.add_argument("--mode", choices=MODES, default="pd")
    check_pd.add_argument("--via-symmetrization", action="store_true",
                          help="check the symmetrized interval instead of the interval itself")

    hurwitz = sub.add_parser("check-hurwitz", parents=[common, solver],
                             help="decide Hurwitz stability of an interval tensor")
    hurwitz.add_argument("input", help="IntervalDocument JSON file (point tensors are zero-radius intervals)")
    hurwitz.add_argument("--assume-symmetric", action="store_true",
                         help="require a symmetric interval and use the exact reduction")

    gen = sub.add_parser("gen", parents=[common], help="print a random interval tensor document")
    gen.add_argument("--order", type=int, required=True)
    gen.add_argument("--dim", type=int, required=True)
    gen.add_argument("--density", type=float, default=1.0)
    gen.add_argument("--radius-scale", type=float, default=0.1)
    gen.add_argument("--symmetric", action="store_true")
    gen.add_argument("--format", choices=("coo", "dense"), default="coo")

    corpus = sub.add_parser("corpus", parents=[common], help="print a bundled 4th-order 3-dimensional instance")
    corpus.add_argument("name", nargs="?", help="instance name, e.g. theorem-5.1")
    corpus.add_argument("--list", action="store_true", help="list the instance names")

    bench = sub.add_parser("bench", parents=[common, solver],
                           help="compare the vertex reduction with extreme-point enumeration")
    bench.add_argument("--dims", default="2-4", help="dimension range, e.g. 2-4 or 2,3")
    bench.add_argument("--order", type=int, default=4)
    bench.add_argument("--trials", type=int, default=1)
    bench.add_argument("--mode", choices=MODES, default="psd")

    return parser


def resolve_seed(args, environ=None):
    """${ITC_SEED} overrides --seed when set"""
    environ = os.environ if environ is None else environ
    raw = environ.get(SEED_ENV_VAR)
    if raw is None or raw == "":
        return args.seed
    try:
        return int(raw)
    except ValueError as e:
        raise TensorInputError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from e


def resolve_options(args, environ=None):
    """
    Solver options from the parsed flags

    Returns
    -------
    options : SolverOptions
    """
    return SolverOptions(
        starts=args.starts,
        max_iter=args.max_iter,
        tol_residual=args.tol,
        margin=args.margin,
        seed=resolve_seed(args, environ),
        jobs=args.jobs,
        z_shift=args.z_shift,
    )


def parse_dims(text):
    """'2-4' -> [2, 3, 4], '2,3' -> [2, 3]"""
    try:
        if "-" in text:
            first, last = (int(part) for part in text.split("-", 1))
            dims = list(range(first, last + 1))
        else:
            dims = [int(part) for part in text.split(",")]
    except ValueError as e:
        raise TensorInputError(f"bad dimension range {text!r}") from e
    if not dims or min(dims) < 1:
        raise TensorInputError(f"dimensions must be >= 1, got {text!r}")
    return dims
