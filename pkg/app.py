"""
区間テンソル判定ツール - メインアプリケーション
区間テンソルの正定値性・半正定値性と Hurwitz 安定性の判定
"""

import json
import logging
import sys
import time

from modules.bench import run_bench
from modules.certify import (
    check_hurwitz_general,
    check_hurwitz_symmetric,
    check_interval_pd,
    check_interval_pd_via_symmetrization,
    check_point_pd,
)
from modules.constants import EXIT_HOLDS, EXIT_INPUT_ERROR, EXIT_REFUTED
from modules.data_loader import CorpusDatabase, dumps, emit_interval_document, load_document
from modules.errors import PreconditionError, TensorError
from modules.generator import random_interval
from modules.interval import IntervalTensor, is_symmetric_interval, point_interval
from ui.arguments import build_parser, parse_dims, resolve_options, resolve_seed
from ui.report import exit_code, render_json, render_table, verdict_payload

logger = logging.getLogger(__name__)


def configure_logging(verbosity):
    """WARNING by default, -v for INFO, -vv for DEBUG, always on stderr"""
    level = max(logging.DEBUG, logging.WARNING - 10 * verbosity)
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _emit_verdict(verdict, start, args):
    verdict.timing_ms = 1000.0 * (time.perf_counter() - start)
    print(render_json(verdict_payload(verdict, include_timing=not args.no_timing)))
    return exit_code(verdict)


def cmd_check_pd(args):
    obj = load_document(args.input)
    options = resolve_options(args)
    start = time.perf_counter()
    if isinstance(obj, IntervalTensor):
        if args.via_symmetrization:
            verdict = check_interval_pd_via_symmetrization(obj, args.mode, options)
        else:
            verdict = check_interval_pd(obj, args.mode, options)
    else:
        verdict = check_point_pd(obj, args.mode, options)
    return _emit_verdict(verdict, start, args)


def cmd_check_hurwitz(args):
    obj = load_document(args.input)
    interval = obj if isinstance(obj, IntervalTensor) else point_interval(obj)
    options = resolve_options(args)
    start = time.perf_counter()
    symmetric = is_symmetric_interval(interval)
    if args.assume_symmetric and not symmetric:
        raise PreconditionError("--assume-symmetric given but the interval failed the symmetry scan")
    if symmetric:
        verdict = check_hurwitz_symmetric(interval, options)
    else:
        verdict = check_hurwitz_general(interval, options)
    return _emit_verdict(verdict, start, args)


def cmd_gen(args):
    interval = random_interval(
        args.order, args.dim,
        seed=resolve_seed(args),
        density=args.density,
        radius_scale=args.radius_scale,
        symmetric=args.symmetric,
    )
    print(dumps(emit_interval_document(interval, fmt=args.format)))
    return EXIT_HOLDS


def cmd_corpus(args):
    db = CorpusDatabase()
    if args.list or args.name is None:
        print(render_table(db.summary()))
        return EXIT_HOLDS
    print(dumps(db.get_document(args.name)))
    return EXIT_HOLDS


def cmd_bench(args):
    dims = parse_dims(args.dims)
    table = run_bench(dims, order=args.order, trials=args.trials, seed=resolve_seed(args),
                      mode=args.mode, options=resolve_options(args))
    if args.no_timing:
        table = table.drop(columns=["vertex_ms", "oracle_ms"])
    print(render_table(table))
    # agree is None where the oracle was skipped
    disagree = bool(table["agree"].eq(False).any())
    return EXIT_REFUTED if disagree else EXIT_HOLDS


COMMANDS = {
    "check-pd": cmd_check_pd,
    "check-hurwitz": cmd_check_hurwitz,
    "gen": cmd_gen,
    "corpus": cmd_corpus,
    "bench": cmd_bench,
}


def main(argv=None):
    """
    Run one sub-command

    Parameters
    ----------
    argv : list of str, optional
        Defaults to sys.argv[1:]

    Returns
    -------
    code : int
        0 holds, 1 refuted, 2 unknown, 64 input error
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except (TensorError, json.JSONDecodeError, OSError) as e:
        logger.debug("input error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
