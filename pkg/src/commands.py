import argparse
import sys
import traceback

from src.bench import BenchRunner
from src.config import DEFAULT_CONFIG_FILE
from src.curve_core import OffCurveError, scalar_mul_complement
from src.curve_file import CurveFileError, load_curve_file
from src.fp_arith import OpCounter, parse_hex
from src.formatting import format_counts, format_digits, format_point, format_x, parse_point
from src.ladders import ALGORITHMS, build_doubles_table, kernel_compute, new_trace
from src.montgomery_baseline import mont_ladder
from src.recode import (
    base16_repr,
    estimate_inversions,
    hamming_density,
    mixed_naf_knapsack,
    to_binary,
    to_naf,
)
from src.verify import Verifier, format_failure

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_OFF_CURVE = 3

MONTGOMERY_ALGORITHM = "montgomery-xz"
COMPLEMENT_ALGORITHM = "complement"
MUL_ALGORITHMS = sorted(ALGORITHMS) + [COMPLEMENT_ALGORITHM, MONTGOMERY_ALGORITHM]

RECODERS = {
    "naf": to_naf,
    "base16": base16_repr,
    "mixed": mixed_naf_knapsack,
    "binary": to_binary,
}


def _hex_arg(text):
    try:
        return parse_hex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _point_arg(text):
    try:
        return parse_point(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecbench", description="Single-inversion elliptic curve scalar multiplication benchmarks"
    )
    parser.add_argument("--config", default=DEFAULT_CONFIG_FILE, help="config file path")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    mul = sub.add_parser("mul", help="compute [k]P, or P + [k]Q with --q")
    mul.add_argument("--curve", help="curve file")
    mul.add_argument("--k", type=_hex_arg, required=True, help="scalar in hex")
    mul.add_argument("--algo", choices=MUL_ALGORITHMS, help="ladder")
    mul.add_argument("--point", type=_point_arg, help="P as x,y in hex (default: curve base point)")
    mul.add_argument("--q", type=_point_arg, help="Q as x,y in hex; prints P + [k]Q")
    mul.add_argument("--kernel-table", action="store_true", help="precompute the doubles of Q")
    mul.add_argument("--trace", action="store_true", help="print the ladder trace")

    recode = sub.add_parser("recode", help="show a scalar representation")
    recode.add_argument("--k", type=_hex_arg, required=True, help="scalar in hex")
    recode.add_argument("--mode", choices=sorted(RECODERS), default="mixed")

    verify = sub.add_parser("verify", help="check every routine against the reference multiply")
    verify.add_argument("--curve", help="curve file")
    verify.add_argument("--exhaustive-bits", type=int, help="check every k < 2^n")
    verify.add_argument("--random-trials", type=int, help="random scalars and points")
    verify.add_argument("--seed", type=int, help="generator seed (default: ECC_SEED or config)")
    verify.add_argument("--workers", type=int)

    bench = sub.add_parser("bench", help="write a cost report as CSV")
    bench.add_argument("--curve", help="curve file")
    bench.add_argument("--trials", type=int)
    bench.add_argument("--out", help="CSV path")
    bench.add_argument("--seed", type=int, help="generator seed (default: ECC_SEED or config)")
    bench.add_argument("--workers", type=int)
    bench.add_argument("--fold-sqr", action="store_true", help="count squarings as multiplications")
    return parser


def _pick(value, config, section, key, as_int=False):
    if value is not None:
        return value
    return config.int_setting(section, key) if as_int else config.setting(section, key)


def _load_curve(args, config):
    return load_curve_file(_pick(args.curve, config, "general", "curve"))


def cmd_mul(args, config, logger, out=None) -> int:
    curve = _load_curve(args, config)
    algorithm = _pick(args.algo, config, "general", "algorithm")
    if algorithm not in MUL_ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    ctr = OpCounter()

    if algorithm == MONTGOMERY_ALGORITHM:
        if not curve.is_montgomery:
            raise CurveFileError(f"{MONTGOMERY_ALGORITHM} needs a Montgomery curve, {curve.name} is not one")
        if args.q is not None:
            raise ValueError(f"{MONTGOMERY_ALGORITHM} has no kernel form")
        px, py = args.point if args.point is not None else (curve.gx, curve.gy)
        if px is None:
            raise CurveFileError(f"curve {curve.name} has no base point, pass --point")
        curve.point(px, py)
        C = curve.montgomery
        x = mont_ladder(args.k, C.modulus.element(px), C, ctr)
        print(f"x = {format_x(x)}", file=out)
        print(format_counts(ctr), file=out)
        return EXIT_OK

    E = curve.params
    P = curve.point(*args.point) if args.point is not None else curve.base_point()
    trace = new_trace(algorithm) if args.trace else None
    if args.q is not None:
        Q = curve.point(*args.q)
        table = build_doubles_table(Q, E, max(args.k.bit_length(), 1)) if args.kernel_table else None
        result = kernel_compute(args.k, P, Q, E, ctr, algorithm=algorithm, table=table, trace=trace)
    elif args.kernel_table:
        raise ValueError("--kernel-table needs --q")
    elif algorithm == COMPLEMENT_ALGORITHM:
        if E.order is None:
            raise CurveFileError(f"{COMPLEMENT_ALGORITHM} needs the group order, {curve.name} gives none")
        result = scalar_mul_complement(args.k % E.order, P, E, ctr)
    else:
        result = ALGORITHMS[algorithm](args.k, P, E, ctr, trace)
    logger.debug(f"mul {algorithm} k={args.k:x} on {curve.name}")
    print(f"point = {format_point(result)}", file=out)
    print(format_counts(ctr), file=out)
    if trace is not None:
        for line in trace.lines():
            print(line, file=out)
    return EXIT_OK


def cmd_recode(args, config, logger, out=None) -> int:
    r = RECODERS[args.mode](args.k)
    digits = r.display_digits() or [0]
    print(format_digits(digits), file=out)
    print(f"bases: {format_digits(r.display_bases())}", file=out)
    print(f"density: {hamming_density(r):.3f}", file=out)
    print(f"inversions: {estimate_inversions(r)}", file=out)
    return EXIT_OK


def cmd_verify(args, config, logger, out=None) -> int:
    curve = _load_curve(args, config)
    verifier = Verifier(
        curve,
        logger,
        exhaustive_bits=_pick(args.exhaustive_bits, config, "verify", "exhaustive_bits", as_int=True),
        random_trials=_pick(args.random_trials, config, "verify", "random_trials", as_int=True),
        seed=config.resolve_seed(args.seed),
        workers=_pick(args.workers, config, "general", "workers", as_int=True),
    )
    result = verifier.run()
    for failure in result.failures:
        print(format_failure(failure), file=out)
    print(f"checks={result.checks} degenerate={result.degenerate} failures={len(result.failures)}", file=out)
    return EXIT_OK if result.ok else EXIT_FAILURE


def cmd_bench(args, config, logger, out=None) -> int:
    curve = _load_curve(args, config)
    runner = BenchRunner(
        curve,
        logger,
        trials=_pick(args.trials, config, "bench", "trials", as_int=True),
        seed=config.resolve_seed(args.seed),
        workers=_pick(args.workers, config, "general", "workers", as_int=True),
        fold_squarings=args.fold_sqr,
    )
    report = runner.run()
    path = _pick(args.out, config, "bench", "out")
    report.write_csv(path)
    for line in report.summary_lines():
        print(line, file=out)
    logger.info(f"Wrote {len(report.rows)} rows to {path}")
    return EXIT_OK


COMMANDS = {
    "mul": cmd_mul,
    "recode": cmd_recode,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def run(args, config, logger, out=None) -> int:
    """Dispatch a parsed command line; errors become one diagnostic line and an exit code."""
    try:
        return COMMANDS[args.command](args, config, logger, out)
    except OffCurveError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_OFF_CURVE
    except (CurveFileError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {e}")
        logger.error(traceback.format_exc())
        return EXIT_FAILURE
