import argparse
import os
import sys
from typing import List, Optional

from colorama import Fore, Style, just_fix_windows_console
from dotenv import load_dotenv

from core.entropy import brute_force_n_u, n_u
from core.errors import DescriptorError, InputParseError, UEntropyError
from utils.descriptors import parse_utilities, parse_utility
from utils.inputs import load_input
from utils.logger import Logger
from utils.report import QUANTITIES, RELATIVE_QUANTITIES, compute_rows, render
from utils.settings_manager import OUTPUT_FORMATS, SettingsManager
from utils.verifier import IdentityVerifier

just_fix_windows_console()

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

TOL_ENV = 'UENTROPY_TOL'
ORACLE_GAP_FLOOR = -1e-9


def _paint(text: str, color: str, stream) -> str:
    if hasattr(stream, 'isatty') and stream.isatty():
        return f"{color}{text}{Style.RESET_ALL}"
    return text


def _fail(message: str) -> None:
    print(_paint(f"error: {message}", Fore.RED, sys.stderr), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='uentropy',
        description='Utility-maximising entropies of discrete distributions.')
    parser.add_argument('--config', default='config/settings.json', help='settings file')

    sub = parser.add_subparsers(dest='command', required=True)

    def add_input_flags(p: argparse.ArgumentParser, with_q: bool = True):
        p.add_argument('--p', help='comma-separated probability vector')
        if with_q:
            p.add_argument('--pq', help='comma-separated reference vector q')
        p.add_argument('--input', help='JSON {"p": [...], "q": [...]} or CSV file (one vector per line)')
        p.add_argument('--renormalize', action='store_true', help='rescale vectors that do not sum to 1')

    compute = sub.add_parser('compute', help='entropy table for the given vectors')
    add_input_flags(compute)
    compute.add_argument('--u', action='append', help='utility descriptor (repeatable)')
    compute.add_argument('--q', action='append', choices=QUANTITIES, help='quantity (repeatable)')
    compute.add_argument('--format', choices=OUTPUT_FORMATS)
    compute.add_argument('--alloc', action='store_true', help='include the optimal allocation')

    verify = sub.add_parser('verify', help='randomized identity suite')
    verify.add_argument('--seed', type=int, default=42)
    verify.add_argument('--trials', type=int, default=100)
    verify.add_argument('--tol', type=float, help=f'tolerance for every identity (overrides {TOL_ENV})')
    verify.add_argument('--show-config', action='store_true', help='print the effective settings before running')

    oracle = sub.add_parser('oracle', help='dual formula against the brute-force grid')
    add_input_flags(oracle, with_q=False)
    oracle.add_argument('--u', default='log', help='utility descriptor')
    oracle.add_argument('--resolution', type=int)

    return parser


def _env_tolerance() -> Optional[float]:
    raw = os.getenv(TOL_ENV)
    if raw is None or not raw.strip():
        return None
    try:
        return float(raw)
    except ValueError:
        raise InputParseError(f"{TOL_ENV}={raw!r} is not a number", 1, 1) from None


def cmd_compute(args, parser, sm: SettingsManager, logger: Logger) -> int:
    quantities = args.q or ['h']
    inp = load_input(args.input, args.p, args.pq, renormalize=args.renormalize or sm.get_renormalize(),
                     tol=sm.get_normalization_tol())
    needs_q = [q for q in quantities if q in RELATIVE_QUANTITIES]
    if needs_q and inp.q is None:
        parser.error(f"quantities {', '.join(needs_q)} need a reference vector (--pq or q in --input)")

    utilities = parse_utilities(args.u or ['log'])
    rows = compute_rows(utilities, quantities, inp, sm.get_solve_config(),
                        auto_normalize=sm.get_arimoto_auto_normalize(), logger=logger)
    fmt = args.format or sm.get_output_format()
    print(render(rows, inp, fmt, sm.get_table_decimals(), with_alloc=args.alloc))
    return EXIT_OK


def cmd_verify(args, parser, sm: SettingsManager, logger: Logger) -> int:
    if args.trials < 1:
        parser.error("--trials must be at least 1")
    tol = args.tol if args.tol is not None else _env_tolerance()
    if args.show_config:
        print(sm.get_summary(override_tol=tol), file=sys.stderr)

    verifier = IdentityVerifier(sm, logger)
    report = verifier.run(args.seed, args.trials, tol_override=tol, silent=False)
    print(verifier.format_report_text(report))
    if report["passed"]:
        return EXIT_OK
    _fail(f"{len(report['failures'])} identity checks failed")
    return EXIT_VERIFY_FAILED


def cmd_oracle(args, parser, sm: SettingsManager, logger: Logger) -> int:
    inp = load_input(args.input, args.p, None, renormalize=args.renormalize or sm.get_renormalize(),
                     tol=sm.get_normalization_tol())
    u = parse_utility(args.u)
    resolution = args.resolution or sm.get_oracle_resolution()

    brute = brute_force_n_u(u, inp.p, resolution, max_k=sm.get_oracle_max_k())
    dual, sol, _ = n_u(u, inp.p, sm.get_solve_config())
    gap = dual.value - brute.value if brute.is_finite else float('inf')
    ceiling = 5.0 / resolution
    ok = ORACLE_GAP_FLOOR <= gap <= ceiling

    print(f"utility      {u.label}")
    print(f"resolution   {resolution}")
    print(f"n_u_dual     {dual.value:.12f}")
    print(f"brute_force  {brute}" if not brute.is_finite else f"brute_force  {brute.value:.12f}")
    print(f"gap          {gap:.3e}")
    print(f"bound        [{ORACLE_GAP_FLOOR:.0e}, {ceiling:.3e}]")
    print(f"status       {'PASS' if ok else 'FAIL'}")
    if logger is not None:
        logger.log_computation(u.label, 'oracle_gap', inp.p.k, gap, sol.lambda_)
    if not ok:
        print("[Oracle] gap outside the expected bound", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


COMMANDS = {
    'compute': cmd_compute,
    'verify': cmd_verify,
    'oracle': cmd_oracle,
}


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    sm = SettingsManager(args.config)
    logger = Logger(sm.get_log_dir(), enabled=sm.get_logging_enabled())

    try:
        return COMMANDS[args.command](args, parser, sm, logger)
    except SystemExit as e:
        return int(e.code or 0)
    except (InputParseError, DescriptorError) as e:
        _fail(str(e))
        logger.log_error(f"{args.command}: {e}")
        return EXIT_USAGE
    except UEntropyError as e:
        _fail(f"{type(e).__name__}: {e}")
        logger.log_error(f"{args.command}: {type(e).__name__}: {e}")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
