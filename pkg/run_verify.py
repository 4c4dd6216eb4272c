# Standalone runner for the identity suite:  python run_verify.py [seed] [trials]

import sys
from dotenv import load_dotenv

from utils.logger import Logger
from utils.settings_manager import SettingsManager
from utils.verifier import IdentityVerifier

load_dotenv()


def format_history(stats, seed):
    """Per-identity totals of every logged run for this seed."""
    if not stats['total_checks']:
        return f"No logged checks for seed {seed}."
    lines = [f"Logged history for seed {seed}: "
             f"{stats['failed_checks']}/{stats['total_checks']} checks failed"]
    for identity, row in sorted(stats['by_identity'].items()):
        lines.append(f"  {identity:<14} checks={row['checks']:<6} failed={row['failed']:<5} "
                     f"max_dev={row['max_deviation']:.3e}")
    return "\n".join(lines)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    seed = int(argv[0]) if len(argv) > 0 else 42
    trials = int(argv[1]) if len(argv) > 1 else 100
    config = argv[2] if len(argv) > 2 else 'config/settings.json'
    if trials < 1:
        print("trials must be at least 1", file=sys.stderr)
        return 2

    print("Initializing components for verification...", file=sys.stderr)
    sm = SettingsManager(config)
    print(sm.get_summary(), file=sys.stderr)
    logger = Logger(sm.get_log_dir(), enabled=sm.get_logging_enabled())

    try:
        verifier = IdentityVerifier(sm, logger)
    except Exception as e:
        print(f"Failed to initialize verifier. Check {config}.", file=sys.stderr)
        print(f"Error: {e}", file=sys.stderr)
        return 2

    print(f"Running {trials} trials from seed {seed}...", file=sys.stderr)
    report = verifier.run(seed, trials, silent=False)
    print(verifier.format_report_text(report))
    if logger.enabled:
        print(format_history(logger.get_failure_stats(seed=seed), seed))
    return 0 if report['passed'] else 1


if __name__ == "__main__":
    sys.exit(main())
