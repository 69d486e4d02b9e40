#!/usr/bin/env python3
"""
Script to run the full verification suite on the default grid and write
both report formats next to each other.
"""

import argparse
import sys
from pathlib import Path

from fockwizz.verify import default_grid, exit_status, run_suite, save_report


def main():
    parser = argparse.ArgumentParser(
        description="Run the fockwizz verification suite on the default grid",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Default grid at N = 128, reports in reports/
  %(prog)s -o reports/

  # Larger truncation and a looser default tolerance
  %(prog)s -o reports/ --dim 256 --tolerance 1e-7
        """
    )

    parser.add_argument(
        '-o', '--output-dir',
        default='reports',
        help='Directory for suite_report.json and suite_report.csv (default: reports)'
    )

    parser.add_argument(
        '--dim',
        type=int,
        default=128,
        help='Truncation dimension N (default: 128)'
    )

    parser.add_argument(
        '--tolerance',
        type=float,
        default=1e-8,
        help='Default residual tolerance (default: 1e-8)'
    )

    parser.add_argument(
        '--quiet',
        action='store_true',
        help='Hide the progress bar'
    )

    args = parser.parse_args()

    grid = default_grid(dim=args.dim, tolerance=args.tolerance)
    report = run_suite(grid, progress=not args.quiet)

    output_dir = Path(args.output_dir)
    save_report(report, output_dir / 'suite_report.json', format='structured')
    save_report(report, output_dir / 'suite_report.csv', format='rows')

    summary = report.summary
    print(f"Checks: {summary['total']}  pass: {summary['pass']}  fail: {summary['fail']}  "
          f"skipped: {summary['skipped']}  expected discrepancies: {summary['discrepancies']}")
    for result in report.results:
        if result.genuine_failure:
            print(f"FAIL {result.check_id}: residual {result.residual:.3g}")
    print(f"Reports written to {output_dir}/")

    sys.exit(exit_status(report))


if __name__ == '__main__':
    main()
