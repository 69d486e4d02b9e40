"""
Command-line interface for fockwizz
"""

import argparse
import math
import sys
from pathlib import Path

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

STATE_KINDS = ['fock', 'coherent', 'gcs', 'b_plus', 'b_minus', 'superposition', 'cat',
               'gdf_basis', 'dressed_basis']


def _add_space_options(parser):
    parser.add_argument('--dim', type=int, default=None,
                        help='Truncation dimension N (default: 128)')
    parser.add_argument('--interior-dim', type=int, default=None,
                        help='Interior dimension K for residuals (default: dim // 2)')
    parser.add_argument('--tail-tol', type=float, default=None,
                        help='Tail-mass tolerance above level K (default: 1e-10)')
    parser.add_argument('--safe-radius', type=float, default=None,
                        help='Admissible |z| for m >= 3 (default: 0.25)')
    parser.add_argument('--format', type=str, default=None, choices=['rows', 'structured'],
                        help='Table output format (default: rows)')
    parser.add_argument('--output-dir', type=str, default=None,
                        help='Directory for relative output paths (default: .)')


def create_parser():
    """Create the main CLI argument parser."""
    parser = argparse.ArgumentParser(
        prog='fockwizz',
        description='fockwizz - parity-displacement operators in a truncated Fock space',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )

    # Global options
    parser.add_argument('--verbose', '-v', action='store_true',
                        help='Enable verbose output')
    parser.add_argument('--config', type=str, default=None,
                        help='Path to config file (default: $FOCKWIZZ_CONFIG or auto-detect)')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # gen command
    parser_gen = subparsers.add_parser('gen', help='Generate a state and its number statistics')
    parser_gen.add_argument('--kind', type=str, required=True, choices=STATE_KINDS,
                            help='State family')
    parser_gen.add_argument('--m', type=int, default=1, help='Order m (default: 1)')
    parser_gen.add_argument('--z', type=str, default='0', help='Amplitude z as a+bi (default: 0)')
    parser_gen.add_argument('--lambda', dest='lam', type=float, default=0.0,
                            help='Evolution parameter in radians (default: 0)')
    parser_gen.add_argument('--u', type=str, default='0', help='Amplitude u as a+bi (default: 0)')
    parser_gen.add_argument('--n', type=int, default=0, help='Basis index (default: 0)')
    parser_gen.add_argument('--override', action='store_true',
                            help='Skip the safe-radius and convergence guards for m >= 3')
    parser_gen.add_argument('-o', '--out', type=str, default='state.json',
                            help='State document path (default: state.json)')
    parser_gen.add_argument('--stats', type=str, default=None,
                            help='Statistics table path (default: <out stem>_stats.csv/.json)')
    _add_space_options(parser_gen)

    # verify command
    parser_verify = subparsers.add_parser('verify', help='Run the verification suite')
    parser_verify.add_argument('--m', type=int, nargs='+', default=None,
                               help='Orders m (default: 1 2 3)')
    parser_verify.add_argument('--z', type=str, nargs='+', default=None,
                               help='Amplitudes z (default: 0.2 0.5+0.3i)')
    parser_verify.add_argument('--lambda', dest='lam', type=float, nargs='+', default=None,
                               help='Evolution parameters (default: 0 0.7 pi/4 pi/2)')
    parser_verify.add_argument('--u', type=str, nargs='+', default=None,
                               help='Amplitudes u (default: 0.4i)')
    parser_verify.add_argument('--check', type=str, action='append', default=None,
                               help='Run only this check id (repeatable)')
    parser_verify.add_argument('--tolerance', type=float, default=None,
                               help='Default residual tolerance (default: 1e-8)')
    parser_verify.add_argument('--threshold', type=float, default=None,
                               help='Convergence threshold (default: 1e-8)')
    parser_verify.add_argument('--report', type=str, default=None,
                               help='Report path (JSON when structured, CSV when rows)')
    parser_verify.add_argument('--progress', action='store_true', help='Show a progress bar')
    parser_verify.add_argument('--list', action='store_true',
                               help='List registered checks and exit')
    _add_space_options(parser_verify)

    # sweep command
    parser_sweep = subparsers.add_parser('sweep', help='Sweep one parameter and tabulate observables')
    parser_sweep.add_argument('--param', type=str, required=True, choices=['lambda', 'z', 'u'],
                              help='Parameter to sweep (z and u sweep the magnitude)')
    parser_sweep.add_argument('--range', dest='value_range', type=str, required=True,
                              help='Sweep range as start:stop:step')
    parser_sweep.add_argument('--observable', type=str, action='append', default=None,
                              help='Observable column (repeatable, default: vacuum-probability)')
    parser_sweep.add_argument('--m', type=int, default=1, help='Order m (default: 1)')
    parser_sweep.add_argument('--z', type=str, default='1', help='Fixed z or sweep direction')
    parser_sweep.add_argument('--u', type=str, default='0', help='Fixed u or sweep direction')
    parser_sweep.add_argument('--lambda', dest='lam', type=float, default=0.0,
                              help='Fixed lambda in radians (default: 0)')
    parser_sweep.add_argument('--workers', type=int, default=None,
                              help='Worker threads for the fan-out')
    parser_sweep.add_argument('--progress', action='store_true', help='Show a progress bar')
    parser_sweep.add_argument('-o', '--out', type=str, default=None,
                              help='Output table path (default: print to stdout)')
    _add_space_options(parser_sweep)

    # converge command
    parser_conv = subparsers.add_parser('converge', help='Convergence diagnostic of |z_m>')
    parser_conv.add_argument('--m', type=int, required=True, help='Order m')
    parser_conv.add_argument('--z', type=str, required=True, help='Amplitude z as a+bi')
    parser_conv.add_argument('--dims', type=str, nargs='+', required=True,
                             help='Increasing dimensions, e.g. 64 128 or 64,128')
    parser_conv.add_argument('--threshold', type=float, default=None,
                             help='Convergence threshold (default: 1e-8)')
    parser_conv.add_argument('-o', '--out', type=str, default=None,
                             help='Report path (JSON)')

    return parser


def _config(args):
    from ..utils.environ import resolve_config

    flags = {name: getattr(args, name, None) for name in
             ('dim', 'interior_dim', 'tail_tol', 'safe_radius', 'tolerance', 'threshold',
              'output_dir', 'format')}
    return resolve_config(flags, config_path=args.config, verbose=args.verbose)


def _space(config):
    from ..core import make_space
    return make_space(config.dim, config.interior_dim, config.tail_tol)


def _write_rows(config, header, rows, path):
    from ..utils.records import write_json, write_table

    if config.format == 'structured':
        return write_json([dict(zip(header, row)) for row in rows], path)
    return write_table(header, rows, path)


def _run(func, args):
    from ..utils.parsing import ParseError

    try:
        return func(args)
    except (ParseError, ValueError, FileNotFoundError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE


def cmd_gen(args):
    """Execute gen command."""
    from ..analysis import fidelity, statistics_rows
    from ..core import Ket
    from ..operators import OperatorParams
    from ..states import StateFamily, coherent, save_state
    from ..utils.parsing import format_complex, parse_complex

    config = _config(args)
    space = _space(config)
    z, u = parse_complex(args.z), parse_complex(args.u)
    family = StateFamily(args.kind, OperatorParams(args.m, z, u, args.lam), args.n)

    if args.verbose:
        print(f"Generating {args.kind} state (m={args.m}, z={format_complex(z)}, "
              f"lambda={args.lam:g}, u={format_complex(u)}, n={args.n}) at dim={space.dim}")
    ket = family.build(space, safe_radius=config.safe_radius, override=args.override,
                       check_convergence=True, threshold=config.threshold,
                       verbose=args.verbose)

    meta = ket.meta
    print(f"Truncation loss: {meta.get('truncation_loss', 0.0):.3g}")
    if 'phase_fix' in meta:
        applied = 'applied' if meta['phase_fix'] else 'not applicable (unphasable)'
        print(f"Phase fix: {applied}")
    if args.kind == 'cat':
        phase = complex(meta['relative_phase'])
        oracle = (math.cos(args.lam) * coherent(space, u).amps
                  + 1j * math.sin(args.lam) * phase * coherent(space, z).amps)
        oracle_ket = Ket(space, oracle).normalized()
        print(f"Fidelity with the two-term superposition: {fidelity(ket, oracle_ket):.12f}")

    out = config.output_path(args.out)
    save_state(ket, out)
    suffix = '.json' if config.format == 'structured' else '.csv'
    stats = config.output_path(args.stats) if args.stats else str(
        Path(out).with_name(Path(out).stem + '_stats' + suffix))
    _write_rows(config, ['n', 'p_n'], statistics_rows(ket), stats)
    print(f"Wrote state to {out} and statistics to {stats}")
    return EXIT_OK


def cmd_verify(args):
    """Execute verify command."""
    from ..utils.parsing import format_complex, parse_complex
    from ..verify import default_grid, exit_status, registered_checks, run_suite, save_report

    if args.list:
        for check_id, check in registered_checks().items():
            print(f"{check_id:34s} {check.kind:12s} {check.description}")
        return EXIT_OK

    config = _config(args)
    overrides = dict(dim=config.dim, interior_dim=config.interior_dim, tail_tol=config.tail_tol,
                     safe_radius=config.safe_radius, threshold=config.threshold,
                     tolerance=config.tolerance, tolerances=dict(config.tolerances))
    if args.m:
        overrides['ms'] = tuple(args.m)
    if args.z:
        overrides['zs'] = tuple(parse_complex(z) for z in args.z)
    if args.lam:
        overrides['lams'] = tuple(args.lam)
    if args.u:
        overrides['us'] = tuple(parse_complex(u) for u in args.u)
    grid = default_grid(**overrides)

    report = run_suite(grid, selection=args.check, progress=args.progress, verbose=args.verbose)
    summary = report.summary
    print(f"Checks: {summary['total']}  pass: {summary['pass']}  fail: {summary['fail']}  "
          f"skipped: {summary['skipped']}  expected discrepancies: {summary['discrepancies']}")
    for result in report.skipped:
        z_text = format_complex(complex(*result.params['z']))
        print(f"Skipped {result.check_id} (m={result.params['m']}, z={z_text}): {result.note}")
    for result in report.results:
        if result.genuine_failure:
            z_text = format_complex(complex(*result.params['z']))
            print(f"FAIL {result.check_id} (m={result.params['m']}, z={z_text}, "
                  f"lambda={result.params['lam']:g}): "
                  f"residual {result.residual:.3g} > {result.tolerance:g}")

    if args.report:
        path = config.output_path(args.report)
        save_report(report, path, format=config.format)
        print(f"Wrote report to {path}")
    return exit_status(report)


def cmd_sweep(args):
    """Execute sweep command."""
    from ..utils.parsing import parse_complex, parse_range
    from .batch import run_sweep

    config = _config(args)
    space = _space(config)
    values = parse_range(args.value_range)
    observables = args.observable or ['vacuum-probability']
    header, rows = run_sweep(space, args.param, values, observables, m=args.m,
                             z=parse_complex(args.z), u=parse_complex(args.u), lam=args.lam,
                             safe_radius=config.safe_radius, threshold=config.threshold,
                             workers=args.workers, progress=args.progress, verbose=args.verbose)
    path = config.output_path(args.out) if args.out else None
    text = _write_rows(config, header, rows, path)
    if path is None:
        print(text, end='')
    else:
        print(f"Wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_converge(args):
    """Execute converge command."""
    from ..analysis import convergence_diagnostic
    from ..utils.parsing import parse_complex, parse_dims
    from ..utils.records import write_json

    config = _config(args)
    z = parse_complex(args.z)
    report = convergence_diagnostic(args.m, z, parse_dims(args.dims), threshold=config.threshold,
                                    verbose=args.verbose)
    for (d1, d2), delta in zip(zip(report.dims, report.dims[1:]), report.deltas):
        print(f"dims {d1} -> {d2}: 1 - fidelity = {delta:.3e}")
    print(f"Verdict: {report.verdict} (threshold {report.threshold:g})")
    if args.out:
        path = config.output_path(args.out)
        write_json(report, path)
        print(f"Wrote report to {path}")
    return EXIT_OK


def main(argv=None):
    """Main CLI entry point."""
    from ..utils.environ import is_verbose

    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return EXIT_OK if exit_request.code in (0, None) else EXIT_USAGE

    if args.command is None:
        parser.print_help()
        return EXIT_OK
    args.verbose = args.verbose or is_verbose()

    command_map = {
        'gen': cmd_gen,
        'verify': cmd_verify,
        'sweep': cmd_sweep,
        'converge': cmd_converge,
    }

    cmd_func = command_map.get(args.command)
    if cmd_func:
        return _run(cmd_func, args)
    else:
        print(f"Unknown command: {args.command}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
