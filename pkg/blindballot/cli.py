"""
Command line entry point::

    blindballot run <config>
    blindballot attack <name> <config>
    blindballot verify <transcript> [--report REPORT]
    blindballot tally <transcript>
    blindballot keygen --bits N --seed S --out FILE [--public]

run and attack exit 0 iff every verdict matches its expectation.
"""

# standard library imports
import argparse
import logging
import sys

# imports that may need installation
import colorama
import pandas as pd
from tabulate import tabulate

# local package imports
from blindballot import __version__, blindsig
from blindballot.attacks import ATTACKS, run_attack
from blindballot.audit import offchain_tally, recorded_tally, verify_transcript
from blindballot.config import setup_logging
from blindballot.contract import format_tally
from blindballot.errors import BlindBallotError
from blindballot.ledger import load_log
from blindballot.scenario import ballot_label, run_scenario

logger = logging.getLogger(__name__)


def _mark(ok):
    if ok:
        return f'{colorama.Fore.GREEN}ok{colorama.Style.RESET_ALL}'
    return f'{colorama.Fore.RED}MISMATCH{colorama.Style.RESET_ALL}'


def print_report(report):
    """ the property table, the tally and where the files went """
    df = pd.DataFrame([{'property': a.property, 'verdict': a.verdict, 'expected': a.expected,
                        '': _mark(a.holds), 'detail': a.detail} for a in report.assertions])
    print(tabulate(df, headers='keys', tablefmt='psql', showindex=False))
    print_tally(report.tally)
    if report.attack is not None:
        a = report.attack
        print(f'Attack {colorama.Fore.BLUE}{a.name}{colorama.Style.RESET_ALL} ({a.property}): '
              f'{"succeeded" if a.succeeded else "failed"} {_mark(a.as_expected)}')
        print('  ' + a.detail)
    print('Transcript: {}'.format(report.transcript_path))
    print('Report:     {}'.format(report.report_path))


def print_tally(counts):
    rows = [(ballot_label(b), c) for b, c in sorted(counts.items())]
    print(tabulate(rows, headers=['ballot', 'count'], tablefmt='psql'))


def cmd_run(args):
    report = run_scenario(args.config)
    print_report(report)
    return 0 if report.ok else 1


def cmd_attack(args):
    report = run_attack(args.name, args.config)
    print_report(report)
    return 0 if report.ok else 1


def cmd_verify(args):
    result = verify_transcript(args.transcript, report_path=args.report)
    if result.ok:
        print(f'{colorama.Fore.GREEN}transcript verified{colorama.Style.RESET_ALL}')
    for d in result.divergences:
        print(f'{colorama.Fore.RED}divergence{colorama.Style.RESET_ALL}: {d}')
    print_tally(result.tally)
    return 0 if result.ok else 1


def cmd_tally(args):
    log = load_log(args.transcript)
    counts = offchain_tally(log)
    recorded = recorded_tally(log)
    sys.stdout.write(format_tally(counts))
    if recorded is not None and recorded != counts:
        print(f'{colorama.Fore.RED}on-chain tally differs from the off-chain count{colorama.Style.RESET_ALL}',
              file=sys.stderr)
        return 1
    return 0


def cmd_keygen(args):
    key = blindsig.keygen(args.bits, seed=args.seed)
    blindsig.save_key(key, args.out, private=not args.public)
    print('wrote {}-bit key to {}'.format(key.bits, args.out))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog='blindballot',
                                     description='Blind-signature elections on a simulated ledger.')
    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('--log-level', default=None,
                        help='DEBUG, INFO, WARNING, ... (default: $BLINDBALLOT_LOG or WARNING)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('run', help='run a scenario through all four stages')
    p.add_argument('config', help='scenario YAML file')
    p.set_defaults(func=cmd_run)

    p = sub.add_parser('attack', help='run a named attack against a scenario')
    p.add_argument('name', choices=list(ATTACKS))
    p.add_argument('config', help='scenario YAML file')
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser('verify', help='replay a transcript and compare it with its report')
    p.add_argument('transcript')
    p.add_argument('--report', default=None, help='report.yaml (default: next to the transcript)')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('tally', help='count a transcript off-chain')
    p.add_argument('transcript')
    p.set_defaults(func=cmd_tally)

    p = sub.add_parser('keygen', help='write a seeded RSA key file')
    p.add_argument('--bits', type=int, default=blindsig.DEFAULT_BITS)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', required=True)
    p.add_argument('--public', action='store_true', help='leave out the private exponent')
    p.set_defaults(func=cmd_keygen)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        return args.func(args)
    except BlindBallotError as e:
        print(f'{colorama.Fore.RED}error{colorama.Style.RESET_ALL}: {e}', file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
