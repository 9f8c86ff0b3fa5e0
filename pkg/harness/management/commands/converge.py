"""
Management command to reproduce the h^2 convergence of the discrete actions

Usage:
    python manage.py converge --case all --action L --n 4,8,16 --out results/convergence.csv
    python manage.py converge --case 3 --action J --long --save
    python manage.py converge --case 1 --n 2,3 --no-check

The command exits nonzero unless every sweep converges at order two; see
harness.services.check_convergence.
"""
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from config.constants import ACTION_CHOICES, CASE_CHOICES, ORDER_WINDOW
from config.exceptions import SGTError
from harness.reports import emit_csv, emit_report
from harness.services import (
    MeshCache, check_convergence, default_n_list, parse_n_list, run_convergence, save_run,
)


class Command(BaseCommand):
    help = 'Relative error of S^J, S^I or S^L against the exact action over a mesh refinement'

    def add_arguments(self, parser):
        parser.add_argument(
            '--case',
            choices=[str(value) for value, _ in CASE_CHOICES] + ['all'],
            default='all',
            help='Catalogue field (default: all four)',
        )
        parser.add_argument(
            '--action',
            choices=[value for value, _ in ACTION_CHOICES] + ['all'],
            default='L',
            help='Discrete action kind (default: L)',
        )
        parser.add_argument('--n', type=str, default=None, help='Comma-separated mesh sizes, e.g. 4,8,16,32')
        parser.add_argument('--long', action='store_true', help='Use the long N list (includes N=32)')
        parser.add_argument('--out', type=str, default=None, help='CSV path (default: RESULTS_DIR/convergence.csv)')
        parser.add_argument('--report', type=str, default=None, help='Fit report path (default: next to the CSV)')
        parser.add_argument('--save', action='store_true', help='Store every sweep in the database')
        parser.add_argument(
            '--no-check',
            dest='check',
            action='store_false',
            help=f'Write the results without failing when errors do not decrease or the exponent leaves {list(ORDER_WINDOW)}',
        )

    def handle(self, *args, **options):
        try:
            n_list = parse_n_list(options['n']) if options['n'] else default_n_list(options['long'])
        except SGTError as e:
            raise CommandError(str(e))

        cases = [value for value, _ in CASE_CHOICES] if options['case'] == 'all' else [int(options['case'])]
        kinds = [value for value, _ in ACTION_CHOICES] if options['action'] == 'all' else [options['action']]
        out = options['out'] or settings.SGT['RESULTS_DIR'] / 'convergence.csv'
        out = Path(out)
        report = options['report'] or out.with_name(f'{out.stem}_fit.txt')

        self.stdout.write(f'Sweeping N={n_list} for cases {cases}, actions {kinds}...')
        cache = MeshCache()
        records, fits, failures = [], [], []
        for case in cases:
            for kind in kinds:
                try:
                    rows, fit = run_convergence(case, n_list, kind, cache)
                except SGTError as e:
                    raise CommandError(f'case {case} action {kind}: {e}')
                records.extend(rows)
                fits.append((case, kind, fit))
                for row in rows:
                    self.stdout.write(f'  case {case} S^{kind} N={row.N:<3d} S={row.S_discrete:.12f} rel_err={row.rel_err:.4e}')
                if fit is not None:
                    self.stdout.write(f'  case {case} S^{kind}: rel_err ~ {fit.prefactor:.4g} h^{fit.exponent:.3f}')
                if options['check']:
                    failures.extend(check_convergence(rows, fit))
                if options['save']:
                    run = save_run(case, kind, rows, fit)
                    self.stdout.write(self.style.SUCCESS(f'✓ Stored {run}'))

        try:
            emit_csv(records, out)
            emit_report(fits, report)
        except SGTError as e:
            raise CommandError(str(e))
        self.stdout.write(self.style.SUCCESS(f'✓ Wrote {len(records)} rows to {out} and fits to {report}'))

        if failures:
            for failure in failures:
                self.stdout.write(self.style.ERROR(f'✗ {failure}'))
            raise CommandError(f'{len(failures)} convergence check(s) failed')
