"""
Management command to measure the gauge invariance of S^L

S^L must not move under random gauge transforms; S^I must, which shows the
test can fail.

Usage:
    python manage.py gauge_test --n 4 --seeds 10 --amplitude 0.2
"""
from django.core.management.base import BaseCommand, CommandError

from config.exceptions import SGTError
from harness.services import run_gauge_invariance

INVARIANCE_TOL = 1e-10
CONTROL_MIN = 1e-6


class Command(BaseCommand):
    help = 'Largest relative change of S^L (and S^I as a control) under random gauge transforms'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, default=4, help='Cubes per side, N_t = N')
        parser.add_argument('--seeds', type=int, default=10, help='Random transforms per field')
        parser.add_argument('--fields', type=int, default=2, help='Random gauge fields')
        parser.add_argument('--amplitude', type=float, default=None, help='Transform amplitude (default: SGT_GAUGE_AMPLITUDE)')
        parser.add_argument('--snapshot', type=str, default=None, help='Write the first field to this .npz archive')

    def handle(self, *args, **options):
        if options['n'] < 2:
            raise CommandError(f'--n must be >= 2, got {options["n"]}')
        if options['seeds'] < 1 or options['fields'] < 1:
            raise CommandError('--seeds and --fields must be positive')

        try:
            result = run_gauge_invariance(
                options['n'],
                options['seeds'],
                amplitude=options['amplitude'],
                fields=options['fields'],
                snapshot=options['snapshot'],
            )
        except (SGTError, ValueError) as e:
            raise CommandError(str(e))

        self.stdout.write(
            f'N={result.N}, {result.fields} fields x {result.seeds} transforms, amplitude {result.amplitude}'
        )
        self.stdout.write(f'  S^L max relative change: {result.max_deviation_L:.3e} (must be <= {INVARIANCE_TOL:.0e})')
        self.stdout.write(f'  S^I max relative change: {result.max_deviation_I:.3e} (must be > {CONTROL_MIN:.0e})')

        problems = []
        if result.max_deviation_L > INVARIANCE_TOL:
            problems.append('S^L is not gauge invariant')
        if result.amplitude > 0 and result.max_deviation_I <= CONTROL_MIN:
            problems.append('S^I control did not move; the transforms are too weak to test anything')
        if problems:
            raise CommandError('; '.join(problems))
        self.stdout.write(self.style.SUCCESS('✓ S^L is gauge invariant'))
