"""
Management command to run the oracle suite

Prints one PASS/FAIL line per check and exits nonzero if any check fails.

Usage:
    python manage.py oracle
    python manage.py oracle --only bch stokes
"""
from django.core.management.base import BaseCommand, CommandError

from harness.oracles import ORACLES, run_oracles


class Command(BaseCommand):
    help = 'Run the Lie algebra, Whitney form and action oracle checks'

    def add_arguments(self, parser):
        parser.add_argument('--only', nargs='+', default=None, help='Run only checks whose name contains one of these')
        parser.add_argument('--list', action='store_true', help='List the checks and exit')

    def handle(self, *args, **options):
        if options['list']:
            for name, _, _, _ in ORACLES:
                self.stdout.write(name)
            return

        results = run_oracles(options['only'])
        if not results:
            raise CommandError(f'No check matches {options["only"]}')

        for result in results:
            style = self.style.SUCCESS if result.passed else self.style.ERROR
            self.stdout.write(style(str(result)))

        failed = [r for r in results if not r.passed]
        if failed:
            raise CommandError(f'{len(failed)} of {len(results)} checks failed: {", ".join(r.name for r in failed)}')
        self.stdout.write(self.style.SUCCESS(f'✓ All {len(results)} checks passed'))
