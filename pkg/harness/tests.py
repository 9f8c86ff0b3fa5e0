import csv
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from rest_framework import status
from rest_framework.test import APIClient

from config.constants import CONTINUUM_ACTIONS, CSV_COLUMNS
from config.exceptions import InvalidSize, IOFailure
from .models import ConvergenceRun
from .oracles import ORACLES, run_oracles
from .reports import emit_csv, emit_report
from .services import (
    ConvergenceRecord, MeshCache, check_convergence, default_n_list, fit_power_law, parse_n_list, run_convergence,
    run_gauge_invariance, save_run,
)


def synthetic_records(case=4, action='L', sizes=(4, 8, 16), scale=3.0):
    """Records with rel_err = scale * h^2 exactly."""
    exact = CONTINUUM_ACTIONS[case]
    return [
        ConvergenceRecord(case=case, action=action, N=n, h=1.0 / n, S_discrete=exact * (1 + scale / n ** 2), S_exact=exact)
        for n in sizes
    ]


class TempDirMixin:

    def setUp(self):
        super().setUp()
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.tmp = Path(tmp.name)


class FitTests(SimpleTestCase):

    def test_synthetic_square_law(self):
        h = np.array([1 / 4, 1 / 8, 1 / 16, 1 / 32])
        fit = fit_power_law(h, 3.0 * h ** 2)
        self.assertAlmostEqual(fit.exponent, 2.0, places=10)
        self.assertAlmostEqual(fit.prefactor, 3.0, places=9)
        self.assertLess(fit.residual, 1e-12)
        self.assertEqual(fit.points, 4)
        np.testing.assert_allclose(fit.poly, [0.0, 0.0, 3.0], atol=1e-9)

    def test_needs_three_points(self):
        with self.assertRaises(ValueError):
            fit_power_law([0.25, 0.125], [0.1, 0.025])

    def test_rejects_zero_error(self):
        with self.assertRaises(ValueError):
            fit_power_law([0.25, 0.125, 0.0625], [0.1, 0.0, 0.01])

    def test_record_relative_error(self):
        record = ConvergenceRecord(case=3, action='I', N=4, h=0.25, S_discrete=0.4, S_exact=0.5)
        self.assertAlmostEqual(record.rel_err, 0.2)
        self.assertEqual(list(record.as_row()), CSV_COLUMNS)


class CheckConvergenceTests(SimpleTestCase):

    def test_square_law_passes(self):
        records = synthetic_records()
        fit = fit_power_law([r.h for r in records], [r.rel_err for r in records])
        self.assertEqual(check_convergence(records, fit), [])

    def test_rounding_level_errors_pass_without_fit(self):
        exact = CONTINUUM_ACTIONS[4]
        records = [
            ConvergenceRecord(case=4, action='J', N=n, h=1.0 / n, S_discrete=exact * (1 + eps), S_exact=exact)
            for n, eps in ((4, 2e-16), (8, 4e-16), (16, 0.0))
        ]
        self.assertEqual(check_convergence(records, None), [])

    def test_first_order_fails(self):
        exact = CONTINUUM_ACTIONS[2]
        records = [
            ConvergenceRecord(case=2, action='I', N=n, h=1.0 / n, S_discrete=exact * (1 + 1.0 / n), S_exact=exact)
            for n in (4, 8, 16)
        ]
        fit = fit_power_law([r.h for r in records], [r.rel_err for r in records])
        failures = check_convergence(records, fit)
        self.assertEqual(len(failures), 1)
        self.assertIn('exponent 1.000', failures[0])

    def test_growing_errors_and_missing_fit_fail(self):
        records = synthetic_records(sizes=(8, 4))
        failures = check_convergence(records, None)
        self.assertEqual(len(failures), 2)
        self.assertIn('do not decrease', failures[0])

    def test_no_records(self):
        self.assertEqual(len(check_convergence([], None)), 1)


class ParseNListTests(SimpleTestCase):

    def test_parse(self):
        self.assertEqual(parse_n_list('4, 8,16,'), [4, 8, 16])

    def test_invalid(self):
        for text in ('1', '4,x', '', '4,-8'):
            with self.assertRaises(InvalidSize):
                parse_n_list(text)

    def test_defaults(self):
        self.assertEqual(default_n_list(), [4, 8, 16])
        self.assertEqual(default_n_list(long=True), [4, 8, 16, 32])


class ConvergenceTests(SimpleTestCase):

    def test_case_one_interpolated_action_closed_form(self):
        # abelian field sin(2 pi t) / pi: S^J = (sin(pi h) / (pi h))^2 for N_t = N >= 3
        records, fit = run_convergence(1, [4, 6, 8], 'J')
        self.assertEqual([r.N for r in records], [4, 6, 8])
        for r in records:
            self.assertAlmostEqual(r.h, 1.0 / r.N, places=15)
            x = np.pi / r.N
            self.assertAlmostEqual(r.S_discrete, (np.sin(x) / x) ** 2, places=12)
        self.assertTrue(1.8 <= fit.exponent <= 2.2)

    def test_case_four_error_ratio(self):
        records, fit = run_convergence(4, [4, 8], 'L')
        self.assertIsNone(fit)
        ratio = records[0].rel_err / records[1].rel_err
        self.assertTrue(3.0 <= ratio <= 5.3, ratio)

    def test_sgt_action_converges_at_order_two_on_every_case(self):
        cache = MeshCache()
        for case in (1, 2, 3, 4):
            with self.subTest(case=case):
                records, fit = run_convergence(case, [4, 8, 16], 'L', cache)
                errors = [r.rel_err for r in records]
                self.assertTrue(all(b < a for a, b in zip(errors, errors[1:])), errors)
                self.assertTrue(1.8 <= fit.exponent <= 2.2, fit.exponent)
                self.assertEqual(check_convergence(records, fit), [])

    def test_records_are_deterministic(self):
        first, _ = run_convergence(2, [3, 4], 'I')
        second, _ = run_convergence(2, [3, 4], 'I')
        self.assertEqual(first, second)
        self.assertTrue(all(r.rel_err >= 0 for r in first))


class LoggingTests(SimpleTestCase):

    def test_module_loggers_reach_the_app_logger(self):
        with self.assertLogs('harness', level='INFO') as logs:
            run_convergence(4, [2], 'J')
        self.assertTrue(any(r.name == 'harness.services' for r in logs.records))
        self.assertTrue(any('finished in' in line for line in logs.output))


class GaugeInvarianceTests(SimpleTestCase):

    def test_identity_transforms(self):
        result = run_gauge_invariance(3, seeds=2, amplitude=0.0, fields=1)
        self.assertLess(result.max_deviation_L, 1e-14)
        self.assertLess(result.max_deviation_I, 1e-14)

    def test_random_transforms(self):
        result = run_gauge_invariance(4, seeds=10, amplitude=0.2, fields=2)
        self.assertLessEqual(result.max_deviation_L, 1e-10)
        self.assertGreater(result.max_deviation_I, 1e-6)

    def test_snapshot(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'field.npz'
            run_gauge_invariance(2, seeds=1, fields=1, snapshot=path)
            self.assertTrue(path.exists())


class ReportTests(TempDirMixin, SimpleTestCase):

    def test_empty_csv_is_header_only(self):
        path = emit_csv([], self.tmp / 'empty.csv')
        self.assertEqual(path.read_bytes(), b'case,action,N,h,S_discrete,S_exact,rel_err\n')

    def test_single_record_round_trip(self):
        record = synthetic_records(case=3, sizes=(7,))[0]
        path = emit_csv([record], self.tmp / 'one.csv')
        text = path.read_text()
        self.assertEqual(text.count('\n'), 2)
        self.assertNotIn('\r', text)
        with open(path, newline='') as fh:
            rows = list(csv.DictReader(fh))
        self.assertEqual(len(rows), 1)
        self.assertEqual(int(rows[0]['N']), 7)
        self.assertEqual(rows[0]['action'], 'L')
        self.assertEqual(float(rows[0]['S_discrete']), record.S_discrete)
        self.assertEqual(float(rows[0]['rel_err']), record.rel_err)

    def test_float_format_drops_trailing_zeros_and_reads_back_exactly(self):
        record = ConvergenceRecord(case=4, action='L', N=10, h=0.1, S_discrete=0.5 + 1e-3, S_exact=0.5)
        path = emit_csv([record], self.tmp / 'digits.csv')
        row = path.read_text().splitlines()[1].split(',')
        self.assertEqual(row[3], '0.10000000000000001')
        self.assertEqual(row[5], '0.5')
        self.assertEqual(float(row[4]), record.S_discrete)
        self.assertEqual(float(row[6]), record.rel_err)

    def test_full_sweep_cardinality(self):
        records = [r for case in (1, 2, 3, 4) for r in synthetic_records(case=case, sizes=(4, 8, 16, 32))]
        path = emit_csv(records, self.tmp / 'sweep.csv')
        self.assertEqual(len(path.read_text().splitlines()), 1 + 4 * 4)

    def test_identical_records_identical_bytes(self):
        records = synthetic_records()
        a = emit_csv(records, self.tmp / 'a.csv').read_bytes()
        b = emit_csv(records, self.tmp / 'b.csv').read_bytes()
        self.assertEqual(a, b)

    def test_report(self):
        records = synthetic_records()
        fit = fit_power_law([r.h for r in records], [r.rel_err for r in records])
        text = emit_report([(4, 'L', fit), (3, 'J', None)], self.tmp / 'fit.txt').read_text()
        lines = text.splitlines()
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[1].startswith('4 L 3 2.000000 3 '))
        self.assertIn('no fit', lines[2])

    def test_unwritable_path(self):
        blocker = self.tmp / 'file'
        blocker.write_text('')
        with self.assertRaises(IOFailure):
            emit_csv([], blocker / 'out.csv')
        with self.assertRaises(IOFailure):
            emit_report([], blocker / 'fit.txt')


class ConvergenceRunModelTests(TestCase):

    def test_save_run(self):
        records = synthetic_records(case=2, action='J')
        fit = fit_power_law([r.h for r in records], [r.rel_err for r in records])
        run = save_run(2, 'J', records, fit)
        self.assertEqual(run.sizes, [4, 8, 16])
        self.assertAlmostEqual(run.exponent, 2.0, places=10)
        self.assertEqual(run.records.count(), 3)
        self.assertEqual(list(run.records.values_list('N', flat=True)), [4, 8, 16])
        self.assertIn('case 2', str(run))

    def test_save_run_without_fit(self):
        run = save_run(4, 'L', synthetic_records(sizes=(4, 8)), None)
        self.assertIsNone(run.exponent)
        self.assertEqual(run.records.count(), 2)


class ConvergenceRunAPITests(TestCase):

    def setUp(self):
        self.client = APIClient()
        records = synthetic_records(case=3, action='L')
        fit = fit_power_law([r.h for r in records], [r.rel_err for r in records])
        self.run = save_run(3, 'L', records, fit)
        save_run(1, 'J', synthetic_records(case=1, action='J', sizes=(4, 8)), None)

    def test_list(self):
        response = self.client.get('/api/harness/runs/')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(len(response.data['runs']), 2)

    def test_filters(self):
        response = self.client.get('/api/harness/runs/', {'case': 3, 'action': 'l'})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        runs = response.data['runs']
        self.assertEqual([r['id'] for r in runs], [self.run.id])
        self.assertAlmostEqual(runs[0]['fit']['exponent'], 2.0, places=10)

    def test_invalid_filter(self):
        response = self.client.get('/api/harness/runs/', {'case': 9})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('error', response.data)
        self.assertIn('details', response.data)

    def test_detail(self):
        response = self.client.get(f'/api/harness/runs/{self.run.id}/')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual([r['N'] for r in response.data['run']['records']], [4, 8, 16])

    def test_missing(self):
        response = self.client.get('/api/harness/runs/9999/')
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)
        self.assertEqual(response.data['error'], 'Run not found')

    def test_health(self):
        response = self.client.get('/health/')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['checks'], {'database': 'connected', 'kernels': 'ok'})
        self.assertEqual(response.data['service'], 'SGT API')


class CommandTests(TempDirMixin, TestCase):

    def test_converge_is_reproducible(self):
        paths = [self.tmp / 'a.csv', self.tmp / 'b.csv']
        for path in paths:
            call_command('converge', case='4', action='J', n='2,3', out=str(path), check=False, stdout=StringIO())
        self.assertEqual(paths[0].read_bytes(), paths[1].read_bytes())
        self.assertEqual(len(paths[0].read_text().splitlines()), 3)
        self.assertTrue((self.tmp / 'a_fit.txt').exists())

    def test_converge_save(self):
        call_command(
            'converge', case='2', action='I', n='2,3', out=str(self.tmp / 'c.csv'), save=True, check=False, stdout=StringIO(),
        )
        self.assertEqual(ConvergenceRun.objects.filter(case=2, action='I').count(), 1)

    def test_converge_fails_by_default_without_a_fit(self):
        path = self.tmp / 'd.csv'
        with self.assertRaises(CommandError):
            call_command('converge', case='1', action='J', n='2,3', out=str(path), stdout=StringIO())
        # results are still written before the command fails
        self.assertEqual(len(path.read_text().splitlines()), 3)

    def test_converge_passes_at_order_two(self):
        out = StringIO()
        call_command('converge', case='1', action='J', n='4,6,8', out=str(self.tmp / 'f.csv'), stdout=out)
        self.assertIn('h^', out.getvalue())

    def test_converge_invalid_sizes(self):
        with self.assertRaises(CommandError):
            call_command('converge', n='1,2', out=str(self.tmp / 'e.csv'), stdout=StringIO())

    def test_gauge_test(self):
        out = StringIO()
        call_command('gauge_test', n=3, seeds=2, fields=1, amplitude=0.2, stdout=out)
        self.assertIn('gauge invariant', out.getvalue())

    def test_gauge_test_rejects_small_mesh(self):
        with self.assertRaises(CommandError):
            call_command('gauge_test', n=1, stdout=StringIO())

    def test_oracle_subset(self):
        out = StringIO()
        call_command('oracle', only=['structure', 'vertex mass'], no_color=True, stdout=out)
        lines = [line for line in out.getvalue().splitlines() if line.startswith(('PASS', 'FAIL'))]
        self.assertEqual(len(lines), 2)
        self.assertTrue(all(line.startswith('PASS') for line in lines))

    def test_oracle_unknown_name(self):
        with self.assertRaises(CommandError):
            call_command('oracle', only=['no such check'], stdout=StringIO())


class OracleSuiteTests(SimpleTestCase):

    def test_names_are_unique(self):
        names = [name for name, _, _, _ in ORACLES]
        self.assertEqual(len(names), len(set(names)))

    def test_registry_size(self):
        self.assertEqual(len(ORACLES), 24)

    def test_mesh_mass_and_locality_checks_pass(self):
        results = run_oracles(
            ['boundary of boundary', 'dof duality', 'slab-diagonal', 'shared tet', 'normalization', 'perturbed edge'],
        )
        self.assertEqual(len(results), 7)
        for result in results:
            self.assertTrue(result.passed, str(result))

    def test_lie_kernel_checks_pass(self):
        results = run_oracles(['exp', 'bch', 'dexp'])
        self.assertGreaterEqual(len(results), 5)
        for result in results:
            self.assertTrue(result.passed, str(result))
