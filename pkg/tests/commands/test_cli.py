import json
import os
import shutil
import tempfile
import unittest
from unittest import mock

import numpy as np
import pandas as pd
import yaml

from dce.cli import main
from dce.models.kernels import KernelPoint, kernel_pair, a_plus_infinite
from dce.numerics.quadrature import QuadratureSpec
from dce.oracle.checks import oracle_normalization
from dce.scenarios.config import load_raw


class TestCli(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def path(self, name):
        return os.path.join(self.tmp, name)

    def run_cli(self, *argv):
        return main(list(argv) + ['-q'])

    def write_scenario(self, name, raw):
        p = self.path(name)
        with open(p, 'w') as f:
            yaml.safe_dump(raw, f)
        return p

    def test_kernel(self):
        out = self.path('kernel.csv')
        self.assertEqual(self.run_cli('kernel', '--q', '1', '0', '--omega', '0', '4', '--H', '1', '--out', out), 0)
        table = pd.read_csv(out)
        self.assertEqual(len(table), 4)
        row = table.iloc[0]
        expected = kernel_pair(KernelPoint(1., 0., 1.), QuadratureSpec(rel_tol=1e-8)).a_plus.re
        self.assertAlmostEqual(row['a_plus_re [1/L0^5]'] / expected, 1., places=7)
        divergent = table[(table['q [1/L0]'] == 0) & (table['omega [c/L0]'] == 4)].iloc[0]
        self.assertEqual(divergent['region'], 'IIb')
        self.assertEqual(divergent['a_plus_status'], 'Divergent')

    def test_kernel_far_separation(self):
        out = self.path('far.csv')
        self.assertEqual(self.run_cli('kernel', '--q', '1', '--omega', '0', '--H', '20', '--out', out), 0)
        row = pd.read_csv(out).iloc[0]
        self.assertEqual(row['a_minus_status'], 'Finite')
        self.assertLess(abs(row['a_minus_re [1/L0^5]']), 1e-12)

    def test_kernel_config(self):
        raw = load_raw('macroscopic.yaml')
        k = 2 * np.pi / 1e-3
        raw['grids'] = {'q': {'start': {'value': 0., 'unit': '1/m'}, 'stop': {'value': 2 * k, 'unit': '1/m'}, 'n': 3},
                        'omega': {'start': {'value': 0., 'unit': 'rad/s'},
                                  'stop': {'value': 0.5 * 299792458. * k, 'unit': 'rad/s'}, 'n': 2}}
        raw['tolerances'] = {'rel_tol': 1e-9}
        p = self.write_scenario('grid.yaml', raw)
        out = self.path('grid.csv')
        self.assertEqual(self.run_cli('kernel', '--config', p, '--out', out), 0)
        table = pd.read_csv(out)
        self.assertEqual(len(table), 6)
        np.testing.assert_allclose(sorted(table['q [1/L0]'].unique()), [0., 2 * np.pi, 4 * np.pi])
        np.testing.assert_allclose(sorted(table['omega [c/L0]'].unique()), [0., np.pi])
        self.assertTrue(np.isinf(table['H [L0]']).all())
        row = table[(table['q [1/L0]'] > 6) & (table['q [1/L0]'] < 7) & (table['omega [c/L0]'] == 0)].iloc[0]
        self.assertAlmostEqual(row['a_plus_re [1/L0^5]'] / a_plus_infinite(2 * np.pi, 0.).re, 1., places=7)

        del raw['grids']
        p = self.write_scenario('point.yaml', raw)
        self.assertEqual(self.run_cli('kernel', '--config', p, '--out', out), 0)
        table = pd.read_csv(out)
        self.assertEqual(len(table), 1)
        self.assertAlmostEqual(table['omega [c/L0]'][0], 4 * np.pi)

    def test_kernel_bad_config(self):
        raw = load_raw('macroscopic.yaml')
        raw['tolerances'] = {'rel_tol': -1.}
        self.assertEqual(self.run_cli('kernel', '--config', self.write_scenario('neg.yaml', raw)), 2)
        raw = load_raw('macroscopic.yaml')
        raw['grids'] = {'q': {'start': {'value': 0., 'unit': 'm'}, 'stop': {'value': 1., 'unit': 'm'}, 'n': 2},
                        'omega': {'start': {'value': 0., 'unit': 'rad/s'}, 'stop': {'value': 1., 'unit': 'rad/s'}, 'n': 2}}
        self.assertEqual(self.run_cli('kernel', '--config', self.write_scenario('unit.yaml', raw)), 2)
        self.assertEqual(self.run_cli('kernel', '--config', self.path('missing.yaml')), 2)

    def test_kernel_threads(self):
        outs = [self.path('t1.csv'), self.path('t2.csv')]
        for out, threads in zip(outs, ('1', '2')):
            self.assertEqual(self.run_cli('kernel', '--q', '0.5', '1', '2', '--omega', '0', '0.5', '--H', '1',
                                          '--threads', threads, '--out', out), 0)
        with open(outs[0]) as a, open(outs[1]) as b:
            self.assertEqual(a.read(), b.read())

    def test_region_map(self):
        out = self.path('regions.csv')
        self.assertEqual(self.run_cli('region-map', '--H', '1', '--q-max', '2', '--omega-max', '10', '--n', '200',
                                      '--out', out), 0)
        table = pd.read_csv(out)
        self.assertEqual(len(table), 200 * 200)
        line = table[table['q [1/L0]'] == 0]
        onset = line[line['region'] == 'IIb']['omega [c/L0]'].min()
        self.assertGreater(onset, np.pi)
        self.assertLessEqual(onset - np.pi, 10. / 199)

    def test_scenario_json(self):
        out = self.path('macro.json')
        self.assertEqual(self.run_cli('scenario', '--config', 'macroscopic.yaml', '--format', 'json', '--out', out), 0)
        with open(out) as f:
            records = json.load(f)
        values = {r['observable']: r['value'] for r in records}
        self.assertAlmostEqual(values['dm_over_m'] / 8.07e-35, 1., delta=5e-3)
        self.assertIn('anchor_ratio.dm_over_m', values)

    def test_scenario_divergent_drive(self):
        raw = load_raw('josephson.yaml')
        raw['drive'] = {'omega_over_ck': 10.}
        p = self.write_scenario('driven.yaml', raw)
        self.assertEqual(self.run_cli('scenario', '--config', p, '--out', self.path('x.csv')), 4)

    def test_scenario_bad_unit(self):
        raw = load_raw('macroscopic.yaml')
        raw['area']['unit'] = 'cm^2'
        p = self.write_scenario('bad.yaml', raw)
        self.assertEqual(self.run_cli('scenario', '--config', p, '--out', self.path('x.csv')), 2)
        self.assertEqual(self.run_cli('scenario', '--config', self.path('missing.yaml')), 2)

    def test_grid_search(self):
        out = self.path('grid.json')
        self.assertEqual(self.run_cli('scenario', '--grid_search', '--config', 'macroscopic_gs.yaml',
                                      '--format', 'json', '--out', out), 0)
        with open(out) as f:
            table = pd.DataFrame(json.load(f))
        self.assertEqual(sorted(table['run'].unique()), [0, 1, 2, 3])
        dm = table[table['observable'] == 'dm_over_m'].groupby('run')['value'].first()
        self.assertAlmostEqual(dm.max() / dm.min(), 100., places=6)

    def test_capillary(self):
        out = self.path('cap.json')
        self.assertEqual(self.run_cli('capillary', '--H', '1e-3', '--sigma', '0.5', '--format', 'json',
                                      '--out', out), 0)
        with open(out) as f:
            values = {r['observable']: r['value'] for r in json.load(f)}
        self.assertAlmostEqual(values['relative_speed_shift'] / -2.9837e-19, 1., delta=1e-3)
        self.assertEqual(self.run_cli('capillary', '--H', '1e-3'), 2)
        self.assertEqual(self.run_cli('capillary', '--config', 'mercury.yaml', '--out', self.path('m.csv')), 0)

    def test_josephson_dc(self):
        out = self.path('dc.csv')
        self.assertEqual(self.run_cli('josephson', '--config', 'josephson.yaml', '--n', '8', '--out', out), 0)
        table = pd.read_csv(out)
        self.assertEqual(len(table), 8)
        self.assertEqual(int(table['force_x [N]'].idxmax()), 2)
        self.assertEqual(int(table['energy [J]'].idxmin()), 4)
        self.assertEqual(self.run_cli('josephson', '--config', 'macroscopic.yaml'), 2)

    def test_josephson_ac(self):
        out = self.path('ac.csv')
        self.assertEqual(self.run_cli('josephson', '--config', 'josephson.yaml', '--mode', 'ac', '--n', '32',
                                      '--out', out), 0)
        self.assertEqual(len(pd.read_csv(out)), 32)
        self.assertEqual(self.run_cli('josephson', '--config', 'josephson.yaml', '--mode', 'ac',
                                      '--velocity', '0', '1'), 2)
        self.assertEqual(self.run_cli('josephson', '--config', 'josephson.yaml', '--mode', 'ac',
                                      '--velocity', '1e7', '0'), 2)

    def test_oracle_mutation(self):
        out = self.path('oracle.json')
        with mock.patch('dce.oracle.checks.suite', return_value=[(oracle_normalization, ())]), \
                mock.patch('dce.models.kernels.KERNEL_NORMALIZATION', 1.01):
            code = self.run_cli('oracle', '--format', 'json', '--out', out)
        self.assertEqual(code, 5)
        with open(out) as f:
            report = json.load(f)
        self.assertFalse(report['passed'])
        self.assertEqual(report['checks'][0]['name'], 'normalization')

    def test_oracle(self):
        out = self.path('oracle.json')
        self.assertEqual(self.run_cli('oracle', '--format', 'json', '--out', out), 5)
        with open(out) as f:
            report = json.load(f)
        passed = {c['name']: c['passed'] for c in report['checks']}
        self.assertFalse(passed['gradient_published[H=1]'])
        self.assertFalse(passed['decoupling[QH=20]'])
        for name in ('normalization', 'static_curvature[H=1]', 'gradient_coefficient[H=1]',
                     'continuation[H=1,x=-0.5]', 'decoupling_power_law[QH=20]', 'cross_decoupling[QH=20]',
                     'dual_quadrature[Q2=1,H=2]', 'dissipation[q=1,omega=1.04]'):
            self.assertTrue(passed[name], name)

    def test_usage_errors(self):
        self.assertEqual(main(['no-such-command']), 2)
        self.assertEqual(main(['kernel', '--threads', '0']), 2)


if __name__ == '__main__':
    unittest.main()
