import copy
import os
import tempfile
import unittest

import numpy as np
import yaml

from dce.scenarios import config as scenario_config
from dce.scenarios.config import ScenarioConfig, load_scenario, scale_scenario, set_dotted, parse_quantity
from dce.scenarios.observables import evaluate_scenario, anchor_report
from dce.numerics import units
from dce.numerics.quadrature import QuadratureSpec
from dce.utils.errors import ConfigError

SINGLE = {
    'name': 'single',
    'plate': {'wavelength': {'value': 1e-3, 'unit': 'm'}, 'amplitude': {'value': 1e-3, 'unit': 'm'}},
    'area': {'value': 1., 'unit': 'm^2'},
    'material': {'density': {'value': 15000., 'unit': 'kg/m^3'}, 'thickness': {'value': 1e-3, 'unit': 'm'}},
    'drive': {'omega_over_ck': 2.},
}


def observables(table):
    return dict(zip(table['observable'], table['value']))


class TestParsing(unittest.TestCase):

    def test_quantity(self):
        self.assertEqual(parse_quantity({'value': '1e-3', 'unit': 'm'}, units.LENGTH, 'x'), 1e-3)
        self.assertEqual(parse_quantity(2, units.DIMENSIONLESS, 'x'), 2.)
        self.assertRaises(ConfigError, parse_quantity, {'value': 1., 'unit': 'cm'}, units.LENGTH, 'x')
        self.assertRaises(ConfigError, parse_quantity, 1., units.LENGTH, 'x')
        self.assertRaises(ConfigError, parse_quantity, {'value': 'abc', 'unit': 'm'}, units.LENGTH, 'x')

    def test_from_dict(self):
        cfg = ScenarioConfig.from_dict(SINGLE)
        self.assertAlmostEqual(cfg.plate.wavelength, 1e-3)
        self.assertTrue(cfg.geometry.single_plate)
        self.assertIsNone(cfg.facing_plate)
        self.assertAlmostEqual(cfg.drive_omega, 2 * units.CONSTANTS.c * 2 * np.pi / 1e-3)

    def test_round_trip_file_format(self):
        cfg = load_scenario('josephson.yaml')
        again = ScenarioConfig.from_dict(cfg.to_dict())
        self.assertAlmostEqual(again.plate.wavelength / cfg.plate.wavelength, 1., places=12)
        self.assertAlmostEqual(again.facing_plate.alpha, cfg.facing_plate.alpha)
        self.assertEqual(again.geometry, cfg.geometry)
        self.assertEqual(again.material, cfg.material)
        self.assertEqual(again.B, cfg.B)

    def test_errors(self):
        raw = copy.deepcopy(SINGLE)
        raw['plate']['amplitude']['unit'] = 'mm'
        self.assertRaises(ConfigError, ScenarioConfig.from_dict, raw)
        raw = copy.deepcopy(SINGLE)
        del raw['material']
        self.assertRaises(ConfigError, ScenarioConfig.from_dict, raw)
        raw = copy.deepcopy(SINGLE)
        raw['facing_plate'] = {'amplitude': {'value': 1e-3, 'unit': 'm'}}
        self.assertRaises(ConfigError, ScenarioConfig.from_dict, raw)
        raw = copy.deepcopy(SINGLE)
        raw['area']['value'] = -1.
        self.assertRaises(ConfigError, ScenarioConfig.from_dict, raw)
        self.assertRaises(ConfigError, load_scenario, 'no_such_scenario.yaml')

    def test_grids_and_tolerances(self):
        raw = copy.deepcopy(SINGLE)
        raw['grids'] = {'q': {'start': {'value': 0., 'unit': '1/m'}, 'stop': {'value': 1e4, 'unit': '1/m'}, 'n': 5},
                        'omega': {'start': {'value': 1e9, 'unit': 'rad/s'}, 'stop': {'value': 2e9, 'unit': 'rad/s'},
                                  'n': '3'}}
        raw['tolerances'] = {'rel_tol': '1e-10', 'max_subdivisions': 500}
        cfg = ScenarioConfig.from_dict(raw)
        np.testing.assert_allclose(cfg.grids.q.values, [0., 2.5e3, 5e3, 7.5e3, 1e4])
        np.testing.assert_allclose(cfg.grids.omega.values, [1e9, 1.5e9, 2e9])
        self.assertEqual(cfg.tolerances, QuadratureSpec(rel_tol=1e-10, max_subdivisions=500))
        self.assertEqual(scenario_config.quadrature_spec(cfg, 1e-6), cfg.tolerances)
        self.assertEqual(scenario_config.quadrature_spec(ScenarioConfig.from_dict(SINGLE), 1e-6).rel_tol, 1e-6)

        again = ScenarioConfig.from_dict(cfg.to_dict())
        self.assertEqual(again.grids, cfg.grids)
        self.assertEqual(again.tolerances, cfg.tolerances)
        scaled = scale_scenario(cfg, 10.)
        self.assertAlmostEqual(scaled.grids.q.stop, 1e3)
        self.assertEqual(scaled.grids.omega.n, 3)

        for key, bad in (('tolerances', {'rel_tol': 0.}), ('tolerances', {'order': 3}),
                         ('grids', {'q': raw['grids']['q']}),
                         ('grids', dict(raw['grids'], q=dict(raw['grids']['q'], n=2.5))),
                         ('grids', dict(raw['grids'], q=dict(raw['grids']['q'], n=0)))):
            broken = copy.deepcopy(raw)
            broken[key] = bad
            self.assertRaises(ConfigError, ScenarioConfig.from_dict, broken)

    def test_set_dotted(self):
        raw = copy.deepcopy(SINGLE)
        set_dotted(raw, 'plate.amplitude.value', 1e-4)
        set_dotted(raw, 'drive.omega_over_ck', 10.)
        cfg = ScenarioConfig.from_dict(raw)
        self.assertEqual(cfg.plate.d, 1e-4)
        self.assertEqual(cfg.drive_over_ck, 10.)
        self.assertEqual(set_dotted({}, 'a.b', 1), {'a': {'b': 1}})

    def test_load_from_path(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'single.yaml')
            with open(path, 'w') as f:
                yaml.safe_dump(SINGLE, f)
            cfg = load_scenario(path, {'area.value': 2.})
        self.assertEqual(cfg.geometry.A, 2.)
        self.assertEqual(cfg.name, 'single')


class TestPresets(unittest.TestCase):

    def test_macroscopic(self):
        cfg = load_scenario('macroscopic.yaml')
        table = evaluate_scenario(cfg)
        values = observables(table)
        self.assertAlmostEqual(values['dm_over_m'] / 8.07e-35, 1., delta=5e-3)
        self.assertGreaterEqual(values['decay_time'], 1e18)
        self.assertEqual(values['dm_perp'], 0.)
        report = anchor_report(table, cfg.anchors)
        self.assertTrue(report['within_factor'].all())

    def test_atomic(self):
        cfg = load_scenario('atomic.yaml')
        report = anchor_report(evaluate_scenario(cfg), cfg.anchors)
        self.assertEqual(list(report['observable']), ['dm_over_m'])
        self.assertTrue(report['within_factor'].all())

    def test_mercury(self):
        cfg = load_scenario('mercury.yaml')
        table = evaluate_scenario(cfg)
        values = observables(table)
        self.assertLess(values['relative_speed_shift'], 0.)
        self.assertLess(values['dm_par_two_plate'], 0.)
        self.assertTrue(anchor_report(table, cfg.anchors)['within_factor'].all())
        self.assertEqual(set(table.columns), {'observable', 'value', 'unit'})

    def test_josephson(self):
        values = observables(evaluate_scenario(load_scenario('josephson.yaml')))
        self.assertGreater(values['residual_force'], 0.)
        self.assertAlmostEqual(values['josephson_energy'] / values['residual_force'], 0., places=12)

    def test_missing_anchor_is_skipped(self):
        table = evaluate_scenario(ScenarioConfig.from_dict(SINGLE))
        self.assertEqual(len(anchor_report(table, {'no_such_observable': 1.})), 0)


class TestScaling(unittest.TestCase):

    def test_decay_time_slope(self):
        cfg = ScenarioConfig.from_dict(SINGLE)
        scales = np.array([1., 10., 100., 1000.])
        taus = [observables(evaluate_scenario(scale_scenario(cfg, s)))['decay_time'] for s in scales]
        slope = np.polyfit(np.log(scales), np.log(taus), 1)[0]
        self.assertAlmostEqual(slope, 5., delta=0.01)

    def test_scale_keeps_drive_ratio(self):
        cfg = ScenarioConfig.from_dict(SINGLE)
        scaled = scale_scenario(cfg, 10.)
        self.assertEqual(scaled.drive_over_ck, cfg.drive_over_ck)
        self.assertAlmostEqual(scaled.material.thickness, 1e-2)
        self.assertRaises(ValueError, scale_scenario, cfg, 0.)

    def test_anchor_factor(self):
        self.assertEqual(scenario_config.ANCHOR_FACTOR, 3.)


if __name__ == '__main__':
    unittest.main()
