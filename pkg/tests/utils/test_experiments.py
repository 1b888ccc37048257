import os
import tempfile
import unittest
from unittest import mock

import numpy as np
import pandas as pd
import yaml

from dce import config as paths
from dce.utils.decorators import cli_command
from dce.utils.errors import ConfigError, NonConvergenceError, OracleFailure
from dce.utils.experiments import expand_grid, load_grid, check_for_completed_experiment
from dce.utils.tables import json_safe, render_table
from dce.utils.utils import get_args, length_or_inf


class TestGrid(unittest.TestCase):

    def test_expand_grid(self):
        grid = expand_grid({'b': [1, 2], 'a': ['x', 'y', 'z']})
        self.assertEqual(len(grid), 6)
        self.assertEqual(list(grid[0].keys()), ['a', 'b'])
        self.assertEqual(grid[0], {'a': 'x', 'b': 1})
        self.assertEqual(expand_grid({}), [{}])

    def test_load_grid(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'sweep.yaml')
            with open(path, 'w') as f:
                yaml.safe_dump({'base': 'macroscopic.yaml', 'drive.omega_over_ck': [2., 10.]}, f)
            base, params = load_grid(path)
            self.assertEqual(base, 'macroscopic.yaml')
            self.assertEqual(params, {'drive.omega_over_ck': [2., 10.]})

            with open(path, 'w') as f:
                yaml.safe_dump({'drive.omega_over_ck': [2.]}, f)
            self.assertRaises(ConfigError, load_grid, path)

            with open(path, 'w') as f:
                yaml.safe_dump({'base': 'macroscopic.yaml', 'drive.omega_over_ck': 2.}, f)
            self.assertRaises(ConfigError, load_grid, path)

    def test_duplicate_lookup(self):
        db = {'runs': mock.MagicMock()}
        db['runs'].find_one.return_value = None
        self.assertIsNone(check_for_completed_experiment(db, {'name': 'x'}))
        db['runs'].find_one.assert_called_once_with({'config': {'name': 'x'}, 'status': 'COMPLETED'})


class TestTables(unittest.TestCase):

    def test_json_safe(self):
        df = pd.DataFrame({'a': [np.float64(1.5), np.inf], 'b': ['x', 'y']})
        self.assertEqual(json_safe(df), [{'a': 1.5, 'b': 'x'}, {'a': 'inf', 'b': 'y'}])
        self.assertEqual(json_safe({'n': np.int64(3), 'f': [np.nan, -np.inf], 't': np.bool_(True)}),
                         {'n': 3, 'f': ['nan', '-inf'], 't': True})

    def test_render(self):
        text = render_table(pd.DataFrame({'x': [0.5]}))
        self.assertEqual(text.splitlines(), ['x', '5.00000000e-01'])
        self.assertRaises(ValueError, render_table, pd.DataFrame(), 'xml')


class TestCommandDecorator(unittest.TestCase):

    def test_exit_codes(self):
        def failing(error):
            @cli_command
            def command(args):
                raise error
            return command(None)

        self.assertEqual(failing(ConfigError('bad')), 2)
        self.assertEqual(failing(NonConvergenceError('slow')), 3)
        self.assertEqual(failing(OracleFailure(['a'])), 5)
        self.assertEqual(failing(ValueError('bad value')), 2)
        self.assertEqual(cli_command(lambda args: None)(None), 0)


class TestPaths(unittest.TestCase):

    def test_working_paths(self):
        self.assertEqual(sorted(paths), ['config', 'db', 'logs'])
        self.assertTrue(os.path.isdir(paths['config']))
        self.assertEqual(paths['db'], 'DCE')


class TestArgs(unittest.TestCase):

    def test_defaults(self):
        args = get_args(['kernel'])
        self.assertEqual(args.q, [1.])
        self.assertEqual(args.H, np.inf)
        self.assertEqual(args.rel_tol, 1e-8)
        self.assertEqual(args.format, 'csv')
        args = get_args(['scenario', '--config', 'x.yaml', '--grid_search'])
        self.assertTrue(args.grid_search)
        self.assertEqual(args.observer, 'none')

    def test_length(self):
        self.assertEqual(length_or_inf('inf'), np.inf)
        self.assertEqual(length_or_inf('2.5'), 2.5)


if __name__ == '__main__':
    unittest.main()
