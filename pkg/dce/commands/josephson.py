"""
Lateral force between two plates corrugated at the same wavevector.
"""
import numpy as np
import pandas as pd

from dce import logger
from dce.models import response
from dce.numerics.quadrature import QuadratureSpec
from dce.scenarios.config import load_scenario
from dce.utils.decorators import cli_command
from dce.utils.errors import ConfigError
from dce.utils.tables import write_table


def dc_table(cfg, n, spec=None):
    plate, facing, geometry = cfg.plate, cfg.facing_plate, cfg.geometry
    alpha = np.linspace(0., 2 * np.pi, n, endpoint=False)
    force = response.josephson_dc(plate.k, plate.d, facing.d, alpha, geometry.A, geometry.H, spec)
    energy = response.josephson_energy(plate.k, plate.d, facing.d, alpha, geometry.A, geometry.H, spec)
    return pd.DataFrame({'alpha [rad]': alpha, 'force_x [N]': force[:, 0], 'force_y [N]': force[:, 1],
                         'energy [J]': energy})


def ac_table(cfg, velocity, n, periods, spec=None):
    plate, facing, geometry = cfg.plate, cfg.facing_plate, cfg.geometry
    frequency = response.josephson_frequency(plate.k, velocity)
    if frequency == 0:
        raise ConfigError('sliding perpendicular to k produces no oscillating force')
    logger.info('sliding force oscillates at {:.6e} rad/s'.format(abs(frequency)))
    t = np.linspace(0., periods * 2 * np.pi / abs(frequency), n, endpoint=False)
    force = response.josephson_ac(plate.k, plate.d, facing.d, velocity, geometry.A, geometry.H, t, spec)
    return pd.DataFrame({'t [s]': t, 'force_x [N]': force[:, 0], 'force_y [N]': force[:, 1]})


@cli_command
def run_josephson(args):
    if args.config is None:
        raise ConfigError('josephson needs --config with a facing plate')
    cfg = load_scenario(args.config)
    if cfg.facing_plate is None:
        raise ConfigError('scenario {} has no facing plate'.format(cfg.name))
    spec = QuadratureSpec(rel_tol=args.rel_tol)
    if args.mode == 'dc':
        table = dc_table(cfg, args.n, spec)
    else:
        table = ac_table(cfg, np.asarray(args.velocity, dtype=float), args.n, args.periods, spec)
    write_table(table, args.out, args.format)
