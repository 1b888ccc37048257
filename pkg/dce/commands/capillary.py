import numpy as np
import pandas as pd

from dce.models import response
from dce.models.kernels import B_PUBLISHED
from dce.numerics import units
from dce.scenarios.config import load_scenario
from dce.utils.decorators import cli_command
from dce.utils.errors import ConfigError
from dce.utils.tables import write_table


def capillary_table(H, sigma, B=B_PUBLISHED):
    cap = response.capillary_corrections(H, sigma, B)
    rows = [('delta_rho', cap.delta_rho, units.unit_name(units.AREAL_DENSITY)),
            ('delta_sigma', cap.delta_sigma, units.unit_name(units.SURFACE_TENSION)),
            ('relative_speed_shift', cap.relative_speed_shift, units.unit_name(units.DIMENSIONLESS))]
    return pd.DataFrame(rows, columns=['observable', 'value', 'unit'])


@cli_command
def run_capillary(args):
    H, sigma, B = args.H, args.sigma, args.B
    if args.config is not None:
        cfg = load_scenario(args.config)
        H = cfg.geometry.H if H is None else H
        sigma = cfg.material.sigma if sigma is None else sigma
        B = cfg.B if B is None else B
    if H is None or sigma is None:
        raise ConfigError('capillary needs --H and --sigma, or a scenario with both')
    if not (H > 0 and not np.isnan(H)):
        raise ConfigError('separation must be > 0, got {}'.format(H))
    write_table(capillary_table(H, sigma, B_PUBLISHED if B is None else B), args.out, args.format)
