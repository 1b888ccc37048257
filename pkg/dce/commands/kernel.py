"""
Kernel tables in natural units (hbar = c = 1, lengths in units of the reference length).
"""
import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from dce import logger
from dce.models.kernels import KernelPoint, classify_region, kernel_pair
from dce.models.response import natural_scale
from dce.numerics import units
from dce.scenarios.config import load_scenario, quadrature_spec
from dce.utils.decorators import cli_command
from dce.utils.tables import write_table

KERNEL_COLUMNS = ['q [1/L0]', 'omega [c/L0]', 'H [L0]', 'Q2 [1/L0^2]', 'region',
                  'a_plus_status', 'a_plus_re [1/L0^5]', 'a_plus_im [1/L0^5]',
                  'a_minus_status', 'a_minus_re [1/L0^5]', 'a_minus_im [1/L0^5]']
REGION_COLUMNS = ['q [1/L0]', 'omega [c/L0]', 'region']


def kernel_row(q, omega, H, spec):
    point = KernelPoint(q, omega, H)
    pair = kernel_pair(point, spec)
    return (q, omega, H, point.Q2, str(classify_region(point)),
            pair.a_plus.status, pair.a_plus.re, pair.a_plus.im,
            pair.a_minus.status, pair.a_minus.re, pair.a_minus.im)


def kernel_table(qs, omegas, H, spec=None, threads=1, progress=False):
    """
    Kernels on the cartesian product of qs and omegas; rows in (q, omega) order for any
    number of threads.
    """
    points = [(q, w) for q in qs for w in omegas]
    rows = Parallel(n_jobs=threads)(delayed(kernel_row)(q, w, H, spec)
                                    for q, w in tqdm(points, disable=not progress))
    return pd.DataFrame(rows, columns=KERNEL_COLUMNS)


def region_table(H, q_max, omega_max, n):
    qs = np.linspace(0., q_max, n)
    omegas = np.linspace(0., omega_max, n)
    rows = [(q, w, str(classify_region(KernelPoint(q, w, H)))) for q in qs for w in omegas]
    return pd.DataFrame(rows, columns=REGION_COLUMNS)


def scenario_grid(cfg):
    """
    (qs, omegas, H) of a scenario in the natural units of its plate. The grid is the
    scenario's kernel grid, or the point (k, drive) when it has none.
    """
    scale = natural_scale(cfg.plate)
    if cfg.grids is not None:
        qs, omegas = cfg.grids.q.values, cfg.grids.omega.values
    else:
        qs, omegas = [cfg.plate.k_mag], [cfg.drive_omega or 0.]
    H = cfg.geometry.H
    logger.info('scenario {}: L0 = {:.6e} m'.format(cfg.name, scale.L0))
    return ([scale.to_natural(q, units.WAVENUMBER) for q in qs],
            [scale.to_natural(w, units.ANGULAR_FREQUENCY) for w in omegas],
            np.inf if np.isinf(H) else scale.to_natural(H, units.LENGTH))


@cli_command
def run_kernel(args):
    if args.config is not None:
        cfg = load_scenario(args.config)
        qs, omegas, H = scenario_grid(cfg)
        spec = quadrature_spec(cfg, args.rel_tol)
    else:
        qs, omegas, H = args.q, args.omega, args.H
        spec = quadrature_spec(None, args.rel_tol)
    logger.info('kernel table on {} x {} points, H={}'.format(len(qs), len(omegas), H))
    table = kernel_table(qs, omegas, H, spec, args.threads, progress=args.out is not None)
    write_table(table, args.out, args.format)


@cli_command
def run_region_map(args):
    write_table(region_table(args.H, args.q_max, args.omega_max, args.n), args.out, args.format)
