"""
Observables of a scenario as a long table (observable, value, unit).
"""
import numpy as np
import pandas as pd

from dce import logger
from dce.models import response
from dce.numerics import units
from dce.scenarios.config import ANCHOR_FACTOR

COLUMNS = ['observable', 'value', 'unit']


def plate_mass(material, A):
    return material.plate_mass(A)


def evaluate_scenario(config, spec=None):
    """
    :param config: ScenarioConfig
    :param spec: QuadratureSpec for the kernel path observables
    :return: pd.DataFrame with columns observable, value, unit
    """
    rows = []

    def add(name, value, dims):
        rows.append((name, float(value), units.unit_name(dims)))

    plate, geometry = config.plate, config.geometry
    M = plate_mass(config.material, geometry.A)
    add('plate_mass', M, units.MASS)

    single = response.mass_correction_single(plate, geometry.A)
    add('dm_par_single', single.dm_par, units.MASS)
    add('dm_perp', single.dm_perp, units.MASS)
    add('dm_over_m', single.dm_par / M, units.DIMENSIONLESS)

    if not geometry.single_plate:
        two = response.mass_correction_two_plate(plate, geometry.A, geometry.H, config.B)
        add('dm_par_two_plate', two.dm_par, units.MASS)
        add('two_plate_enhancement', two.enhancement, units.DIMENSIONLESS)
        kernel = response.mass_correction_kernel(plate, geometry.A, geometry.H, spec)
        add('dm_par_kernel', kernel.dm_par, units.MASS)
        add('resonance_threshold', response.resonance_threshold(plate.k_mag, geometry.H, units.CONSTANTS.c),
            units.ANGULAR_FREQUENCY)

    omega = config.drive_omega
    if omega is not None:
        add('drive_omega', omega, units.ANGULAR_FREQUENCY)
        visc = response.shear_viscosity(plate, geometry.A, omega, geometry.H, spec)
        add('eta_par', visc.eta_par, units.VISCOSITY)
        add('eta_perp', visc.eta_perp, units.VISCOSITY)
        add('eta_par_asymptotic', response.shear_viscosity_asymptotic(plate, geometry.A, omega).eta_par,
            units.VISCOSITY)
        add('decay_time', response.decay_time(M, visc.eta_par), units.TIME)
        logger.info('{}: drive at {:.3g} ck is in the {} regime'.format(config.name, config.drive_over_ck,
                                                                      visc.valid_regime))

    if config.facing_plate is not None:
        force = response.residual_force(plate, config.facing_plate, geometry, spec)
        add('residual_force', np.hypot(*force), units.FORCE)
        energy = response.josephson_energy(plate.k, plate.d, config.facing_plate.d,
                                           config.facing_plate.alpha - plate.alpha, geometry.A, geometry.H, spec)
        add('josephson_energy', energy, units.ENERGY)

    if config.material.sigma is not None and not geometry.single_plate:
        cap = response.capillary_corrections(geometry.H, config.material.sigma, config.B)
        add('delta_rho', cap.delta_rho, units.AREAL_DENSITY)
        add('delta_sigma', cap.delta_sigma, units.SURFACE_TENSION)
        add('relative_speed_shift', cap.relative_speed_shift, units.DIMENSIONLESS)

    return pd.DataFrame(rows, columns=COLUMNS)


def anchor_report(table, anchors, factor=ANCHOR_FACTOR):
    """
    Compare observables with expected orders of magnitude.

    :return: pd.DataFrame with columns observable, value, expected, ratio, within_factor
    """
    values = dict(zip(table['observable'], table['value']))
    rows = []
    for name, expected in sorted(anchors.items()):
        if name not in values:
            logger.warning('anchor {} has no matching observable'.format(name))
            continue
        ratio = abs(values[name] / expected) if expected != 0 else np.inf
        rows.append((name, values[name], expected, ratio, bool(1. / factor <= ratio <= factor)))
    return pd.DataFrame(rows, columns=['observable', 'value', 'expected', 'ratio', 'within_factor'])
