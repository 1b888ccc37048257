"""
Scenario files: a corrugated plate, an optional facing plate, its material and a drive.

Every dimensional scalar is written as {value: <number>, unit: <SI unit>}. PyYAML reads
numbers like 1e-3 as strings, so values are coerced with float.
"""
import copy
import os
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
import yaml

from dce import config as paths
from dce.models.kernels import B_PUBLISHED
from dce.models.response import CorrugationSpec, PlateGeometry, MaterialSpec
from dce.numerics.quadrature import QuadratureSpec
from dce.numerics import units
from dce.utils.errors import ConfigError

ANCHOR_FACTOR = 3.


def parse_quantity(entry, dims, where):
    """
    :param entry: {value, unit} mapping, or a bare number for dimensionless fields
    :param dims: expected unit dimensions
    :param where: dotted key, used in error messages
    :return: float in SI units
    """
    expected = units.unit_name(dims)
    if isinstance(entry, dict):
        if 'value' not in entry or 'unit' not in entry:
            raise ConfigError('{}: expected a mapping with value and unit'.format(where))
        if str(entry['unit']).strip() != expected:
            raise ConfigError('{}: unit {!r} does not match the expected unit {!r}'.format(where, entry['unit'], expected))
        raw = entry['value']
    elif dims == units.DIMENSIONLESS:
        raw = entry
    else:
        raise ConfigError('{}: dimensional value needs {{value, unit: {}}}'.format(where, expected))
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ConfigError('{}: {!r} is not a number'.format(where, raw))
    if np.isnan(value):
        raise ConfigError('{}: value is nan'.format(where))
    return value


def quantity(value, dims):
    return {'value': float(value), 'unit': units.unit_name(dims)}


@dataclass(frozen=True)
class GridAxis:
    """
    n equally spaced SI values from start to stop.
    """
    start: float
    stop: float
    n: int

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError('a grid needs n >= 1 points, got {}'.format(self.n))
        if self.start < 0 or self.stop < self.start:
            raise ValueError('grid range [{}, {}] must satisfy 0 <= start <= stop'.format(self.start, self.stop))

    @property
    def values(self):
        return np.linspace(self.start, self.stop, int(self.n))


@dataclass(frozen=True)
class KernelGrid:
    q: GridAxis
    omega: GridAxis


@dataclass(frozen=True)
class ScenarioConfig:
    """
    :param plate: CorrugationSpec of the plate whose response is computed
    :param geometry: PlateGeometry (area, separation; separation inf for a single plate)
    :param material: MaterialSpec of the plate (and of the liquid surface tension when given)
    :param facing_plate: CorrugationSpec of the second plate or None for a flat one
    :param drive_over_ck: drive frequency in units of c |k|
    :param B: gradient coefficient used by the closed form two plate observables
    :param anchors: observable name -> expected order of magnitude
    :param grids: KernelGrid of wavenumbers and frequencies (SI) for kernel tables, or None
    :param tolerances: QuadratureSpec of the kernel quadratures, or None for the command line default
    """
    name: str
    plate: CorrugationSpec
    geometry: PlateGeometry
    material: MaterialSpec
    facing_plate: Optional[CorrugationSpec] = None
    drive_over_ck: Optional[float] = None
    B: float = B_PUBLISHED
    anchors: dict = field(default_factory=dict, compare=False)
    grids: Optional[KernelGrid] = None
    tolerances: Optional[QuadratureSpec] = None

    @property
    def drive_omega(self):
        if self.drive_over_ck is None:
            return None
        return self.drive_over_ck * units.CONSTANTS.c * self.plate.k_mag

    def to_dict(self):
        """Inverse of from_dict, in the file format."""
        out = {
            'name': self.name,
            'plate': _plate_to_dict(self.plate),
            'area': quantity(self.geometry.A, units.AREA),
            'separation': quantity(self.geometry.H, units.LENGTH),
            'material': {'density': quantity(self.material.rho, units.DENSITY),
                         'thickness': quantity(self.material.thickness, units.LENGTH)},
            'B': float(self.B),
            'anchors': dict(self.anchors),
        }
        if self.material.sigma is not None:
            out['material']['surface_tension'] = quantity(self.material.sigma, units.SURFACE_TENSION)
        if self.facing_plate is not None:
            out['facing_plate'] = {'amplitude': quantity(self.facing_plate.d, units.LENGTH),
                                   'phase': float(self.facing_plate.alpha)}
        if self.drive_over_ck is not None:
            out['drive'] = {'omega_over_ck': float(self.drive_over_ck)}
        if self.grids is not None:
            out['grids'] = {'q': _axis_to_dict(self.grids.q, units.WAVENUMBER),
                            'omega': _axis_to_dict(self.grids.omega, units.ANGULAR_FREQUENCY)}
        if self.tolerances is not None:
            out['tolerances'] = {'rel_tol': float(self.tolerances.rel_tol),
                                 'abs_tol': float(self.tolerances.abs_tol),
                                 'max_subdivisions': int(self.tolerances.max_subdivisions)}
        return out

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise ConfigError('a scenario must be a mapping, got {}'.format(type(raw).__name__))
        try:
            plate = _parse_plate(_section(raw, 'plate'), 'plate')
            geometry = PlateGeometry(A=parse_quantity(_section(raw, 'area'), units.AREA, 'area'),
                                     H=parse_quantity(raw.get('separation', quantity(np.inf, units.LENGTH)),
                                                      units.LENGTH, 'separation'))
            mat = _section(raw, 'material')
            sigma = mat.get('surface_tension')
            material = MaterialSpec(rho=parse_quantity(_section(mat, 'density'), units.DENSITY, 'material.density'),
                                    thickness=parse_quantity(_section(mat, 'thickness'), units.LENGTH,
                                                             'material.thickness'),
                                    sigma=None if sigma is None else parse_quantity(
                                        sigma, units.SURFACE_TENSION, 'material.surface_tension'))
            facing = None
            if raw.get('facing_plate') is not None:
                f = raw['facing_plate']
                facing = CorrugationSpec(d=parse_quantity(_section(f, 'amplitude'), units.LENGTH, 'facing_plate.amplitude'),
                                         k=plate.k, alpha=parse_quantity(f.get('phase', 0.), units.DIMENSIONLESS,
                                                                         'facing_plate.phase'))
            drive_over_ck = _parse_drive(raw.get('drive'), plate)
            anchors = {str(k): parse_quantity(v, units.DIMENSIONLESS, 'anchors.' + str(k))
                       for k, v in (raw.get('anchors') or {}).items()}
            B = parse_quantity(raw.get('B', B_PUBLISHED), units.DIMENSIONLESS, 'B')
            grids = _parse_grids(raw.get('grids'))
            tolerances = _parse_tolerances(raw.get('tolerances'))
        except ValueError as e:
            raise ConfigError(str(e))
        if facing is not None and np.isinf(geometry.H):
            raise ConfigError('a facing plate needs a finite separation')
        return cls(name=str(raw.get('name', 'scenario')), plate=plate, geometry=geometry, material=material,
                   facing_plate=facing, drive_over_ck=drive_over_ck, B=B, anchors=anchors,
                   grids=grids, tolerances=tolerances)


def _section(raw, key):
    if not isinstance(raw, dict) or raw.get(key) is None:
        raise ConfigError('missing required entry {!r}'.format(key))
    return raw[key]


def _parse_plate(raw, where):
    wavelength = parse_quantity(_section(raw, 'wavelength'), units.LENGTH, where + '.wavelength')
    if not wavelength > 0:
        raise ConfigError('{}.wavelength must be > 0'.format(where))
    direction = np.asarray(raw.get('direction', [1., 0.]), dtype=float)
    if direction.shape != (2,) or not np.hypot(*direction) > 0:
        raise ConfigError('{}.direction must be a non-zero 2-vector'.format(where))
    k = 2 * np.pi / wavelength * direction / np.hypot(*direction)
    return CorrugationSpec(d=parse_quantity(_section(raw, 'amplitude'), units.LENGTH, where + '.amplitude'),
                           k=tuple(k), alpha=parse_quantity(raw.get('phase', 0.), units.DIMENSIONLESS, where + '.phase'))


def _plate_to_dict(c):
    return {'wavelength': quantity(c.wavelength, units.LENGTH),
            'amplitude': quantity(c.d, units.LENGTH),
            'direction': [float(x) for x in c.k_hat],
            'phase': float(c.alpha)}


def _parse_drive(raw, plate):
    if raw is None:
        return None
    if 'omega_over_ck' in raw:
        ratio = parse_quantity(raw['omega_over_ck'], units.DIMENSIONLESS, 'drive.omega_over_ck')
    elif 'omega' in raw:
        omega = parse_quantity(raw['omega'], units.ANGULAR_FREQUENCY, 'drive.omega')
        ratio = omega / (units.CONSTANTS.c * plate.k_mag)
    else:
        raise ConfigError('drive needs omega_over_ck or omega')
    if not ratio >= 0:
        raise ConfigError('drive frequency must be >= 0')
    return ratio


def _parse_axis(raw, dims, where):
    if not isinstance(raw, dict):
        raise ConfigError('{}: expected a mapping with start, stop and n'.format(where))
    n = parse_quantity(_section(raw, 'n'), units.DIMENSIONLESS, where + '.n')
    if n != int(n):
        raise ConfigError('{}.n must be an integer, got {}'.format(where, n))
    return GridAxis(start=parse_quantity(_section(raw, 'start'), dims, where + '.start'),
                    stop=parse_quantity(_section(raw, 'stop'), dims, where + '.stop'),
                    n=int(n))


def _parse_grids(raw):
    if raw is None:
        return None
    return KernelGrid(q=_parse_axis(_section(raw, 'q'), units.WAVENUMBER, 'grids.q'),
                      omega=_parse_axis(_section(raw, 'omega'), units.ANGULAR_FREQUENCY, 'grids.omega'))


def _axis_to_dict(axis, dims):
    return {'start': quantity(axis.start, dims), 'stop': quantity(axis.stop, dims), 'n': int(axis.n)}


def _parse_tolerances(raw):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ConfigError('tolerances must be a mapping')
    unknown = set(raw) - {'rel_tol', 'abs_tol', 'max_subdivisions'}
    if unknown:
        raise ConfigError('unknown tolerance entries {}'.format(sorted(unknown)))
    fields = {k: parse_quantity(v, units.DIMENSIONLESS, 'tolerances.' + k) for k, v in raw.items()}
    if 'max_subdivisions' in fields:
        fields['max_subdivisions'] = int(fields['max_subdivisions'])
    return QuadratureSpec(**fields)


def quadrature_spec(config, rel_tol):
    """
    The scenario's tolerances when it declares them, else a QuadratureSpec at rel_tol.
    """
    if config is not None and config.tolerances is not None:
        return config.tolerances
    return QuadratureSpec(rel_tol=rel_tol)


def set_dotted(raw, key, value):
    """
    Assign value at a dotted key (plate.amplitude.value) of a nested mapping, in place.
    """
    node = raw
    parts = key.split('.')
    for part in parts[:-1]:
        if not isinstance(node.get(part), dict):
            node[part] = {}
        node = node[part]
    node[parts[-1]] = value
    return raw


def load_raw(path):
    if not os.path.exists(path):
        candidate = os.path.join(paths['config'], path)
        if os.path.exists(candidate):
            path = candidate
        else:
            raise ConfigError('scenario file {} not found'.format(path))
    try:
        with open(path) as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError('cannot parse {}: {}'.format(path, e))
    if raw is None:
        raise ConfigError('{} is empty'.format(path))
    return raw


def load_scenario(path, overrides=None):
    """
    Read a scenario file.

    :param path: str
        path of the yaml file, or a file name under the config directory
    :param overrides: dict of dotted keys to values, applied before parsing
    :return: ScenarioConfig
    """
    raw = copy.deepcopy(load_raw(path))
    for k, v in (overrides or {}).items():
        set_dotted(raw, k, v)
    return ScenarioConfig.from_dict(raw)


def scale_scenario(config, s):
    """
    Multiply every length of the scenario by s; the drive stays at the same multiple of c k
    and the kernel grids shrink by 1/s.
    """
    if not (np.isfinite(s) and s > 0):
        raise ValueError('scale factor must be positive, got {}'.format(s))
    grids = config.grids
    if grids is not None:
        grids = KernelGrid(q=GridAxis(grids.q.start / s, grids.q.stop / s, grids.q.n),
                           omega=GridAxis(grids.omega.start / s, grids.omega.stop / s, grids.omega.n))
    return replace(config,
                   grids=grids,
                   plate=config.plate.scaled(s),
                   facing_plate=None if config.facing_plate is None else config.facing_plate.scaled(s),
                   geometry=config.geometry.scaled(s),
                   material=config.material.scaled(s))
