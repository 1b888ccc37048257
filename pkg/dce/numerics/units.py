"""
Physical constants and the natural-unit layer.

Kernel math runs with hbar = c = 1 and lengths measured in a reference length L0.
A dimensional quantity x with dimensions L^a hbar^b c^d maps to the pure number
x / (L0^a hbar^b c^d) and back.
"""
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
from scipy import constants as codata

Dims = namedtuple('Dims', ['length', 'hbar', 'c'])

# exponent triples (length, hbar, c) of the quantities the package emits
LENGTH = Dims(1, 0, 0)
AREA = Dims(2, 0, 0)
WAVENUMBER = Dims(-1, 0, 0)
ANGULAR_FREQUENCY = Dims(-1, 0, 1)
VELOCITY = Dims(0, 0, 1)
TIME = Dims(1, 0, -1)
ACTION = Dims(0, 1, 0)
ENERGY = Dims(-1, 1, 1)
FORCE = Dims(-2, 1, 1)
MASS = Dims(-1, 1, -1)
AREAL_DENSITY = Dims(-3, 1, -1)
DENSITY = Dims(-4, 1, -1)
SURFACE_TENSION = Dims(-3, 1, 1)
RESPONSE = SURFACE_TENSION  # force per displacement
VISCOSITY = Dims(-2, 1, 0)
KERNEL = Dims(-5, 0, 0)
DIMENSIONLESS = Dims(0, 0, 0)

UNIT_NAMES = {
    LENGTH: 'm',
    AREA: 'm^2',
    WAVENUMBER: '1/m',
    ANGULAR_FREQUENCY: 'rad/s',
    VELOCITY: 'm/s',
    TIME: 's',
    ACTION: 'J*s',
    ENERGY: 'J',
    FORCE: 'N',
    MASS: 'kg',
    AREAL_DENSITY: 'kg/m^2',
    DENSITY: 'kg/m^3',
    SURFACE_TENSION: 'N/m',
    VISCOSITY: 'kg/s',
    KERNEL: '1/m^5',
    DIMENSIONLESS: '1',
}


@dataclass(frozen=True)
class Constants:
    hbar: float = codata.hbar
    c: float = codata.c

    def __post_init__(self):
        if not (self.hbar > 0 and self.c > 0):
            raise ValueError('hbar and c must be positive')


CONSTANTS = Constants()


def sgn(x):
    """
    Sign with sgn(0) = 0.
    """
    return float(np.sign(x))


def _as_dims(dims):
    if isinstance(dims, Dims):
        return dims
    try:
        return Dims(*dims)
    except TypeError:
        raise ValueError('dims must be an exponent triple (length, hbar, c), got {}'.format(dims))


@dataclass(frozen=True)
class NaturalScale:
    """
    Reference length L0 for the hbar = c = 1 unit system.

    :param L0: float
        reference length in metres, > 0
    :param constants: Constants
        values of hbar and c
    """
    L0: float
    constants: Constants = CONSTANTS

    def __post_init__(self):
        if not (np.isfinite(self.L0) and self.L0 > 0):
            raise ValueError('L0 must be a positive finite length, got {}'.format(self.L0))

    def unit(self, dims):
        """
        SI value of one natural unit of the given dimensions, L0^a hbar^b c^d.
        """
        a, b, d = _as_dims(dims)
        return self.L0 ** a * self.constants.hbar ** b * self.constants.c ** d

    def to_natural(self, x, dims):
        """
        :param x: float or np.array
            quantity in SI units
        :param dims: exponent triple (length, hbar, c)
        :return: the pure number x / (L0^a hbar^b c^d)
        """
        x = np.asarray(x, dtype=complex if np.iscomplexobj(x) else float)
        if not np.all(np.isfinite(x)):
            raise ValueError('non-finite quantity cannot be converted: {}'.format(x))
        out = x / self.unit(dims)
        return out.item() if out.ndim == 0 else out

    def from_natural(self, n, dims):
        """
        Inverse of to_natural.
        """
        n = np.asarray(n, dtype=complex if np.iscomplexobj(n) else float)
        if not np.all(np.isfinite(n)):
            raise ValueError('non-finite quantity cannot be converted: {}'.format(n))
        out = n * self.unit(dims)
        return out.item() if out.ndim == 0 else out


def unit_name(dims):
    return UNIT_NAMES.get(_as_dims(dims), 'm^{} (hbar)^{} (m/s)^{}'.format(*dims))
