"""
Response kernels A+-(q, omega; H) of the second order effective action for two
perfectly reflecting plates, in natural units (hbar = c = 1, lengths in units of a
reference length).

The kernels depend on (q, omega) only through Q^2 = q^2 - omega^2. With the loop
momentum measure int_p = int d^3p / (2 pi)^3 and

    w(p)     = 2p / (exp(2pH) - 1)
    C(z)     = sqrt(z) coth(sqrt(z) H)
    sigma(z) = sqrt(z) / sinh(sqrt(z) H)

the self kernel of a plate splits into its two faces, a half space and a cavity:

    K+(Q^2; H)   = |Q|^5 / (720 pi^2) + Kcav(Q^2; H)
    Kcav(Q^2; H) = - 1/2 int_p w(p) p - Q^2/6 int_p w(p)/p - 1/2 int_p w(p) C(|p + Q|^2)
                   + Q^4 / (12 pi^2) int_0^1 t (1 - t)^3 C(Q^2 t^2) dt
    K-(Q^2; H)   = - 1/2 int_p sigma(p^2) sigma(|p + Q|^2)

and A+- = -KERNEL_NORMALIZATION * K+-. With G(p, dz) the surface propagator, the cavity
functions are image sums

    w(p)     = 4 p^2 sum_{n >= 1} G(p, 2nH)
    sigma(p^2) = 4 p^2 sum_{n >= 0} G(p, (2n + 1) H)
    C(p^2)   = p + w(p)

summed here in closed form. Kcav and K- are analytic in Q^2 down to the
first cavity mode Q^2 = -pi^2 / H^2; below zero they are evaluated by rotating the
momentum shift, |p + Q|^2 -> p^2 - kappa^2 + 2 i kappa p cos(theta), and keeping the
real part.
"""
from dataclasses import dataclass
from functools import lru_cache
from enum import Enum

import numpy as np
from scipy.special import zeta

from dce import logger
from dce.numerics.quadrature import QuadratureSpec, QuadratureResult, integrate_1d, \
    integrate_radial_angular, extrapolate_limit
from dce.numerics.units import sgn
from dce.utils.errors import NonConvergenceError

# fixed by the single plate closed form; the oracle suite fails if it drifts
KERNEL_NORMALIZATION = 1.0

# gradient coefficient of the two plate static kernel, A+(Q; H) ~ A+(0; H) - (B/48) Q^2 / H^3
B_PUBLISHED = -0.453
B_DERIVED = -np.pi ** 2 / 22.5

# continuation ladders, in units of pi^2 / H^2
LADDER_A = tuple(0.030 + 0.152 * i for i in range(10))
LADDER_B = tuple(0.106 + 0.152 * i for i in range(10))

_SMALL = 1e-3


class Region(Enum):
    I = 'I'
    IIa = 'IIa'
    IIb = 'IIb'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class KernelPoint:
    """
    Evaluation site of the kernels.

    :param q: in-plane wavenumber, >= 0
    :param omega: angular frequency
    :param H: plate separation, > 0, np.inf for decoupled plates
    """
    q: float
    omega: float
    H: float = np.inf

    def __post_init__(self):
        if not (np.isfinite(self.q) and self.q >= 0):
            raise ValueError('q must be finite and >= 0, got {}'.format(self.q))
        if not np.isfinite(self.omega):
            raise ValueError('omega must be finite, got {}'.format(self.omega))
        if not self.H > 0:
            raise ValueError('H must be > 0, got {}'.format(self.H))

    @property
    def Q2(self):
        return q2_combination(self)


@dataclass(frozen=True)
class KernelValue:
    re: float = 0.
    im: float = 0.
    divergent: bool = False

    @classmethod
    def finite(cls, re, im=0.):
        return cls(re=float(re), im=float(im), divergent=False)

    @classmethod
    def diverging(cls):
        return cls(re=np.nan, im=np.nan, divergent=True)

    @property
    def status(self):
        return 'Divergent' if self.divergent else 'Finite'

    def to_complex(self):
        if self.divergent:
            raise ValueError('a divergent kernel has no value')
        return complex(self.re, self.im)

    def __str__(self):
        if self.divergent:
            return 'DIVERGENT'
        return 'Finite({:.9e}, {:.9e})'.format(self.re, self.im)


@dataclass(frozen=True)
class KernelPair:
    a_plus: KernelValue
    a_minus: KernelValue


def q2_combination(point, c=1.0):
    return point.q ** 2 - (point.omega / c) ** 2


def classify_region(point, c=1.0):
    Q2 = q2_combination(point, c)
    if Q2 >= 0:
        return Region.I
    if np.isinf(point.H) or Q2 >= -(np.pi / point.H) ** 2:
        return Region.IIa
    return Region.IIb


def resonance_threshold(q, H, c=1.0):
    """
    Lowest cavity mode at in-plane wavenumber q, c sqrt(q^2 + pi^2/H^2): the onset of region IIb.
    Returns np.inf for decoupled plates.
    """
    if np.isinf(H):
        return np.inf
    return c * np.sqrt(q ** 2 + (np.pi / H) ** 2)


def a_plus_infinite(q, omega, c=1.0):
    """
    Closed form single plate kernel.

    :return: KernelValue, real below the light cone, imaginary and odd in omega above it
    """
    if q < 0:
        raise ValueError('q must be >= 0, got {}'.format(q))
    Q2 = q ** 2 - (omega / c) ** 2
    if Q2 > 0:
        return KernelValue.finite(-Q2 ** 2.5 / (360 * np.pi ** 2))
    if Q2 < 0:
        return KernelValue.finite(0., sgn(omega) * (-Q2) ** 2.5 / (360 * np.pi ** 2))
    return KernelValue.finite(0., 0.)


def surface_propagator(p, dz):
    """
    Free Euclidean two point function between planes a distance dz apart, at momentum p.
    """
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0):
        raise ValueError('surface propagator is singular at p = 0')
    out = np.exp(-p * np.abs(dz)) / (2 * p)
    return out.item() if out.ndim == 0 else out


def _w(p, H):
    p = np.asarray(p, dtype=float)
    x = 2 * p * H
    with np.errstate(divide='ignore', invalid='ignore'):
        out = np.where(x < _SMALL, (1. - x / 2. + x ** 2 / 12.) / H, 2 * p * np.exp(-x) / -np.expm1(-x))
    return out


def _sqrt(z):
    return np.sqrt(z.astype(complex)) if np.iscomplexobj(z) or np.any(np.asarray(z) < 0) else np.sqrt(z)


def _coth_ratio(z, H):
    """
    C(z) = sqrt(z) coth(sqrt(z) H), even in sqrt(z); real for real z > -pi^2/H^2.
    """
    z = np.asarray(z)
    if np.isinf(H):
        return _sqrt(z)
    s = _sqrt(z)
    x = s * H
    with np.errstate(all='ignore'):
        full = s * (1 + np.exp(-2 * x)) / -np.expm1(-2 * x)
    series = 1. / H + z * H / 3. - z ** 2 * H ** 3 / 45.
    return np.where(np.abs(x) < _SMALL, series, full)


def _sinh_ratio(z, H):
    """
    sigma(z) = sqrt(z) / sinh(sqrt(z) H), even in sqrt(z).
    """
    z = np.asarray(z)
    s = _sqrt(z)
    x = s * H
    with np.errstate(all='ignore'):
        full = 2 * s * np.exp(-x) / -np.expm1(-2 * x)
    series = 1. / H - z * H / 6. + 7 * z ** 2 * H ** 3 / 360.
    return np.where(np.abs(x) < _SMALL, series, full)


def _shifted(p, theta, Q2):
    """
    |p + Q|^2 for a Euclidean shift of squared length Q2; rotated to the imaginary axis for Q2 < 0.
    """
    if Q2 >= 0:
        return p ** 2 + Q2 + 2 * p * np.sqrt(Q2) * np.cos(theta)
    return p ** 2 + Q2 + 2j * p * np.sqrt(-Q2) * np.cos(theta)


def _check_cavity_domain(Q2, H):
    if np.isinf(H):
        raise ValueError('the cavity kernel needs a finite separation')
    if Q2 < -(np.pi / H) ** 2:
        raise ValueError('Q^2 = {} lies below the first cavity mode -pi^2/H^2 = {}'
                         .format(Q2, -(np.pi / H) ** 2))


def _absolute_floor(H, spec):
    """
    Absolute error accepted for the cavity and cross kernels: rel_tol times the static
    curvature, the natural size of both at separation H.
    """
    return max(spec.abs_tol, spec.rel_tol * abs(static_energy_curvature(H)))


def half_space_kernel(Q2, spec=None):
    """
    Kernel of one face of a plate exposed to a half space, |Q|^5 / (720 pi^2), by quadrature
    of its Feynman parameter representation. Q^2 >= 0.
    """
    if Q2 < 0:
        raise ValueError('half space kernel is evaluated for Q^2 >= 0 only')
    if Q2 == 0:
        return QuadratureResult(0., 0., True)
    Q = np.sqrt(Q2)
    r = integrate_1d(lambda t: t * (1 - t) ** 3 * Q * t, 0., 1., spec)
    return r.scaled(Q2 ** 2 / (12 * np.pi ** 2))


@lru_cache(maxsize=4096)
def cavity_kernel(Q2, H, spec=None):
    """
    Kcav(Q^2; H), the face of a plate looking into the cavity, for Q^2 >= -pi^2/H^2.

    :return: QuadratureResult
    """
    _check_cavity_domain(Q2, H)
    if spec is None:
        spec = QuadratureSpec()
    # closed forms of the two p-integrals without angular dependence
    t1 = -3 * zeta(5) / (8 * np.pi ** 2 * H ** 5)
    t2 = -Q2 * zeta(3) / (24 * np.pi ** 2 * H ** 3)

    def loop(p, theta):
        return _w(p, H) * np.real(_coth_ratio(_shifted(p, theta, Q2), H))

    floor = _absolute_floor(H, spec)
    t3 = integrate_radial_angular(loop, spec.with_abs_tol(8 * np.pi ** 2 * floor),
                                  scale=1. / H).scaled(-1. / (8 * np.pi ** 2))
    if Q2 == 0:
        t4 = QuadratureResult(0., 0., True)
    else:
        t4_spec = spec.with_abs_tol(12 * np.pi ** 2 * floor / Q2 ** 2)
        t4 = integrate_1d(lambda t: t * (1 - t) ** 3 * np.real(_coth_ratio(Q2 * t ** 2, H)), 0., 1.,
                          t4_spec).scaled(Q2 ** 2 / (12 * np.pi ** 2))
    total = t3 + t4
    value = t1 + t2 + total.value
    converged = total.converged or total.error_estimate <= max(spec.tolerance(value), floor)
    return QuadratureResult(value, total.error_estimate, converged, total.evaluations)


@lru_cache(maxsize=4096)
def cross_kernel(Q2, H, spec=None):
    """
    K-(Q^2; H), coupling the two plates, for Q^2 >= -pi^2/H^2.
    """
    _check_cavity_domain(Q2, H)
    if spec is None:
        spec = QuadratureSpec()

    def loop(p, theta):
        return _sinh_ratio(p ** 2, H) * np.real(_sinh_ratio(_shifted(p, theta, Q2), H))

    floor = _absolute_floor(H, spec)
    r = integrate_radial_angular(loop, spec.with_abs_tol(8 * np.pi ** 2 * floor),
                                 scale=1. / H).scaled(-1. / (8 * np.pi ** 2))
    return QuadratureResult(r.value, r.error_estimate,
                            r.converged or r.error_estimate <= max(spec.tolerance(r.value), floor), r.evaluations)


def static_energy_curvature(H):
    """
    Second derivative of the static Casimir energy per area, -pi^2 / (120 H^5); equals
    K+(0; H) and K-(0; H).
    """
    return -np.pi ** 2 / (120 * H ** 5)


def _require(result, what):
    if not result.converged:
        raise NonConvergenceError('{} did not converge (value={:.9e}, error={:.3e})'
                                  .format(what, result.value, result.error_estimate), result)
    return result.value


def kernels_euclidean(Q2, H, spec=None):
    """
    Real kernels (A+, A-) at Euclidean Q^2 >= 0.

    :param Q2: float
    :param H: float or np.inf
    :param spec: QuadratureSpec
    :return: (a_plus, a_minus)
    """
    if not Q2 >= 0:
        raise ValueError('kernels_euclidean needs Q^2 >= 0, got {}'.format(Q2))
    if spec is None:
        spec = QuadratureSpec()
    half = _require(half_space_kernel(Q2, spec.tighter()), 'half space kernel at Q2={}'.format(Q2))
    if np.isinf(H):
        return -KERNEL_NORMALIZATION * 2 * half, 0.
    cav = _require(cavity_kernel(Q2, H, spec), 'cavity kernel at Q2={}, H={}'.format(Q2, H))
    cross = _require(cross_kernel(Q2, H, spec), 'cross kernel at Q2={}, H={}'.format(Q2, H))
    return -KERNEL_NORMALIZATION * (half + cav), -KERNEL_NORMALIZATION * cross


def kernel_pair(point, spec=None, c=1.0):
    """
    Both kernels at a (q, omega, H) site, tagged by region.

    Region I is evaluated directly. In region IIa the cavity face and the plate coupling
    stay real and the dissipation is that of the decoupled plates,
    Im A+ = Im a_plus_infinite for any finite H. Region IIb is Divergent.
    """
    if spec is None:
        spec = QuadratureSpec()
    region = classify_region(point, c)
    Q2 = q2_combination(point, c)
    if np.isinf(point.H):
        return KernelPair(a_plus_infinite(point.q, point.omega, c), KernelValue.finite(0., 0.))
    if region is Region.IIb:
        return KernelPair(KernelValue.diverging(), KernelValue.diverging())
    if region is Region.I:
        a_plus, a_minus = kernels_euclidean(Q2, point.H, spec)
        return KernelPair(KernelValue.finite(a_plus), KernelValue.finite(a_minus))

    outer = a_plus_infinite(point.q, point.omega, c)
    cav = _require(cavity_kernel(Q2, point.H, spec), 'continued cavity kernel at Q2={}'.format(Q2))
    cross = _require(cross_kernel(Q2, point.H, spec), 'continued cross kernel at Q2={}'.format(Q2))
    logger.debug('region IIa at Q2={:.6e}, H={}: Kcav={:.9e} K-={:.9e}'.format(Q2, point.H, cav, cross))
    a_plus = KernelValue.finite(-KERNEL_NORMALIZATION * cav,
                                KERNEL_NORMALIZATION * outer.im)
    return KernelPair(a_plus, KernelValue.finite(-KERNEL_NORMALIZATION * cross))


def continue_by_extrapolation(Q2, H, ladder=LADDER_A, spec=None, kernel=cavity_kernel):
    """
    Continue a kernel component to Q^2 < 0 from samples at Q^2 > 0 with the rational
    extrapolator. Independent of the rotated-momentum evaluation used by kernel_pair.

    :param ladder: positive sample points in units of pi^2 / H^2
    :param kernel: cavity_kernel or cross_kernel
    :return: ExtrapolationResult
    """
    if spec is None:
        spec = QuadratureSpec(rel_tol=1e-12)
    unit = (np.pi / H) ** 2
    samples = []
    for x in ladder:
        r = kernel(x * unit, H, spec)
        samples.append((x * unit, _require(r, 'ladder sample at Q2={}'.format(x * unit))))
    scale = abs(static_energy_curvature(H))
    return extrapolate_limit(samples, method='rational', target=Q2, rel_tol=0., abs_tol=1e-5 * scale)


def _difference_slope(f, x0, h0, levels=4):
    """
    Richardson extrapolated central difference f'(x0) from steps h0 / 2^i.
    """
    samples = []
    for i in range(levels):
        h = h0 / 2 ** i
        samples.append((h ** 2, (f(x0 + h) - f(x0 - h)) / (2 * h)))
    return extrapolate_limit(samples, method='polynomial', rel_tol=1e-7)


def cavity_slope(Q2, H, spec=None):
    """
    dKcav/dQ^2 at Q2; the steps stay inside the analyticity domain Q^2 > -pi^2/H^2.
    """
    if spec is None:
        spec = QuadratureSpec(rel_tol=1e-11)
    h0 = 0.25 * (Q2 + (np.pi / H) ** 2)
    return _difference_slope(lambda x: _require(cavity_kernel(x, H, spec), 'cavity kernel'), Q2, h0)


def gradient_coefficient(H, spec=None):
    """
    B from the static two plate kernel, A+(Q; H) ~ A+(0; H) - (B/48) Q^2 / H^3 as Q -> 0.

    :return: ExtrapolationResult holding B
    """
    slope = cavity_slope(0., H, spec)
    factor = 48 * H ** 3 * KERNEL_NORMALIZATION
    return type(slope)(value=factor * slope.value, error_estimate=abs(factor) * slope.error_estimate,
                       converged=slope.converged, order=slope.order)


def a_plus_frequency_slope(k, H, spec=None):
    """
    dA+/d(omega^2) at omega = 0 and wavenumber k: the static mass coefficient of a corrugation.
    """
    half_space = k ** 3 / (288 * np.pi ** 2)
    if np.isinf(H):
        return KERNEL_NORMALIZATION * 2 * half_space, 0.
    slope = cavity_slope(k ** 2, H, spec)
    if not slope.converged:
        raise NonConvergenceError('frequency slope of A+ did not converge at k={}, H={}'.format(k, H), slope)
    return KERNEL_NORMALIZATION * (half_space + slope.value), KERNEL_NORMALIZATION * slope.error_estimate
