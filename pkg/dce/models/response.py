"""
Mechanical observables of corrugated plates built on the kernels: effective action,
lateral response tensor, mass and viscosity corrections, ringdown time, static and
sliding (Josephson-like) lateral forces, capillary corrections.

The public functions take and return SI values. Kernel evaluations run in natural
units with the corrugation wavelength as reference length.
"""
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from dce import logger
from dce.models import kernels
from dce.models.kernels import KernelPoint, kernel_pair, classify_region, resonance_threshold, Region
from dce.numerics import units
from dce.numerics.quadrature import QuadratureSpec
from dce.numerics.units import CONSTANTS, NaturalScale
from dce.utils.errors import DivergentResponseError

LOW_FREQUENCY = 'low_frequency'
DISSIPATIVE = 'dissipative'
FULL_RESPONSE = 'full_response'

MAX_SLIDING_SPEED = 0.01  # in units of c

CapillaryCorrections = namedtuple('CapillaryCorrections', ['delta_rho', 'delta_sigma', 'relative_speed_shift'])


@dataclass(frozen=True)
class CorrugationSpec:
    """
    Height profile h(x) = d cos(k.x + alpha) of one plate.

    :param d: amplitude (m), >= 0
    :param k: wavevector (1/m), two components
    :param alpha: phase (rad)
    """
    d: float
    k: Tuple[float, float]
    alpha: float = 0.

    def __post_init__(self):
        object.__setattr__(self, 'k', tuple(float(x) for x in self.k))
        if len(self.k) != 2 or not np.all(np.isfinite(self.k)):
            raise ValueError('k must be a finite 2-vector, got {}'.format(self.k))
        if not (np.isfinite(self.d) and self.d >= 0):
            raise ValueError('d must be finite and >= 0, got {}'.format(self.d))
        if self.d > 0 and self.k_mag == 0:
            raise ValueError('a corrugated plate needs |k| > 0')
        if not np.isfinite(self.alpha):
            raise ValueError('alpha must be finite')

    @property
    def k_vec(self):
        return np.array(self.k)

    @property
    def k_mag(self):
        return float(np.hypot(*self.k))

    @property
    def k_hat(self):
        return self.k_vec / self.k_mag if self.k_mag > 0 else np.zeros(2)

    @property
    def wavelength(self):
        return 2 * np.pi / self.k_mag

    @property
    def amplitude(self):
        """complex Fourier amplitude d exp(i alpha) of the e^{ik.x} component"""
        return self.d * np.exp(1j * self.alpha)

    def profile(self, x):
        x = np.asarray(x, dtype=float)
        return self.d * np.cos(x @ self.k_vec + self.alpha)

    def scaled(self, s):
        return CorrugationSpec(d=self.d * s, k=tuple(np.array(self.k) / s), alpha=self.alpha)


@dataclass(frozen=True)
class PlateGeometry:
    A: float
    H: float = np.inf

    def __post_init__(self):
        if not (np.isfinite(self.A) and self.A > 0):
            raise ValueError('plate area must be > 0, got {}'.format(self.A))
        if not self.H > 0:
            raise ValueError('separation must be > 0 or inf, got {}'.format(self.H))

    @property
    def single_plate(self):
        return np.isinf(self.H)

    def scaled(self, s):
        return PlateGeometry(A=self.A * s ** 2, H=self.H * s)


@dataclass(frozen=True)
class MaterialSpec:
    rho: float
    thickness: float
    sigma: Optional[float] = None

    def __post_init__(self):
        for name in ('rho', 'thickness', 'sigma'):
            v = getattr(self, name)
            if v is not None and not (np.isfinite(v) and v > 0):
                raise ValueError('{} must be positive, got {}'.format(name, v))

    def plate_mass(self, A):
        return self.rho * self.thickness * A

    def scaled(self, s):
        return MaterialSpec(rho=self.rho, thickness=self.thickness * s, sigma=self.sigma)


@dataclass(frozen=True)
class ResponseTensor:
    """
    Lateral force per lateral displacement at angular frequency omega (N/m).
    """
    chi: np.ndarray = field(compare=False)
    k_hat: np.ndarray = field(compare=False)
    omega: float = 0.

    @classmethod
    def from_components(cls, chi_par, chi_perp, k_hat, omega):
        k_hat = np.asarray(k_hat, dtype=float)
        kk = np.outer(k_hat, k_hat)
        return cls(chi=chi_par * kk + chi_perp * (np.eye(2) - kk), k_hat=k_hat, omega=omega)

    @property
    def e_perp(self):
        return np.array([-self.k_hat[1], self.k_hat[0]])

    @property
    def chi_par(self):
        return complex(self.k_hat @ self.chi @ self.k_hat)

    @property
    def chi_perp(self):
        e = self.e_perp
        return complex(e @ self.chi @ e)


@dataclass(frozen=True)
class MassViscosity:
    dm_par: float = 0.
    dm_perp: float = 0.
    eta_par: float = 0.
    eta_perp: float = 0.
    valid_regime: str = LOW_FREQUENCY
    enhancement: Optional[float] = None


@dataclass(frozen=True)
class DeformationSpectrum:
    """
    Height spectrum sampled on (q, omega) cells.

    :param q: (n, 2) wavevectors (1/m)
    :param omega: (n,) angular frequencies (rad/s)
    :param amplitude: (n,) complex Fourier amplitudes
    :param weight: (n,) cell measures d omega d^2q / (2 pi)^3
    """
    q: np.ndarray = field(compare=False)
    omega: np.ndarray = field(compare=False)
    amplitude: np.ndarray = field(compare=False)
    weight: np.ndarray = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'q', np.atleast_2d(np.asarray(self.q, dtype=float)))
        for name, dtype in (('omega', float), ('amplitude', complex), ('weight', float)):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=dtype)))
        n = len(self.omega)
        if self.q.shape != (n, 2) or self.amplitude.shape != (n,) or self.weight.shape != (n,):
            raise ValueError('spectrum arrays must share one support of {} cells'.format(n))

    @classmethod
    def zeros_like(cls, other):
        return cls(other.q, other.omega, np.zeros_like(other.amplitude), other.weight)


def natural_scale(c, constants=CONSTANTS):
    """Reference length of a corrugation: its wavelength."""
    return NaturalScale(L0=c.wavelength, constants=constants)


def regime(omega, k, constants=CONSTANTS):
    ratio = abs(omega) / (constants.c * k)
    if ratio < 0.1:
        return LOW_FREQUENCY
    if ratio > 10:
        return DISSIPATIVE
    return FULL_RESPONSE


def _check_drive(k, omega, H, constants=CONSTANTS):
    if not np.isinf(H) and abs(omega) >= resonance_threshold(k, H, constants.c):
        raise DivergentResponseError(k, omega)


def _self_kernel_difference(k_n, omega_n, H_n, spec):
    """A+(k, omega) - A+(k, 0) in natural units."""
    if omega_n == 0:
        return 0j
    moving = kernel_pair(KernelPoint(k_n, omega_n, H_n), spec).a_plus.to_complex()
    static = kernel_pair(KernelPoint(k_n, 0., H_n), spec).a_plus.to_complex()
    return moving - static


def _cross_kernel_static(k_n, H_n, spec):
    if np.isinf(H_n):
        return 0.
    return kernel_pair(KernelPoint(k_n, 0., H_n), spec).a_minus.re


def _shared_amplitude(c1, c2):
    """
    Complex amplitude of plate 2 on the e^{ik1.x} harmonic of plate 1; zero when the
    plates are corrugated at different wavevectors.
    """
    if c2 is None or c2.d == 0 or c1.d == 0:
        return 0j
    if np.allclose(c2.k_vec, c1.k_vec, rtol=1e-12, atol=0):
        return c2.amplitude
    if np.allclose(c2.k_vec, -c1.k_vec, rtol=1e-12, atol=0):
        return np.conj(c2.amplitude)
    return 0j


def response_tensor(c1, c2, geometry, omega, spec=None, constants=CONSTANTS):
    """
    Response of plate 1 to its own lateral motion at frequency omega,

        chi_ij = hbar c A k_i k_j [ d1^2/2 (A+(k, omega) - A+(k, 0)) + d1 d2/2 A-(k, 0) cos(alpha2 - alpha1) ]

    :param c1: CorrugationSpec of the moving plate
    :param c2: CorrugationSpec of the facing plate or None
    :param geometry: PlateGeometry
    :param omega: float, rad/s
    :return: ResponseTensor
    """
    if spec is None:
        spec = QuadratureSpec()
    if c1.k_mag == 0:
        return ResponseTensor(chi=np.zeros((2, 2), dtype=complex), k_hat=np.zeros(2), omega=omega)
    _check_drive(c1.k_mag, omega, geometry.H, constants)
    scale = natural_scale(c1, constants)
    k_n = scale.to_natural(c1.k_mag, units.WAVENUMBER)
    omega_n = scale.to_natural(omega, units.ANGULAR_FREQUENCY)
    H_n = np.inf if geometry.single_plate else scale.to_natural(geometry.H, units.LENGTH)
    A_n = scale.to_natural(geometry.A, units.AREA)
    d1_n = scale.to_natural(c1.d, units.LENGTH)

    bracket = 0j
    if c1.d > 0:
        bracket += 0.5 * d1_n ** 2 * _self_kernel_difference(k_n, omega_n, H_n, spec)
    shared = _shared_amplitude(c1, c2)
    if shared != 0 and not geometry.single_plate:
        # d1 d2 cos(alpha2 - alpha1) = Re(conj(h1) h2)
        overlap = np.real(np.conj(c1.amplitude) * shared) / scale.L0 ** 2
        bracket += 0.5 * overlap * _cross_kernel_static(k_n, H_n, spec)
    chi_par = scale.from_natural(A_n * k_n ** 2 * bracket, units.RESPONSE)
    return ResponseTensor.from_components(chi_par, 0., c1.k_hat, omega)


def mass_correction_single(c, A, constants=CONSTANTS):
    """
    Low frequency mass correction of a single corrugated plate, A hbar k^5 d^2 / (288 pi^2 c).
    """
    dm = A * constants.hbar * c.k_mag ** 5 * c.d ** 2 / (288 * np.pi ** 2 * constants.c)
    return MassViscosity(dm_par=dm, valid_regime=LOW_FREQUENCY)


def mass_correction_two_plate(c, A, H, B=kernels.B_PUBLISHED, constants=CONSTANTS):
    """
    Small kH closed form hbar A B k^2 d^2 / (48 c H^3) for a corrugated plate facing a flat one.
    The enhancement field is the ratio to the single plate value, proportional to (kH)^-3.
    """
    k = c.k_mag
    if k * H > 0.1:
        logger.warning('two plate closed form used at kH = {:.3g}, outside kH << 1'.format(k * H))
    dm = constants.hbar * A * B * k ** 2 * c.d ** 2 / (48 * constants.c * H ** 3)
    enhancement = 288 * np.pi ** 2 * B / (48 * (k * H) ** 3)
    return MassViscosity(dm_par=dm, valid_regime=LOW_FREQUENCY, enhancement=enhancement)


def mass_correction_kernel(c, A, H, spec=None, constants=CONSTANTS):
    """
    Low frequency mass correction at any kH from the omega^2 slope of A+ at q = k.
    """
    if c.d == 0:
        return MassViscosity(valid_regime=LOW_FREQUENCY)
    scale = natural_scale(c, constants)
    k_n = scale.to_natural(c.k_mag, units.WAVENUMBER)
    H_n = np.inf if np.isinf(H) else scale.to_natural(H, units.LENGTH)
    slope, _ = kernels.a_plus_frequency_slope(k_n, H_n, spec)
    dm_n = scale.to_natural(A, units.AREA) * 0.5 * scale.to_natural(c.d, units.LENGTH) ** 2 * k_n ** 2 * slope
    return MassViscosity(dm_par=scale.from_natural(dm_n, units.MASS), valid_regime=LOW_FREQUENCY)


def mass_crossover(H, spec=None, bracket=(0.5, 10.)):
    """
    kH at which the kernel mass correction changes sign between the two plate (negative)
    and single plate (positive) behaviour. Independent of d and A.
    """
    def slope(kH):
        return kernels.a_plus_frequency_slope(kH / H, H, spec)[0]

    rel = spec.rel_tol if spec is not None else 1e-8
    return brentq(slope, *bracket, xtol=1e-10, rtol=max(rel, 1e-12))


def shear_viscosity_asymptotic(c, A, omega, constants=CONSTANTS):
    """
    omega >> ck viscosity of a single plate, hbar A k^2 d^2 omega^4 / (720 pi^2 c^4).
    """
    eta = constants.hbar * A * c.k_mag ** 2 * c.d ** 2 * omega ** 4 / (720 * np.pi ** 2 * constants.c ** 4)
    return MassViscosity(eta_par=eta, valid_regime=DISSIPATIVE)


def shear_viscosity(c, A, omega, H=np.inf, spec=None, constants=CONSTANTS):
    """
    Viscosity eta = Im chi(omega) / omega from the full kernel. Zero below the light cone;
    between the light cone and the first cavity mode two plates dissipate like decoupled
    single plates, independently of H.
    """
    k = c.k_mag
    label = regime(omega, k, constants) if k > 0 else LOW_FREQUENCY
    if c.d == 0 or omega == 0 or abs(omega) <= constants.c * k:
        return MassViscosity(valid_regime=label)
    _check_drive(k, omega, H, constants)
    scale = natural_scale(c, constants)
    k_n = scale.to_natural(k, units.WAVENUMBER)
    omega_n = scale.to_natural(omega, units.ANGULAR_FREQUENCY)
    im_a_plus = kernels.a_plus_infinite(k_n, omega_n).im
    if not np.isinf(H):
        im_a_plus = kernels.KERNEL_NORMALIZATION * im_a_plus
    A_n = scale.to_natural(A, units.AREA)
    d_n = scale.to_natural(c.d, units.LENGTH)
    eta_n = A_n * 0.5 * d_n ** 2 * k_n ** 2 * im_a_plus / omega_n
    return MassViscosity(eta_par=scale.from_natural(eta_n, units.VISCOSITY), valid_regime=label)


def decay_time(M, eta):
    """
    Ringdown time 2M / eta; infinite without dissipation.
    """
    if eta < 0:
        raise ValueError('viscosity must be >= 0, got {}'.format(eta))
    if eta == 0:
        return np.inf
    return 2 * M / eta


def _cross_kernel_si(k, H, spec, constants):
    scale = NaturalScale(L0=2 * np.pi / k, constants=constants)
    k_n = scale.to_natural(k, units.WAVENUMBER)
    H_n = scale.to_natural(H, units.LENGTH)
    return scale, k_n, _cross_kernel_static(k_n, H_n, spec)


def josephson_energy(k, d1, d2, alpha, A, H, spec=None, constants=CONSTANTS):
    """
    Static interaction energy of two plates corrugated at the same k with phase offset
    alpha, (hbar c A / 2) A-(k, 0) d1 d2 cos(alpha). Minimal at alpha = pi.
    """
    k = np.asarray(k, dtype=float)
    if np.isinf(H):
        raise ValueError('the plate coupling needs a finite separation')
    kmag = float(np.hypot(*k))
    scale, _, a_minus = _cross_kernel_si(kmag, H, spec, constants)
    e_n = 0.5 * scale.to_natural(A, units.AREA) * a_minus * scale.to_natural(d1, units.LENGTH) \
        * scale.to_natural(d2, units.LENGTH) * np.cos(alpha)
    return scale.from_natural(e_n, units.ENERGY)


def josephson_dc(k, d1, d2, alpha, A, H, spec=None, constants=CONSTANTS):
    """
    Static lateral force (hbar c A / 2) A-(k, 0) k d1 d2 sin(alpha) along k. The force
    acts on plate 1, the moving plate, and drives alpha towards pi.

    :param alpha: float or np.array of phase offsets
    :return: np.array (2,) or (n, 2) in N
    """
    k = np.asarray(k, dtype=float)
    if np.isinf(H):
        raise ValueError('the plate coupling needs a finite separation')
    kmag = float(np.hypot(*k))
    scale, k_n, a_minus = _cross_kernel_si(kmag, H, spec, constants)
    magnitude_n = 0.5 * scale.to_natural(A, units.AREA) * a_minus * k_n \
        * scale.to_natural(d1, units.LENGTH) * scale.to_natural(d2, units.LENGTH)
    magnitude = scale.from_natural(magnitude_n, units.FORCE) * np.sin(alpha)
    return np.multiply.outer(magnitude, k / kmag)


def residual_force(c1, c2, geometry, spec=None, constants=CONSTANTS):
    """
    Static lateral force on plate 1 from the plate coupling, built from the complex
    amplitudes of the shared harmonic: (hbar c A / 2) A-(k, 0) k Im(conj(h1) h2).
    """
    shared = _shared_amplitude(c1, c2)
    if shared == 0 or geometry.single_plate:
        return np.zeros(2)
    scale, k_n, a_minus = _cross_kernel_si(c1.k_mag, geometry.H, spec, constants)
    overlap_n = np.imag(np.conj(c1.amplitude) * shared) / scale.L0 ** 2
    f_n = 0.5 * scale.to_natural(geometry.A, units.AREA) * a_minus * k_n * overlap_n
    return scale.from_natural(f_n, units.FORCE) * c1.k_hat


def josephson_frequency(k, v):
    return float(np.dot(k, v))


def josephson_ac(k, d1, d2, v, A, H, t_grid, spec=None, constants=CONSTANTS):
    """
    Lateral force on plate 1 while it slides at constant velocity v,
    F(t) = |F_dc(pi/2)| sin((k.v) t) along k.

    :return: np.array (len(t_grid), 2) in N
    """
    v = np.asarray(v, dtype=float)
    if np.hypot(*v) >= MAX_SLIDING_SPEED * constants.c:
        raise ValueError('sliding speed {:.3e} m/s is not << c'.format(np.hypot(*v)))
    amplitude = josephson_dc(k, d1, d2, np.pi / 2, A, H, spec, constants)
    return np.multiply.outer(np.sin(josephson_frequency(k, v) * np.asarray(t_grid, dtype=float)), amplitude)


def capillary_corrections(H, sigma, B=kernels.B_PUBLISHED, constants=CONSTANTS):
    """
    Vacuum corrections to a liquid surface a distance H below a plate: areal density
    hbar B / (48 c H^3), surface tension hbar c B / (48 H^3) and the relative shift of
    the capillary wave speed hbar c B / (96 sigma H^3).
    """
    if not (sigma is not None and sigma > 0):
        raise ValueError('surface tension must be > 0, got {}'.format(sigma))
    if np.isinf(H):
        return CapillaryCorrections(0., 0., 0.)
    delta_rho = constants.hbar * B / (48 * constants.c * H ** 3)
    delta_sigma = constants.hbar * constants.c * B / (48 * H ** 3)
    shift = constants.hbar * constants.c * B / (96 * sigma * H ** 3)
    return CapillaryCorrections(delta_rho, delta_sigma, shift)


def effective_action(h1, h2, geometry, spec=None, constants=CONSTANTS):
    """
    Second order effective action

        S = hbar c / 2 sum_cells weight [A+ (|h1|^2 + |h2|^2) - A- (h1 conj(h2) + conj(h1) h2)]

    :param h1: DeformationSpectrum
    :param h2: DeformationSpectrum on the same cells, or None for a flat second plate
    :return: complex action (J s); a positive imaginary part is dissipated energy
    """
    if h2 is None:
        h2 = DeformationSpectrum.zeros_like(h1)
    if not (np.array_equal(h1.q, h2.q) and np.array_equal(h1.omega, h2.omega)):
        raise ValueError('both spectra must be sampled on the same cells')
    if spec is None:
        spec = QuadratureSpec()
    total = 0j
    for q_vec, omega, a1, a2, w in zip(h1.q, h1.omega, h1.amplitude, h2.amplitude, h1.weight):
        if a1 == 0 and a2 == 0:
            continue
        q = float(np.hypot(*q_vec))
        if q > 0:
            L0 = 2 * np.pi / q
        elif omega != 0:
            L0 = constants.c / abs(omega)
        else:
            L0 = 1. if geometry.single_plate else geometry.H
        scale = NaturalScale(L0=L0, constants=constants)
        point = KernelPoint(scale.to_natural(q, units.WAVENUMBER),
                            scale.to_natural(omega, units.ANGULAR_FREQUENCY),
                            np.inf if geometry.single_plate else scale.to_natural(geometry.H, units.LENGTH))
        if classify_region(point) is Region.IIb:
            raise DivergentResponseError(q, omega)
        pair = kernel_pair(point, spec)
        a_plus = scale.from_natural(pair.a_plus.to_complex(), units.KERNEL)
        a_minus = scale.from_natural(pair.a_minus.to_complex(), units.KERNEL)
        total += w * (a_plus * (abs(a1) ** 2 + abs(a2) ** 2) - a_minus * 2 * np.real(a1 * np.conj(a2)))
    return 0.5 * constants.hbar * constants.c * total


def force_spectrum(chi, omega, r_spectrum, f0=None, k=None, H=np.inf, constants=CONSTANTS):
    """
    Linear response force f(omega) = chi(omega) r(omega) + f0(omega).

    :param chi: callable omega -> ResponseTensor, or a sequence of ResponseTensor on the grid
    :param omega: (n,) frequency grid
    :param r_spectrum: (n, 2) complex displacement spectrum
    :param f0: None, a (2,) static force placed on the omega = 0 cells, or an (n, 2) spectrum
    :param k: corrugation wavenumber; with a finite H every omega is checked against the first
        cavity mode
    :param H: plate separation, m
    :return: (n, 2) complex force spectrum
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    if k is not None:
        for w in omega:
            _check_drive(k, w, H, constants)
    r = np.asarray(r_spectrum, dtype=complex).reshape(len(omega), 2)
    tensors = [chi(w) for w in omega] if callable(chi) else list(chi)
    if len(tensors) != len(omega):
        raise ValueError('response tensors and frequency grid differ in length')
    out = np.array([t.chi @ ri for t, ri in zip(tensors, r)], dtype=complex).reshape(len(omega), 2)
    if f0 is not None:
        f0 = np.asarray(f0, dtype=complex)
        if f0.shape == (2,):
            out[omega == 0] += f0
        else:
            out += f0.reshape(len(omega), 2)
    return out
