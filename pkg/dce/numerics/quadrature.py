"""
Adaptive integration over finite and semi-infinite intervals and limit extrapolation.

The 1d integrator is QUADPACK's globally adaptive Gauss-Kronrod scheme
(scipy.integrate.quad) applied after a change of variables: semi-infinite intervals are
mapped onto [0, 1) exponentially and integrable endpoint singularities are removed by a
power substitution. Integrands are written for numpy arrays of abscissae.
"""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from dce import logger

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError('rel_tol must be > 0, got {}'.format(self.rel_tol))
        if not self.abs_tol >= 0:
            raise ValueError('abs_tol must be >= 0, got {}'.format(self.abs_tol))
        if int(self.max_subdivisions) < 1:
            raise ValueError('max_subdivisions must be >= 1, got {}'.format(self.max_subdivisions))

    def tighter(self, factor=10.):
        """
        A spec with both tolerances divided by factor (used for inner integrals), never
        below the rounding floor of the rule.
        """
        return QuadratureSpec(rel_tol=max(self.rel_tol / factor, 100 * EPS),
                              abs_tol=self.abs_tol / factor,
                              max_subdivisions=self.max_subdivisions)

    def with_abs_tol(self, abs_tol):
        return QuadratureSpec(rel_tol=self.rel_tol, abs_tol=abs_tol, max_subdivisions=self.max_subdivisions)

    def tolerance(self, value):
        return max(self.rel_tol * abs(value), self.abs_tol)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    converged: bool
    evaluations: int = 0

    def __add__(self, other):
        return QuadratureResult(value=self.value + other.value,
                                error_estimate=self.error_estimate + other.error_estimate,
                                converged=self.converged and other.converged,
                                evaluations=self.evaluations + other.evaluations)

    def scaled(self, factor):
        return QuadratureResult(value=factor * self.value,
                                error_estimate=abs(factor) * self.error_estimate,
                                converged=self.converged,
                                evaluations=self.evaluations)


@dataclass(frozen=True)
class ExtrapolationResult:
    value: float
    error_estimate: float
    converged: bool
    order: int = 0


def _adaptive(f, a, b, spec):
    """
    scipy.integrate.quad on the finite interval [a, b]; f is evaluated one abscissa at a time.
    """
    def scalar(x):
        return float(np.asarray(f(np.array([x])), dtype=float).ravel()[0])

    out = quad(scalar, a, b, epsabs=spec.abs_tol, epsrel=max(spec.rel_tol, 50 * EPS),
               limit=int(spec.max_subdivisions), full_output=1)
    value, err, info = out[0], out[1], out[2]
    if len(out) > 3:
        logger.debug('quad on [{}, {}]: {}'.format(a, b, out[3]))
    converged = bool(np.isfinite(value) and np.isfinite(err) and err <= spec.tolerance(value))
    if not np.isfinite(value):
        err = np.inf
    return QuadratureResult(value=float(value), error_estimate=float(err), converged=converged,
                            evaluations=int(info['neval']))


def _exponential_map(f, a, scale):
    """
    x = a - scale * log(1 - t) maps t in [0, 1) onto [a, inf).
    """
    def g(t):
        one_minus_t = 1. - t
        x = a - scale * np.log(one_minus_t)
        return f(x) * scale / one_minus_t
    return g


def _power_map(f, a, b, exponent):
    """
    x = a + (b - a) u^m with m = 1 / (1 + exponent) removes an (x - a)^exponent endpoint behaviour.
    """
    m = 1. / (1. + exponent)

    def g(u):
        um = u ** m
        return f(a + (b - a) * um) * (b - a) * m * um / u
    return g


def integrate_1d(f, a, b, spec=None, endpoint_exponent=None, scale=1.0):
    """
    Integrate f over [a, b]. b may be np.inf.

    :param f: function
        vectorised real function, called with numpy arrays
    :param a: float
        finite lower limit
    :param b: float or np.inf
    :param spec: QuadratureSpec
    :param endpoint_exponent: float or None
        declares f ~ (x - a)^endpoint_exponent near a (> -1); a power-law substitution
        removes the singular behaviour
    :param scale: float
        length scale of the exponential map used on semi-infinite intervals; pick it so
        that f decays at least like exp(-2 x / scale)
    :return: QuadratureResult
    """
    if spec is None:
        spec = QuadratureSpec()
    if not np.isfinite(a):
        raise ValueError('lower limit must be finite, got {}'.format(a))
    if endpoint_exponent is not None and not endpoint_exponent > -1:
        raise ValueError('endpoint exponent must be > -1, got {}'.format(endpoint_exponent))
    if b == a:
        return QuadratureResult(value=0., error_estimate=0., converged=True)
    if b < a:
        if np.isinf(b):
            raise ValueError('upper limit must be finite or +inf')
        return integrate_1d(f, b, a, spec, endpoint_exponent, scale).scaled(-1.)

    singular = endpoint_exponent is not None and endpoint_exponent != 0
    if np.isinf(b):
        if singular:
            head = _adaptive(_power_map(f, a, a + scale, endpoint_exponent), 0., 1., spec)
            tail = _adaptive(_exponential_map(f, a + scale, scale), 0., 1., spec)
            result = head + tail
        else:
            result = _adaptive(_exponential_map(f, a, scale), 0., 1., spec)
    elif singular:
        result = _adaptive(_power_map(f, a, b, endpoint_exponent), 0., 1., spec)
    else:
        result = _adaptive(f, a, b, spec)

    if not result.converged:
        logger.warning('integrate_1d on [{}, {}] did not converge: value={:.9e} error={:.3e}'
                       .format(a, b, result.value, result.error_estimate))
    return result


def integrate_radial_angular(f, spec=None, p_max=np.inf, scale=1.0):
    """
    Nested integral over p in [0, p_max] and theta in [0, pi] of p^2 sin(theta) f(p, theta).

    :param f: function (p, theta) -> values
        p is a scalar, theta a numpy array
    :param spec: QuadratureSpec of the outer integral; the inner one runs ten times tighter
    :param p_max: float or np.inf
    :param scale: float
        see integrate_1d
    :return: QuadratureResult; the error estimate adds the worst relative inner error
        times the integral
    """
    if spec is None:
        spec = QuadratureSpec()
    inner_spec = spec.tighter()
    # an angular error d at every p adds about d * scale^3 / 4 to the outer integral
    inner_spec = QuadratureSpec(inner_spec.rel_tol, 4 * inner_spec.abs_tol / scale ** 3,
                                min(inner_spec.max_subdivisions, 200))
    worst = {'rel': 0., 'evaluations': 0}

    def angular(p):
        r = _adaptive(lambda theta: f(p, theta) * np.sin(theta), 0., np.pi, inner_spec)
        # points that met the absolute tolerance only contribute through the outer estimate
        if r.value != 0 and not (r.converged and r.error_estimate > inner_spec.rel_tol * abs(r.value)):
            worst['rel'] = max(worst['rel'], r.error_estimate / abs(r.value))
        worst['evaluations'] += r.evaluations
        return r.value

    def radial(p):
        return np.array([x * x * angular(x) for x in np.atleast_1d(p)])

    outer = integrate_1d(radial, 0., p_max, spec, scale=scale)
    err = outer.error_estimate + worst['rel'] * abs(outer.value)
    converged = outer.converged and err <= spec.tolerance(outer.value)
    if outer.converged and not converged:
        logger.warning('integrate_radial_angular: inner angular integrals did not converge')
    return QuadratureResult(value=outer.value, error_estimate=err, converged=converged,
                            evaluations=outer.evaluations + worst['evaluations'])


def gauss_legendre_nodes(a, b, panels, order=8):
    """
    Nodes and weights of the composite Gauss-Legendre rule with `panels` equal panels of `order` nodes.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    centers = 0.5 * (edges[1:] + edges[:-1])
    pts = (centers[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return pts, wts


def gauss_legendre_panels(f, a, b, panels, order=8):
    """
    Fixed composite Gauss-Legendre rule, independent of the adaptive integrator.
    """
    pts, wts = gauss_legendre_nodes(a, b, panels, order)
    return float(np.dot(wts, f(pts)))


def _neville(ts, values, target):
    p = np.array(values, dtype=float)
    n = len(ts)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = ((target - ts[i + m]) * p[i] + (ts[i] - target) * p[i + 1]) / (ts[i] - ts[i + m])
    return p[0]


def _rational(ts, values, target):
    """
    Diagonal rational interpolation (Bulirsch-Stoer) evaluated at target.
    """
    n = len(ts)
    c = np.array(values, dtype=float)
    d = np.array(values, dtype=float) + 1e-300
    dist = np.abs(np.asarray(ts) - target)
    ns = int(np.argmin(dist))
    if dist[ns] == 0.:
        return float(values[ns])
    y = values[ns]
    ns -= 1
    for m in range(1, n):
        for i in range(n - m):
            w = c[i + 1] - d[i]
            h = ts[i + m] - target
            t = (ts[i] - target) * d[i] / h
            dd = t - c[i + 1]
            if dd == 0.:
                return np.nan
            dd = w / dd
            d[i] = c[i + 1] * dd
            c[i] = t * dd
        if 2 * (ns + 1) < n - m:
            dy = c[ns + 1]
        else:
            dy = d[ns]
            ns -= 1
        y += dy
    return float(y)


def extrapolate_limit(samples, order=None, method='rational', target=0., rel_tol=1e-6, abs_tol=0.):
    """
    Extrapolate sampled values v(t) to t = target.

    The estimate of order m interpolates the m + 1 samples closest to the target; the
    error estimate is the difference between the two highest orders.

    :param samples: sequence of (t, value) pairs at distinct t
    :param order: int or None
        highest order used, defaults to len(samples) - 1
    :param method: 'rational' (Bulirsch-Stoer) or 'polynomial' (Richardson / Neville)
    :param target: float
    :return: ExtrapolationResult, converged=False for a non-convergent tableau
    """
    samples = sorted(((float(t), float(v)) for t, v in samples), key=lambda s: abs(s[0] - target))
    ts = np.array([s[0] for s in samples])
    vs = np.array([s[1] for s in samples])
    if order is None:
        order = len(samples) - 1
    if order < 1 or len(samples) < order + 1:
        raise ValueError('extrapolation of order {} needs at least {} samples, got {}'
                         .format(order, order + 1, len(samples)))
    if len(np.unique(ts)) != len(ts):
        raise ValueError('sample abscissae must be distinct')
    if method == 'rational':
        interpolate = _rational
    elif method == 'polynomial':
        interpolate = _neville
    else:
        raise ValueError('unknown extrapolation method {}'.format(method))

    estimates = [interpolate(ts[:m + 1], vs[:m + 1], target) for m in range(order + 1)]
    value = estimates[-1]
    err = abs(estimates[-1] - estimates[-2])
    converged = bool(np.isfinite(value) and np.isfinite(err) and err <= max(rel_tol * abs(value), abs_tol))
    if not converged:
        logger.debug('extrapolation did not converge: estimates {}'.format(estimates))
    return ExtrapolationResult(value=float(value), error_estimate=float(err), converged=converged, order=order)
