"""Analytic representation: states as power series in a complex variable.

A state with amplitudes f_n maps to the entire function
sum_n f_n exp(i alpha e_n) / sqrt(F(n)) z^n.  On coefficient sequences

    A- acts as (1 + 3 eps) d/dz + (3 eps / 2) z d^2/dz^2,
    A+ as multiplication by z, and N as z d/dz.

The GIS eigenproblem becomes a Kummer equation whose solution
exp(c z) 1F1(a; b; -2 c z) is expanded in powers of z.
"""
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DegenerationError, DimensionError, DomainError
from .intelligent import GisLabel
from .spectrum import ModelParams, energies, log_big_f, phase_factors
from .states import FockVector

__all__ = [
    "EntireFunctionCoeffs",
    "to_analytic",
    "from_analytic",
    "analytic_operators",
    "kummer_parameters",
    "kummer_gis",
    "verify_ode",
    "gaussian_limit_coefficients",
    "harmonic_limit_analytic",
    "analytic_inner",
]


@dataclass(frozen=True)
class EntireFunctionCoeffs:
    """Truncated power-series coefficients of an entire function."""

    coeffs: np.ndarray
    params: ModelParams

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self):
        return self.coeffs.size

    def tail(self, radius):
        """|coeff_{dim-1}| radius^(dim-1), the size of the last retained term."""
        return float(abs(self.coeffs[-1]) * radius ** (self.dim - 1))

    def __call__(self, z):
        """Evaluate the truncated series (Horner) at ``z``."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out


def _scale(dim, params):
    """exp(i alpha e_n) / sqrt(F(n))."""
    e = energies(dim, params)
    return np.conj(phase_factors(params.alpha, e)) * np.exp(-0.5 * log_big_f(dim - 1, params))


def to_analytic(state):
    """Coefficients f_n exp(i alpha e_n) / sqrt(F(n)) of a Fock vector."""
    return EntireFunctionCoeffs(state.amplitudes * _scale(state.dim, state.params), state.params)


def from_analytic(coeffs, tail_tol=None):
    """Inverse of :func:`to_analytic` (no renormalization)."""
    amps = coeffs.coeffs / _scale(coeffs.dim, coeffs.params)
    if tail_tol is None:
        return FockVector(amps, coeffs.params)
    return FockVector(amps, coeffs.params, tail_tol)


def analytic_operators(dim, params):
    """Coefficient maps realizing A-, A+ and N.

    Returns
    -------
    lower, raise_, number : callable
        Each maps a length-``dim`` coefficient array to a new array.
        ``lower(c)[n] = e_{n+1} c[n+1]``, ``raise_`` shifts coefficients up
        by one power (dropping the top one) and ``number`` scales by ``n``.
    """
    if int(dim) != dim or dim < 3:
        raise DimensionError(f"dim must be an integer >= 3, got {dim!r}")
    dim = int(dim)
    e = energies(dim + 1, params)
    n = np.arange(dim)

    def lower(c):
        c = np.asarray(c, dtype=complex)
        out = np.zeros(dim, dtype=complex)
        # (1+3eps)(n+1) + (3eps/2)(n+1)n = e_{n+1}
        out[:-1] = e[1:dim] * c[1:]
        return out

    def raise_(c):
        c = np.asarray(c, dtype=complex)
        out = np.zeros(dim, dtype=complex)
        out[1:] = c[:-1]
        return out

    def number(c):
        return n * np.asarray(c, dtype=complex)

    return lower, raise_, number


def kummer_parameters(label, params, branch=1):
    """(a, b, c) of the Kummer solution for the given branch of c.

    mu = (1 + lambda) 3 eps / 2, upsilon = 1 - lambda, c = +-sqrt(-upsilon / mu)
    (principal root for ``branch=1``), b = 2/(3 eps) + 2 and
    a = 1 + 1/(3 eps) - z' / (mu c).
    """
    if not isinstance(label, GisLabel):
        raise DomainError("label must be a GisLabel")
    if label.lam == 1:
        raise DegenerationError(
            "lambda = 1 is the confluent limit; the solution is the coherent-state 0F1 series"
        )
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")
    eps = params.epsilon
    mu = (1.0 + label.lam) * 1.5 * eps
    ups = 1.0 - label.lam
    c = branch * np.sqrt(complex(-ups / mu))
    b = 2.0 / (3.0 * eps) + 2.0
    a = 1.0 + 1.0 / (3.0 * eps) - label.z / (mu * c)
    return complex(a), b, complex(c)


def _kummer_coeffs_mp(a, b, c, dim, dps):
    with mpmath.workdps(dps):
        a, b, c = mpmath.mpc(a), mpmath.mpf(b), mpmath.mpc(c)
        t = [mpmath.mpc(1)]
        for m in range(1, dim):
            t.append(t[-1] * (a + m - 1) * (-2) / ((b + m - 1) * m))
        inv_fact = [mpmath.mpf(1)]
        for k in range(1, dim):
            inv_fact.append(inv_fact[-1] / k)
        out = []
        cn = mpmath.mpc(1)
        for n in range(dim):
            s = mpmath.fsum(t[m] * inv_fact[n - m] for m in range(n + 1))
            out.append(complex(cn * s))
            cn *= c
        return np.array(out)


def kummer_gis(label, params, dim, branch=1, rel_tol=1e-15, max_dps=4000):
    """Power-series coefficients of exp(c z) 1F1(a; b; -2 c z).

    The n-th coefficient is c^n sum_m (a)_m (-2)^m / ((b)_m m! (n-m)!),
    a sum with heavy cancellation, so it is evaluated with ``mpmath`` at
    increasing working precision until two successive precisions agree
    coefficient-wise to ``rel_tol``.

    Raises
    ------
    DegenerationError
        For lambda = 1.
    """
    a, b, c = kummer_parameters(label, params, branch)
    dim = int(dim)
    if dim < 1:
        raise DimensionError("dim must be positive")
    dps = 30
    prev = _kummer_coeffs_mp(a, b, c, dim, dps)
    while True:
        dps *= 2
        if dps > max_dps:
            raise DomainError("Kummer coefficients did not stabilize; reduce dim")
        cur = _kummer_coeffs_mp(a, b, c, dim, dps)
        scale = np.maximum(np.abs(cur), np.finfo(float).tiny)
        if np.all(np.abs(cur - prev) <= rel_tol * scale):
            return EntireFunctionCoeffs(cur, params)
        prev = cur


def verify_ode(coeffs, label, params=None):
    """Max coefficient-wise residual of the Kummer-form eigen-equation.

    r_n = mu (n+1)(b+n) c_{n+1} + upsilon c_{n-1} - 2 z' c_n for n < dim - 1,
    divided by max |c_n|.
    """
    params = coeffs.params if params is None else params
    eps = params.epsilon
    mu = (1.0 + label.lam) * 1.5 * eps
    ups = 1.0 - label.lam
    b = 2.0 / (3.0 * eps) + 2.0
    c = coeffs.coeffs
    n = np.arange(c.size - 1)
    prev = np.concatenate([[0.0], c[:-2]])
    r = mu * (n + 1) * (b + n) * c[1:] + ups * prev - 2.0 * label.z * c[:-1]
    return float(np.max(np.abs(r)) / np.max(np.abs(c)))


def gaussian_limit_coefficients(label, n_coeffs):
    """Taylor coefficients of exp(p z + q z^2 / 2), p = 2z'/(1+lambda), q = (lambda-1)/(lambda+1)."""
    p, q = label.a, label.q
    g = np.zeros(n_coeffs, dtype=complex)
    g[0] = 1.0
    if n_coeffs > 1:
        g[1] = p
    for n in range(1, n_coeffs - 1):
        g[n + 1] = (p * g[n] + q * g[n - 1]) / (n + 1)
    return g


def harmonic_limit_analytic(label, eps, n_coeffs=10):
    """Gaussian limit of the analytic GIS at small ``eps``.

    Returns the limiting coefficients as :class:`EntireFunctionCoeffs`
    at ``eps``; the caller compares with ``kummer_gis`` (or, for
    lambda = 1, the coherent-state series) at the same ``eps``.
    """
    if not eps <= 1e-4:
        raise DomainError("harmonic limit proxy requires eps <= 1e-4")
    return EntireFunctionCoeffs(gaussian_limit_coefficients(label, n_coeffs), ModelParams(eps))


def analytic_inner(f, g, quad, n_phi=None):
    """<f|g> by quadrature of conj(f(z)) g(z) h(|z|^2) |z| over the plane.

    Uses the radial rule ``quad`` (see :mod:`anharmonic.measure`) and a
    uniform angular grid, which is exact for the truncated polynomials.
    """
    dim = max(f.dim, g.dim)
    n_phi = 2 * dim if n_phi is None else int(n_phi)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    z = quad.nodes[:, None] * np.exp(1j * phi)[None, :]
    w = np.exp(quad.log_h + np.log(quad.nodes) + np.log(quad.weights))[:, None] * (2.0 * math.pi / n_phi)
    return complex(np.sum(np.conj(f(z)) * g(z) * w))
