"""Special functions: log-Gamma, hypergeometric series and modified Bessel functions.

The hypergeometric functions are summed term by term with the ratio
recurrence in compensated (double-double) arithmetic; the result is
rounded to double.  K_nu switches between a small-argument series, a
trapezoidal integral representation and the large-argument asymptotic
expansion.
"""
import math
from dataclasses import dataclass

import numpy as np

from .backends import kernels as _k
from .errors import EvaluationError, OrderError, PoleError, PrecisionError, DomainError

__all__ = [
    "SeriesPolicy",
    "DEFAULT_POLICY",
    "ln_gamma",
    "pfq",
    "log_pfq",
    "hyp0f1",
    "log_hyp0f1",
    "hyp0f3",
    "hyp1f1",
    "bessel_i",
    "log_bessel_i",
    "bessel_k",
    "log_bessel_k",
    "bessel_k_series",
    "bessel_k_asymptotic",
    "bessel_k_integral",
]

# Largest tolerated ratio max|term| / |sum| before the sum is declared
# meaningless.  The terms carry about 32 significant digits, so a loss of
# 1e16 still leaves a double-accurate result.
_MAX_LOSS = 1e16
_K_SERIES_LOSS = 1e6


@dataclass(frozen=True)
class SeriesPolicy:
    """Stopping rules for series evaluation.

    Parameters
    ----------
    rel_tol : float
        Summation stops once a term is below ``rel_tol`` times the running
        sum and the terms are decreasing.  Must lie in ``(0, 1e-6]``.
    max_terms : int
        Hard cap on the number of terms; reaching it raises
        :class:`EvaluationError`.  At least 64.
    overflow_guard : float
        Running-sum magnitude at which the accumulator is rescaled and the
        exponent carried separately.
    """

    rel_tol: float = 2.0 ** -53
    max_terms: int = 100_000
    overflow_guard: float = 1e290

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-6):
            raise DomainError(f"rel_tol must lie in (0, 1e-6], got {self.rel_tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 64:
            raise DomainError(f"max_terms must be an integer >= 64, got {self.max_terms!r}")
        if not (1.0 < self.overflow_guard < 1e300):
            raise DomainError("overflow_guard must lie in (1, 1e300)")


DEFAULT_POLICY = SeriesPolicy()


def ln_gamma(x):
    """Natural log of the Gamma function for positive real ``x``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def _is_nonpositive_int(b):
    return b <= 0 and float(b) == math.floor(b)


def _series(num, den, x, policy):
    for b in den:
        if _is_nonpositive_int(b):
            raise PoleError(f"denominator parameter {b!r} is a non-positive integer")
    num = np.asarray(num, dtype=np.complex128).reshape(-1)
    den = np.asarray(den, dtype=np.float64).reshape(-1)
    x = complex(x)
    if not (math.isfinite(x.real) and math.isfinite(x.imag)):
        raise DomainError("series argument must be finite")
    re, im, log_scale, n, converged, log_max = _k.pfq_dd(
        num, den, x.real, x.imag, policy.rel_tol, int(policy.max_terms), policy.overflow_guard
    )
    if not converged:
        raise EvaluationError(f"series did not converge within {policy.max_terms} terms")
    mag = math.hypot(re, im)
    if mag == 0.0:
        raise PrecisionError("series sum cancelled to zero")
    loss = log_max - (math.log(mag) + log_scale)
    if loss > math.log(_MAX_LOSS):
        raise PrecisionError(f"cancellation in series: max term / sum = e^{loss:.1f}")
    return complex(re, im), log_scale


def pfq(num, den, x, policy=DEFAULT_POLICY):
    """Generalized hypergeometric series pFq(num; den; x).

    Parameters
    ----------
    num : sequence of complex
        Numerator parameters.
    den : sequence of float
        Denominator parameters, none a non-positive integer.
    x : complex
        Argument.  Series with ``len(num) > len(den) + 1`` or
        ``len(num) == len(den) + 1`` and ``|x| >= 1`` generally diverge and
        raise :class:`EvaluationError`.
    """
    val, log_scale = _series(num, den, x, policy)
    if log_scale == 0.0:
        return val
    if log_scale + math.log(abs(val)) > 709.0:
        raise EvaluationError("result overflows double precision; use log_pfq")
    return val * math.exp(log_scale)


def log_pfq(num, den, x, policy=DEFAULT_POLICY):
    """Complex logarithm of pFq (principal branch of the mantissa)."""
    val, log_scale = _series(num, den, x, policy)
    return complex(math.log(abs(val)) + log_scale, math.atan2(val.imag, val.real))


def hyp0f1(b, x, policy=DEFAULT_POLICY):
    """0F1(; b; x) = sum_n Gamma(b)/Gamma(b+n) x^n/n!.

    Examples
    --------
    >>> round(hyp0f1(0.5, 0.25).real, 7)  # cosh(1)
    1.5430806
    """
    return pfq((), (b,), x, policy)


def log_hyp0f1(b, x, policy=DEFAULT_POLICY):
    """ln 0F1(; b; x) for real ``x >= 0`` and ``b > 0`` (the sum is then positive)."""
    return log_pfq((), (b,), x, policy).real


def hyp0f3(b1, b2, b3, x, policy=DEFAULT_POLICY):
    """0F3(; b1, b2, b3; x)."""
    return pfq((), (b1, b2, b3), x, policy)


def hyp1f1(a, b, z, policy=DEFAULT_POLICY):
    """Confluent hypergeometric function 1F1(a; b; z).

    For ``Re z < 0`` the Kummer transformation
    1F1(a; b; z) = e^z 1F1(b - a; b; -z) is applied so that the summed
    series has no sign alternation from the argument.
    """
    z = complex(z)
    a = complex(a)
    if z.real < 0.0:
        val, log_scale = _series((b - a,), (b,), -z, policy)
        return val * np.exp(z + log_scale)
    val, log_scale = _series((a,), (b,), z, policy)
    return val * math.exp(log_scale) if log_scale else val


def log_bessel_i(nu, x, policy=DEFAULT_POLICY):
    """ln I_nu(x) for ``x > 0`` and ``nu > -1``, plus integer orders."""
    nu = float(nu)
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"bessel_i requires x > 0, got {x!r}")
    if nu < 0 and nu == math.floor(nu):
        nu = -nu
    if nu <= -1.0:
        raise DomainError("log_bessel_i supports nu > -1; use bessel_i for signed values")
    s = log_hyp0f1(nu + 1.0, 0.25 * x * x, policy)
    return nu * math.log(0.5 * x) - math.lgamma(nu + 1.0) + s


def bessel_i(nu, x, policy=DEFAULT_POLICY):
    """Modified Bessel function of the first kind I_nu(x) for ``x > 0``.

    Evaluated as (x/2)^nu / Gamma(nu+1) * 0F1(; nu+1; x^2/4) with the
    prefactor combined in log-space.

    Examples
    --------
    >>> round(bessel_i(0.5, 1.0), 7)
    0.9376748
    """
    nu = float(nu)
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"bessel_i requires x > 0, got {x!r}")
    if nu < 0 and nu == math.floor(nu):
        nu = -nu
    b = nu + 1.0
    series, log_scale = _series((), (b,), 0.25 * x * x, policy)
    lg = math.lgamma(b)
    sign = 1.0
    if b < 0 and math.floor(-b) % 2 == 0:
        sign = -1.0
    log_val = nu * math.log(0.5 * x) - lg + log_scale + math.log(abs(series.real))
    if log_val > 709.0:
        raise EvaluationError("I_nu(x) overflows double precision; use log_bessel_i")
    return sign * math.copysign(math.exp(log_val), series.real)


def _check_k_args(nu, x):
    nu = abs(float(nu))
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"bessel_k requires x > 0, got {x!r}")
    return nu, x


def bessel_k_series(nu, x):
    """K_nu(x) from the I_{-nu} - I_nu difference (small to moderate ``x``).

    Raises
    ------
    OrderError
        If ``nu`` is an integer.
    PrecisionError
        If the subtraction loses more than six significant digits.
    """
    nu, x = _check_k_args(nu, x)
    if nu == math.floor(nu):
        raise OrderError("integer order K_nu needs the limit formula, which is not implemented")
    logk, loss = _k.logk_series(nu, x)
    if not loss <= _K_SERIES_LOSS:
        raise PrecisionError(f"I_-nu - I_nu cancellation loses {math.log10(loss):.1f} digits")
    return math.exp(logk)


def bessel_k_asymptotic(nu, x):
    """K_nu(x) from the large-argument expansion.

    Raises :class:`PrecisionError` if the asymptotic series starts growing
    before reaching double precision.
    """
    nu, x = _check_k_args(nu, x)
    logk, ok = _k.logk_hankel(nu, x)
    if not ok:
        raise PrecisionError(f"asymptotic expansion not accurate at nu={nu}, x={x}")
    return math.exp(logk)


def bessel_k_integral(nu, x):
    """K_nu(x) by the trapezoidal rule on int_0^inf exp(-x cosh t) cosh(nu t) dt."""
    nu, x = _check_k_args(nu, x)
    return math.exp(_k.logk_integral(nu, x))


def log_bessel_k(nu, x, return_branch=False):
    """ln K_nu(x), scalar or elementwise over an array of positive ``x``.

    Any real order is accepted here, including integers; the branch tag
    (0 series, 1 integral, 2 asymptotic) is returned when requested.
    """
    nu = abs(float(nu))
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0.0)):
        raise DomainError("bessel_k requires x > 0")
    flat = np.ascontiguousarray(arr.reshape(-1))
    vals, branch = _k.log_bessel_k(nu, flat)
    vals = vals.reshape(arr.shape)
    branch = branch.reshape(arr.shape)
    if arr.ndim == 0:
        vals, branch = float(vals), int(branch)
    return (vals, branch) if return_branch else vals


def bessel_k(nu, x, policy=DEFAULT_POLICY):
    """Modified Bessel function of the second kind K_nu(x), non-integer ``nu``.

    Parameters
    ----------
    nu : float
        Order; integers raise :class:`OrderError`.
    x : float
        Positive argument.
    policy : SeriesPolicy, optional
        Accepted for interface symmetry; the K_nu branches run to fixed
        double precision.

    Notes
    -----
    For ``x <= 2`` the reflection formula
    K_nu = (pi/2)(I_{-nu} - I_nu)/sin(nu pi) is used when its cancellation
    is mild.  For ``x >= 25`` the asymptotic expansion is used when it
    converges to double precision.  Everywhere else an exponentially
    convergent trapezoidal rule on the cosh integral representation is used.

    Examples
    --------
    >>> round(bessel_k(0.5, 1.0), 7)
    0.4610685
    """
    nu, x = _check_k_args(nu, x)
    if nu == math.floor(nu):
        raise OrderError("integer order K_nu needs the limit formula, which is not implemented")
    logk, _ = _k.logk_dispatch(nu, x)
    if logk < -745.0:
        return 0.0
    return math.exp(logk)
