"""Energy levels, the F(n) product and truncated operator matrices.

The model is fixed by its spectrum e_n = n + (3/2) eps (n^2 + n) and a
phase parameter alpha.  Operators are dense complex ``numpy`` arrays over
the truncated basis |0>, ..., |dim-1>; the top basis state absorbs the
image of the raising operator, so algebraic identities only hold away
from that edge.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError

__all__ = [
    "ModelParams",
    "energy",
    "energies",
    "big_f",
    "log_big_f",
    "phase_factors",
    "ladder_matrices",
    "number_from_hamiltonian",
    "su11_generators",
    "radius_growth",
    "apply_lowering",
    "apply_raising",
]

_TWO_PI_LD = np.longdouble("6.283185307179586476925286766559")
_DIRECT_PRODUCT_MAX = 30


@dataclass(frozen=True)
class ModelParams:
    """Anharmonicity ``epsilon > 0`` and phase parameter ``alpha``."""

    epsilon: float
    alpha: float = 0.0

    def __post_init__(self):
        eps = float(self.epsilon)
        if not (math.isfinite(eps) and eps > 0.0):
            raise DomainError(f"epsilon must be a positive finite number, got {self.epsilon!r}")
        if not math.isfinite(float(self.alpha)):
            raise DomainError(f"alpha must be finite, got {self.alpha!r}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def kappa(self):
        """2 / (3 eps), the scale of the 0F1 argument."""
        return 2.0 / (3.0 * self.epsilon)

    @property
    def beta(self):
        """2 + 2/(3 eps), the 0F1 parameter of the coherent-state normalizer."""
        return 2.0 + self.kappa

    def with_alpha(self, alpha):
        return ModelParams(self.epsilon, alpha)


def energy(n, params):
    """Energy level e_n = n + 1.5 eps (n^2 + n); accepts scalars or arrays."""
    n = np.asarray(n, dtype=float)
    e = n + 1.5 * params.epsilon * (n * n + n)
    return float(e) if e.ndim == 0 else e


def energies(dim, params):
    """Levels e_0, ..., e_{dim-1}."""
    return energy(np.arange(dim), params)


def log_big_f(n_max, params):
    """ln F(n) for n = 0..n_max, as a cumulative sum of ln e_k."""
    e = energies(n_max + 1, params)
    out = np.zeros(n_max + 1)
    if n_max >= 1:
        out[1:] = np.cumsum(np.log(e[1:]))
    return out


def big_f(n, params):
    """F(n) = e_1 e_2 ... e_n with F(0) = 1.

    Small ``n`` uses the direct product; beyond n = 30 the value is formed
    as exp(sum ln e_k) and may overflow to ``inf`` for extreme inputs.
    """
    n = int(n)
    if n < 0:
        raise DomainError("big_f requires n >= 0")
    if n <= _DIRECT_PRODUCT_MAX:
        prod = 1.0
        for k in range(1, n + 1):
            prod *= energy(k, params)
        return prod
    return math.exp(log_big_f(n, params)[-1])


def _reduced_phase(theta):
    """theta (longdouble) reduced to [-pi, pi] and rounded to double."""
    theta = np.asarray(theta, dtype=np.longdouble)
    theta = theta - _TWO_PI_LD * np.rint(theta / _TWO_PI_LD)
    return theta.astype(np.float64)


def phase_factors(alpha, e):
    """exp(-i alpha e) elementwise.

    The product ``alpha * e`` is formed and reduced modulo 2 pi in extended
    precision so that the phase carries double-precision accuracy even for
    large arguments.
    """
    theta = np.longdouble(alpha) * np.asarray(e, dtype=np.longdouble)
    return np.exp(-1j * _reduced_phase(theta))


def _check_dim(dim, minimum):
    if int(dim) != dim or dim < minimum:
        raise DimensionError(f"dim must be an integer >= {minimum}, got {dim!r}")
    return int(dim)


def ladder_matrices(dim, params):
    """Truncated A-, A+, N and H matrices.

    A-|n> = sqrt(e_n) exp(i alpha (e_n - e_{n-1})) |n-1> and A+ is its
    conjugate transpose.  H = diag(e_n) = A+ A-.

    Returns
    -------
    a_minus, a_plus, number, hamiltonian : ndarray, shape (dim, dim)
    """
    dim = _check_dim(dim, 2)
    e = energies(dim, params)
    n = np.arange(1, dim)
    lower = np.sqrt(e[1:]) * np.conj(phase_factors(params.alpha, e[1:] - e[:-1]))
    a_minus = np.zeros((dim, dim), dtype=complex)
    a_minus[n - 1, n] = lower
    a_plus = a_minus.conj().T.copy()
    number = np.diag(np.arange(dim).astype(complex))
    hamiltonian = np.diag(e.astype(complex))
    return a_minus, a_plus, number, hamiltonian


def apply_lowering(v, params):
    """A- applied to an amplitude vector (same length, top entry zero)."""
    v = np.asarray(v, dtype=complex)
    e = energies(v.size, params)
    out = np.zeros_like(v)
    out[:-1] = np.sqrt(e[1:]) * np.conj(phase_factors(params.alpha, e[1:] - e[:-1])) * v[1:]
    return out


def apply_raising(v, params, grow=False):
    """A+ applied to an amplitude vector.

    With ``grow=True`` the output has one extra level so that no amplitude
    is lost at the truncation edge.
    """
    v = np.asarray(v, dtype=complex)
    size = v.size + 1 if grow else v.size
    e = energies(size, params)
    out = np.zeros(size, dtype=complex)
    k = size - 1
    out[1:] = np.sqrt(e[1:]) * phase_factors(params.alpha, e[1:] - e[:-1]) * v[:k]
    return out


def number_from_hamiltonian(e, params):
    """Invert the spectrum: the (generally non-integer) n with e_n = ``e``.

    Uses N = (2e/(3 eps)) / (sqrt(2e/(3 eps) + b^2) + b), b = 1/2 + 1/(3 eps),
    which avoids cancellation for small ``e``.
    """
    e = np.asarray(e, dtype=float)
    if np.any(e < 0):
        raise DomainError("number_from_hamiltonian requires e >= 0")
    b = 0.5 + 1.0 / (3.0 * params.epsilon)
    s = 2.0 * e / (3.0 * params.epsilon)
    n = s / (np.sqrt(s + b * b) + b)
    return float(n) if n.ndim == 0 else n


def su11_generators(dim, params):
    """su(1,1) generators J-, J+, J12 and the Casimir operator.

    J+- = A+- / sqrt(3 eps) and J12 = N + 1 + 1/(3 eps).  The Casimir is
    formed as J12 (J12 - 1) - 2 J+ J-, which acts as k(k+1) with
    k = 1/(3 eps) on every basis state.
    """
    dim = _check_dim(dim, 3)
    a_minus, a_plus, number, _ = ladder_matrices(dim, params)
    scale = 1.0 / math.sqrt(3.0 * params.epsilon)
    j_minus = scale * a_minus
    j_plus = scale * a_plus
    j12 = number + (1.0 + 1.0 / (3.0 * params.epsilon)) * np.eye(dim)
    casimir = j12 @ (j12 - np.eye(dim)) - 2.0 * (j_plus @ j_minus)
    return j_minus, j_plus, j12, casimir


def radius_growth(n_max, params):
    """F(n)^(1/n) for n = 1..n_max; unbounded growth means an infinite radius."""
    n_max = int(n_max)
    if n_max < 2:
        raise DomainError("radius_growth requires n_max >= 2")
    lf = log_big_f(n_max, params)
    n = np.arange(1, n_max + 1)
    return np.exp(lf[1:] / n)
