"""Coherent and cat states on the truncated eigenbasis.

All amplitude sequences are built from log-magnitudes (powers of |z|
against ln F(n)) and unit-modulus phase factors, so they stay finite at
large ``n`` and large ``|z|``.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import DegenerateLabelError, DomainError, TruncationError
from .spectrum import ModelParams, energies, log_big_f, phase_factors

__all__ = [
    "FockVector",
    "CoherentLabel",
    "default_dim",
    "coherent",
    "log_coherent_normalizer",
    "kernel",
    "evolve",
    "even_cat",
    "odd_cat",
    "cat_overlaps",
    "cat_normalizer",
    "real_cat",
    "imaginary_cat",
    "cat_distribution",
    "harmonic_limit_fidelity",
    "standard_coherent_amplitudes",
]

DEFAULT_TAIL_TOL = 1e-14


@dataclass(frozen=True)
class FockVector:
    """Truncated amplitude vector over the basis |0>, ..., |dim-1>.

    Parameters
    ----------
    amplitudes : array_like of complex
    params : ModelParams
    tail_tol : float, optional
        Threshold for the truncation check.  The tail is the larger of
        the top-level probability and the norm deficit 1 - ||v||^2; if it
        exceeds ``tail_tol`` a warning string is attached.
    """

    amplitudes: np.ndarray
    params: ModelParams
    tail_tol: float = DEFAULT_TAIL_TOL
    tail_warning: str = field(default=None, init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 1:
            raise DomainError("a FockVector needs at least one amplitude")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        tail = self.tail
        if tail > self.tail_tol:
            object.__setattr__(
                self, "tail_warning",
                f"truncation tail {tail:.3g} exceeds {self.tail_tol:.3g}; increase dim",
            )

    @property
    def dim(self):
        return self.amplitudes.size

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    @property
    def tail(self):
        v = self.amplitudes
        return float(max(abs(v[-1]) ** 2, 1.0 - np.vdot(v, v).real))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def inner(self, other):
        """<self|other> over the common truncated range."""
        k = min(self.dim, other.dim)
        return complex(np.vdot(self.amplitudes[:k], other.amplitudes[:k]))

    def normalized(self):
        return FockVector(self.amplitudes / self.norm(), self.params, self.tail_tol)

    def padded(self, dim):
        """Copy embedded in a larger truncated space (zero-filled)."""
        if dim < self.dim:
            raise DomainError("padded dim must not shrink the vector")
        out = np.zeros(dim, dtype=complex)
        out[: self.dim] = self.amplitudes
        return FockVector(out, self.params, self.tail_tol)


@dataclass(frozen=True)
class CoherentLabel:
    """Label (z, alpha) of a coherent state; ``alpha=None`` means the model's alpha."""

    z: complex
    alpha: float = None

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError("coherent label z must be finite")
        object.__setattr__(self, "z", z)
        if self.alpha is not None:
            object.__setattr__(self, "alpha", float(self.alpha))

    def alpha_for(self, params):
        return params.alpha if self.alpha is None else self.alpha


def _as_label(label):
    return label if isinstance(label, CoherentLabel) else CoherentLabel(label)


def default_dim(z):
    """Truncation heuristic max(40, ceil(|z|^2 + 10|z| + 20))."""
    r = abs(complex(z))
    return max(40, math.ceil(r * r + 10.0 * r + 20.0))


def _unit_powers(z, dim):
    """(z/|z|)^n for n < dim by cumulative products; 1 when z = 0."""
    z = complex(z)
    out = np.ones(dim, dtype=complex)
    if z != 0 and dim > 1:
        out[1:] = np.cumprod(np.full(dim - 1, z / abs(z)))
    return out


def _log_powers(r, dim):
    n = np.arange(dim)
    if r == 0.0:
        out = np.full(dim, -np.inf)
        out[0] = 0.0
        return out
    return n * math.log(r)


def _finish(amps, params, tail_tol, what):
    state = FockVector(amps, params, tail_tol)
    if state.tail_warning is not None:
        raise TruncationError(f"{what}: {state.tail_warning}")
    return state


def log_coherent_normalizer(z, params):
    """ln 0F1(beta; kappa |z|^2), the inverse square of a_0."""
    x = params.kappa * abs(complex(z)) ** 2
    return specfun.log_hyp0f1(params.beta, x)


def _coherent_unnormalized(z, alpha, params, dim):
    """ln|z^n / sqrt(F(n))| and the phase (z/|z|)^n exp(-i alpha e_n)."""
    r = abs(z)
    logmag = _log_powers(r, dim) - 0.5 * log_big_f(dim - 1, params)
    phase = _unit_powers(z, dim) * phase_factors(alpha, energies(dim, params))
    return logmag, phase


def coherent(label, params, dim=None, tail_tol=DEFAULT_TAIL_TOL):
    """Normalized coherent state a_n = a_0 z^n exp(-i alpha e_n) / sqrt(F(n)).

    Parameters
    ----------
    label : CoherentLabel or complex
    params : ModelParams
    dim : int, optional
        Truncation dimension; defaults to :func:`default_dim`.
    tail_tol : float
        Maximum tolerated truncation tail.

    Raises
    ------
    TruncationError
        If ``dim`` is too small for the tail tolerance.
    """
    label = _as_label(label)
    z = label.z
    dim = default_dim(z) if dim is None else int(dim)
    logmag, phase = _coherent_unnormalized(z, label.alpha_for(params), params, dim)
    amps = np.exp(logmag - 0.5 * log_coherent_normalizer(z, params)) * phase
    return _finish(amps, params, tail_tol, "coherent state")


def kernel(z, z_prime, params):
    """Overlap <z, alpha|z', alpha> of two normalized coherent states."""
    z, zp = complex(z), complex(z_prime)
    cross = specfun.log_pfq((), (params.beta,), params.kappa * z.conjugate() * zp)
    log_val = cross - 0.5 * (log_coherent_normalizer(z, params) + log_coherent_normalizer(zp, params))
    return complex(np.exp(log_val))


def evolve(state, t):
    """Time evolution exp(-i t H): amplitude n picks up exp(-i t e_n)."""
    e = energies(state.dim, state.params)
    return FockVector(state.amplitudes * phase_factors(t, e), state.params, state.tail_tol)


# --------------------------------------------------------------------------
# even and odd cats
# --------------------------------------------------------------------------

def _cat_series_args(params):
    k = 1.0 / (3.0 * params.epsilon)
    return (0.5, k + 1.0, k + 1.5), (1.5, k + 1.5, k + 2.0)


def _log_cat_sum(w, parity, params):
    """ln of sum over n of the given parity of w^n / F(n) (complex w)."""
    even_b, odd_b = _cat_series_args(params)
    x = (w / (6.0 * params.epsilon)) ** 2
    if parity == "even":
        return specfun.log_pfq((), even_b, x)
    if w == 0:
        return complex(-np.inf)
    return np.log(w / (1.0 + 3.0 * params.epsilon)) + specfun.log_pfq((), odd_b, x)


def _check_parity(parity):
    if parity not in ("even", "odd"):
        raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")


def cat_normalizer(z, parity, params):
    """N_e or N_o: the inverse square root of the parity-restricted sum."""
    _check_parity(parity)
    z = complex(z)
    if parity == "odd" and z == 0:
        raise DegenerateLabelError("odd cat state of the label z = 0 does not exist")
    return math.exp(-0.5 * _log_cat_sum(abs(z) ** 2, parity, params).real)


def _parity_cat(label, parity, params, dim, tail_tol):
    label = _as_label(label)
    z = label.z
    if parity == "odd" and z == 0:
        raise DegenerateLabelError("odd cat state of the label z = 0 does not exist")
    dim = default_dim(z) if dim is None else int(dim)
    logmag, phase = _coherent_unnormalized(z, label.alpha_for(params), params, dim)
    log_norm = _log_cat_sum(abs(z) ** 2, parity, params).real
    amps = np.exp(logmag - 0.5 * log_norm) * phase
    amps[(1 if parity == "even" else 0)::2] = 0.0
    return _finish(amps, params, tail_tol, f"{parity} cat state")


def even_cat(label, params, dim=None, tail_tol=DEFAULT_TAIL_TOL):
    """Even cat state: normalized |z> + |-z>, supported on even levels."""
    return _parity_cat(label, "even", params, dim, tail_tol)


def odd_cat(label, params, dim=None, tail_tol=DEFAULT_TAIL_TOL):
    """Odd cat state: normalized |z> - |-z>, supported on odd levels.

    Raises
    ------
    DegenerateLabelError
        For ``z = 0``, where the superposition vanishes.
    """
    return _parity_cat(label, "odd", params, dim, tail_tol)


def cat_overlaps(z, z_prime, parity, params):
    """Overlap <z|z'> of two normalized even (or odd) cat states of equal alpha.

    Computed as N(z) N(z') S(conj(z) z'), with S the parity-restricted sum
    of w^n / F(n).
    """
    _check_parity(parity)
    z, zp = complex(z), complex(z_prime)
    if parity == "odd" and (z == 0 or zp == 0):
        raise DegenerateLabelError("odd cat state of the label z = 0 does not exist")
    w = z.conjugate() * zp
    if parity == "odd" and w == 0:
        return 0j
    log_val = (
        _log_cat_sum(w, parity, params)
        - 0.5 * _log_cat_sum(abs(z) ** 2, parity, params).real
        - 0.5 * _log_cat_sum(abs(zp) ** 2, parity, params).real
    )
    return complex(np.exp(log_val))


# --------------------------------------------------------------------------
# real and imaginary cats
# --------------------------------------------------------------------------

def _series_length(r, params):
    """A level count beyond which r^(2n)/F(n) is negligible against its peak."""
    n = default_dim(r)
    while True:
        lt = 2.0 * _log_powers(r, n) - log_big_f(n - 1, params)
        if lt[-1] < lt.max() - 90.0:
            return n
        n *= 2


def _trig_cat(label, params, dim, tail_tol, kind):
    label = _as_label(label)
    z = label.z
    if kind == "imaginary" and z.imag == 0.0:
        raise DegenerateLabelError(
            "imaginary cat state needs z off the real axis (all sin(n phi) vanish)"
        )
    dim = default_dim(z) if dim is None else int(dim)
    r = abs(z)
    length = max(dim, _series_length(r, params))
    u = _unit_powers(z, length)
    trig = u.real if kind == "real" else u.imag
    logmag = _log_powers(r, length) - 0.5 * log_big_f(length - 1, params)
    with np.errstate(divide="ignore"):
        logterm = 2.0 * logmag + 2.0 * np.log(np.abs(trig))
    top = logterm.max()
    log_norm = top + math.log(np.sum(np.exp(logterm - top)))
    amps = np.exp(logmag[:dim] - 0.5 * log_norm) * trig[:dim]
    amps = amps * phase_factors(label.alpha_for(params), energies(dim, params))
    return _finish(amps, params, tail_tol, f"{kind} cat state")


def real_cat(label, params, dim=None, tail_tol=DEFAULT_TAIL_TOL):
    """Real cat state: normalized |z> + |conj z>.

    Amplitudes are N r^n cos(n phi) exp(-i alpha e_n) / sqrt(F(n)) for
    z = r e^{i phi}.  For real ``z`` this is the coherent state itself.
    """
    return _trig_cat(label, params, dim, tail_tol, "real")


def imaginary_cat(label, params, dim=None, tail_tol=DEFAULT_TAIL_TOL):
    """Imaginary cat state: normalized (|z> - |conj z>) / i.

    Amplitudes are N r^n sin(n phi) exp(-i alpha e_n) / sqrt(F(n)); the
    vacuum amplitude is zero.

    Raises
    ------
    DegenerateLabelError
        If ``z`` is real (including 0), where every amplitude vanishes.
    """
    return _trig_cat(label, params, dim, tail_tol, "imaginary")


_CAT_BUILDERS = {
    "even": even_cat,
    "odd": odd_cat,
    "real": real_cat,
    "imaginary": imaginary_cat,
}


def cat_distribution(kind, label, params, n, dim=None):
    """Occupation probability P(n) of a cat state.

    ``n`` may be an integer or an array of integers; ``dim`` defaults to
    the larger of the truncation heuristic and ``max(n) + 1``.
    """
    if kind not in _CAT_BUILDERS:
        raise DomainError(f"unknown cat kind {kind!r}")
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise DomainError("level index must be non-negative")
    label = _as_label(label)
    need = int(n_arr.max()) + 1
    dim = max(default_dim(label.z), need) if dim is None else int(dim)
    if need > dim:
        raise DomainError("level index must be below dim")
    probs = _CAT_BUILDERS[kind](label, params, dim).probabilities()
    out = probs[n_arr]
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# harmonic limit
# --------------------------------------------------------------------------

def standard_coherent_amplitudes(z, alpha, dim):
    """Harmonic-oscillator coherent state exp(-|z|^2/2) z^n exp(-i n alpha) / sqrt(n!)."""
    z = complex(z)
    n = np.arange(dim)
    logmag = _log_powers(abs(z), dim) - 0.5 * np.array([math.lgamma(k + 1.0) for k in n])
    logmag -= 0.5 * abs(z) ** 2
    return np.exp(logmag) * _unit_powers(z, dim) * np.exp(-1j * alpha * n)


def harmonic_limit_fidelity(z, alpha, eps_sequence, dim=None):
    """|<coherent_eps(z, alpha) | standard coherent state>| for each eps.

    Examples
    --------
    >>> f = harmonic_limit_fidelity(1.0, 0.0, [0.1, 1e-4])
    >>> bool(f[0] < f[1] <= 1.0 + 1e-12)
    True
    """
    eps = [float(e) for e in eps_sequence]
    if any(e <= 0 for e in eps):
        raise DomainError("eps_sequence must be positive")
    if any(b > a for a, b in zip(eps, eps[1:])):
        warnings.warn("eps_sequence is not decreasing", stacklevel=2)
    dim = default_dim(z) if dim is None else int(dim)
    ref = standard_coherent_amplitudes(z, alpha, dim)
    out = []
    for e in eps:
        v = coherent(CoherentLabel(z, alpha), ModelParams(e, alpha), dim)
        out.append(abs(np.vdot(v.amplitudes, ref)))
    return np.array(out)
