"""Generalized intelligent states and uncertainty relations.

A generalized intelligent state with label (lambda, z) solves

    ((1 - lambda) A+ + (1 + lambda) A-) psi = 2 z psi,

which saturates the Robertson-Schroedinger inequality for X and P.  Four
independent constructions are provided: a three-term recurrence, a
continued fraction for amplitude ratios, an explicit sum over the
combinatorial coefficients Delta(n, h), and an operator power series acting
on the vacuum.  All outputs are normalized with c_0 real and positive.

In the gauge c_n = d_n exp(-i alpha e_n) the recurrence reads

    sqrt(e_{n+1}) d_{n+1} = a d_n + q sqrt(e_n) d_{n-1},
    a = 2z / (1 + lambda),  q = (lambda - 1) / (lambda + 1).
"""
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .backends import kernels as _k
from .errors import (
    ContinuedFractionBreakdown,
    DegenerateLabelError,
    DimensionError,
    DomainError,
    EvaluationError,
    TruncationError,
)
from .spectrum import apply_lowering, apply_raising, energies, ladder_matrices, log_big_f, phase_factors
from .states import DEFAULT_TAIL_TOL, FockVector, default_dim

__all__ = [
    "GisLabel",
    "UncertaintyReport",
    "xp_operators",
    "correlation_operator",
    "mean_correlation",
    "gis_classify",
    "gis_dim",
    "gis_recurrence",
    "gis_continued_fraction",
    "gis_continued_fraction_state",
    "delta_table",
    "gis_closed_form",
    "gis_operator_series",
    "gk_exponential",
    "squeezed_vacuum",
    "uncertainty_report",
    "eigen_residual",
]

_MAX_AUTO_DIM = 4096


@dataclass(frozen=True)
class GisLabel:
    """Eigenvalue label (lambda, z); lambda = -1 admits no normalizable state."""

    lam: complex
    z: complex

    def __post_init__(self):
        lam, z = complex(self.lam), complex(self.z)
        for v in (lam, z):
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise DomainError("GIS label entries must be finite")
        if lam == -1:
            raise DegenerateLabelError("lambda = -1 has no normalizable solution")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "z", z)

    @property
    def a(self):
        return 2.0 * self.z / (1.0 + self.lam)

    @property
    def q(self):
        return (self.lam - 1.0) / (self.lam + 1.0)


@dataclass(frozen=True)
class UncertaintyReport:
    """Moments of X and P and both sides of the Robertson-Schroedinger relation."""

    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    mean_g: float
    mean_c: float
    rs_left: float
    rs_right: float
    residual: float

    def as_dict(self):
        return dict(self.__dict__)


def _check_dim(dim, minimum=3):
    if int(dim) != dim or dim < minimum:
        raise DimensionError(f"dim must be an integer >= {minimum}, got {dim!r}")
    return int(dim)


def xp_operators(dim, params):
    """X = (A- + A+)/sqrt 2, P = i(A+ - A-)/sqrt 2 and G = diag(1 + 3 eps (n+1))."""
    dim = _check_dim(dim)
    a_minus, a_plus, _, _ = ladder_matrices(dim, params)
    s = 1.0 / math.sqrt(2.0)
    x = s * (a_minus + a_plus)
    p = 1j * s * (a_plus - a_minus)
    g = np.diag(1.0 + 3.0 * params.epsilon * (np.arange(dim) + 1.0)).astype(complex)
    return x, p, g


def correlation_operator(state, dim=None, params=None):
    """Matrix of {X - <X>, P - <P>} for the given state on ``dim`` levels."""
    params = state.params if params is None else params
    dim = state.dim if dim is None else _check_dim(dim)
    x, p, _ = xp_operators(dim, params)
    v = state.padded(dim).amplitudes if dim > state.dim else state.amplitudes[:dim]
    mx = np.vdot(v, x @ v).real
    mp = np.vdot(v, p @ v).real
    eye = np.eye(dim)
    xc, pc = x - mx * eye, p - mp * eye
    return xc @ pc + pc @ xc


def mean_correlation(state):
    """<C> from i<A+^2 - A-^2> - 2<X><P>, evaluated without truncation loss."""
    params = state.params
    v = state.padded(state.dim + 2).amplitudes
    v = v / np.linalg.norm(v)
    ap_v = apply_raising(v, params)
    am_v = apply_lowering(v, params)
    a2 = np.vdot(v, apply_raising(ap_v, params)) - np.vdot(v, apply_lowering(am_v, params))
    mx = math.sqrt(2.0) * np.vdot(v, am_v).real
    mp = math.sqrt(2.0) * np.vdot(v, am_v).imag
    return float((1j * a2).real - 2.0 * mx * mp)


def gis_classify(label):
    """'coherent' when |lambda| = 1 (to 1e-12), otherwise 'squeezed'."""
    return "coherent" if abs(abs(label.lam) - 1.0) <= 1e-12 else "squeezed"


def _gauge(d, params, tail_tol, what, normalize=True):
    if not np.all(np.isfinite(d)):
        raise EvaluationError(f"{what}: amplitudes overflowed")
    c = d * phase_factors(params.alpha, energies(d.size, params))
    if normalize:
        c = c / np.linalg.norm(c)
    c = c * (abs(c[0]) / c[0] if c[0] != 0 else 1.0)
    state = FockVector(c, params, tail_tol)
    if state.tail_warning is not None:
        raise TruncationError(f"{what}: {state.tail_warning}")
    return state


def gis_dim(label, params, tail_tol=DEFAULT_TAIL_TOL):
    """Smallest power-of-two multiple of the coherent heuristic that holds the tail."""
    dim = default_dim(label.z)
    if abs(label.q) >= 1.0:
        raise TruncationError(
            f"|(lambda-1)/(lambda+1)| = {abs(label.q):.3g} >= 1: no normalizable solution"
        )
    while dim <= _MAX_AUTO_DIM:
        d = _k.gis_forward(np.sqrt(energies(dim, params)), label.a, label.q, dim)
        p = np.abs(d) ** 2
        total = p.sum()
        if np.isfinite(total) and p[-1] <= tail_tol * total and p[-dim // 4:].sum() <= tail_tol * total:
            return dim
        dim *= 2
    raise TruncationError("no truncation dimension up to 4096 holds the tail tolerance")


def gis_recurrence(label, params, dim=None, tail_tol=DEFAULT_TAIL_TOL):
    """GIS amplitudes from the three-term recurrence, normalized, c_0 > 0.

    Raises
    ------
    TruncationError
        If the amplitudes do not decay within ``dim`` levels (in particular
        whenever Re lambda <= 0).
    """
    dim = gis_dim(label, params, tail_tol) if dim is None else _check_dim(dim, 2)
    d = _k.gis_forward(np.sqrt(energies(dim, params)), label.a, label.q, dim)
    return _gauge(d, params, tail_tol, "GIS recurrence")


def gis_continued_fraction(label, params, n):
    """Amplitude ratio A_n from A_1 = a, A_k = a + q e_{k-1} / A_{k-1}.

    Raises
    ------
    ContinuedFractionBreakdown
        If some A_k with k < n vanishes.
    """
    n = int(n)
    if n < 1:
        raise DomainError("continued fraction index must be >= 1")
    return _cf_values(label, params, n)[-1]


def _cf_values(label, params, n):
    e = energies(n + 1, params)
    a, q = label.a, label.q
    out = np.empty(n, dtype=complex)
    out[0] = a
    for k in range(2, n + 1):
        prev = out[k - 2]
        if prev == 0:
            raise ContinuedFractionBreakdown(f"A_{k - 1} = 0; use gis_recurrence")
        out[k - 1] = a + q * e[k - 1] / prev
    return out


def gis_continued_fraction_state(label, params, dim=None, tail_tol=DEFAULT_TAIL_TOL, fallback=False):
    """GIS amplitudes c_n = c_{n-1} A_n exp(-i alpha (e_n - e_{n-1})) / sqrt(e_n).

    With ``fallback=True`` a continued-fraction breakdown (which happens for
    instance when z = 0) is answered with :func:`gis_recurrence`.
    """
    dim = gis_dim(label, params, tail_tol) if dim is None else _check_dim(dim, 2)
    try:
        ratios = _cf_values(label, params, dim - 1)
    except ContinuedFractionBreakdown:
        if fallback:
            return gis_recurrence(label, params, dim, tail_tol)
        raise
    e = energies(dim, params)
    d = np.ones(dim, dtype=complex)
    d[1:] = np.cumprod(ratios / np.sqrt(e[1:]))
    return _gauge(d, params, tail_tol, "GIS continued fraction")


def delta_table(n_max, params):
    """Delta(n, h) for n <= n_max, h <= n_max // 2, with Delta(n, 0) = 1.

    Delta(n, h) sums e_{j1} ... e_{jh} over indices 1 <= j1 < ... < jh <= n-1
    with consecutive gaps of at least two.
    """
    return _k.delta_table(energies(n_max + 1, params), int(n_max))


def gis_closed_form(label, params, dim=None, tail_tol=DEFAULT_TAIL_TOL):
    """GIS amplitudes from the explicit Delta(n, h) expansion.

    y_n = a^n sum_h w^h Delta(n, h), w = -(1 - lambda^2) / (2z)^2, and
    c_n proportional to y_n exp(-i alpha e_n) / sqrt(F(n)).

    Raises
    ------
    DomainError
        For z = 0 (the expansion divides by z); use :func:`squeezed_vacuum`.
    """
    if label.z == 0:
        raise DomainError("closed form needs z != 0; use squeezed_vacuum")
    dim = gis_dim(label, params, tail_tol) if dim is None else _check_dim(dim, 2)
    table = delta_table(dim - 1, params)
    w = -(1.0 - label.lam ** 2) / (2.0 * label.z) ** 2
    h = np.arange(table.shape[1])
    with np.errstate(over="ignore", invalid="ignore"):
        bracket = table @ (w ** h)
        n = np.arange(dim)
        y = label.a ** n * bracket
        d = y * np.exp(-0.5 * log_big_f(dim - 1, params))
    return _gauge(d, params, tail_tol, "GIS closed form")


def _t_apply(v, a, q, e, params):
    """T v with T = a H^-1 A+ + q H^-1 A+^2; H^-1 acts on levels n >= 1 only."""
    r1 = apply_raising(v, params)
    r2 = apply_raising(r1, params)
    out = a * r1 + q * r2
    out[1:] /= e[1:]
    return out


def gis_operator_series(label, params, dim=None, tail_tol=DEFAULT_TAIL_TOL, tol=1e-16):
    """Sum of T^k |0> for k >= 0 with T = a H^-1 A+ + q H^-1 A+^2.

    T raises the level by at least one, so the series is finite on the
    truncated space; it is summed until a term is below ``tol`` relative
    to the running sum.
    """
    dim = gis_dim(label, params, tail_tol) if dim is None else _check_dim(dim, 2)
    e = energies(dim, params)
    term = np.zeros(dim, dtype=complex)
    term[0] = 1.0
    total = term.copy()
    for _ in range(dim):
        term = _t_apply(term, label.a, label.q, e, params)
        total += term
        if np.linalg.norm(term) <= tol * np.linalg.norm(total):
            break
    d = total * np.conj(phase_factors(params.alpha, e))
    return _gauge(d, params, tail_tol, "GIS operator series")


def gk_exponential(z, params, dim=None, tail_tol=DEFAULT_TAIL_TOL):
    """exp(z N H^-1 A+) |0>, normalized: the coherent state of label z."""
    z = complex(z)
    dim = default_dim(z) if dim is None else _check_dim(dim, 2)
    e = energies(dim, params)
    n = np.arange(dim)
    term = np.zeros(dim, dtype=complex)
    term[0] = 1.0
    total = term.copy()
    for k in range(1, dim):
        nxt = apply_raising(term, params)
        nxt[1:] *= z * n[1:] / e[1:]
        term = nxt / k
        total += term
        if not term.any():
            break
    d = total * np.conj(phase_factors(params.alpha, e))
    return _gauge(d, params, tail_tol, "coherent exponential")


def squeezed_vacuum(lam, params, dim=None, tail_tol=DEFAULT_TAIL_TOL):
    """GIS with z = 0: an even-level state.

    c_{2k} = c_0 q^k (e_1 e_3 ... e_{2k-1}) exp(-i alpha e_{2k}) / sqrt(F(2k)),
    with c_0^-2 = 2F1(1/2, K+1; K+3/2; |q|^2), K = 1/(3 eps), obtained by
    summing the infinite series.

    Raises
    ------
    TruncationError
        If |q| >= 1 or the tail is not contained in ``dim`` levels.
    """
    label = GisLabel(lam, 0.0)
    q = label.q
    if abs(q) >= 1.0:
        raise TruncationError(f"|(lambda-1)/(lambda+1)| = {abs(q):.3g} >= 1: not normalizable")
    dim = gis_dim(label, params, tail_tol) if dim is None else _check_dim(dim, 2)
    kk = 1.0 / (3.0 * params.epsilon)
    log_c0 = -0.5 * specfun.log_pfq((0.5, kk + 1.0), (kk + 1.5,), abs(q) ** 2).real
    e = energies(dim, params)
    lf = log_big_f(dim - 1, params)
    d = np.zeros(dim, dtype=complex)
    k = np.arange((dim + 1) // 2)
    if q == 0:
        d[0] = 1.0
    else:
        log_odd = np.concatenate([[0.0], np.cumsum(np.log(e[1:2 * k[-1]:2]))]) if k[-1] > 0 else np.zeros(1)
        log_mag = k * math.log(abs(q)) + log_odd - 0.5 * lf[2 * k]
        d[2 * k] = np.exp(log_mag + log_c0) * (q / abs(q)) ** k
    d[0] = math.exp(log_c0)
    return _gauge(d, params, tail_tol, "squeezed vacuum", normalize=False)


def eigen_residual(state, label, params=None, edge=3):
    """max |(((1-lambda) A+ + (1+lambda) A- - 2z) psi)_n| over n <= dim - edge."""
    params = state.params if params is None else params
    v = state.amplitudes
    lhs = (1.0 - label.lam) * apply_raising(v, params) + (1.0 + label.lam) * apply_lowering(v, params)
    r = lhs - 2.0 * label.z * v
    return float(np.max(np.abs(r[: state.dim - edge + 1])))


def uncertainty_report(state, params=None):
    """Expectations, variances and both sides of the RS relation.

    The state is padded by two empty levels so that X psi and P psi are
    exact (no amplitude is pushed past the truncation edge).
    """
    params = state.params if params is None else params
    v = state.padded(state.dim + 2).amplitudes
    v = v / np.linalg.norm(v)
    s = 1.0 / math.sqrt(2.0)
    lo = apply_lowering(v, params)
    up = apply_raising(v, params)
    xv = s * (lo + up)
    pv = 1j * s * (up - lo)
    mx = np.vdot(v, xv).real
    mp = np.vdot(v, pv).real
    u = xv - mx * v
    w = pv - mp * v
    var_x = float(np.vdot(u, u).real)
    var_p = float(np.vdot(w, w).real)
    mc = float(2.0 * np.vdot(u, w).real)
    g = 1.0 + 3.0 * params.epsilon * (np.arange(v.size) + 1.0)
    mg = float(np.sum(g * np.abs(v) ** 2))
    left = var_x * var_p
    right = 0.25 * (mg * mg + mc * mc)
    return UncertaintyReport(float(mx), float(mp), var_x, var_p, mg, mc, left, right, left - right)
