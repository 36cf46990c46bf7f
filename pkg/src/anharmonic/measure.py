"""Resolution of unity: the Bessel-K radial weight, moments and reconstruction.

The measure is dmu(z) = 0F1(beta; kappa r^2) h(r^2) r dr dphi.  Its 0F1
factor cancels the normalization of the coherent-state projector, so all
integrals here use unnormalized projectors against h(r^2) r dr dphi.
Radial integrals are done in r (so that the weight decays like
exp(-c r)) with adaptive Gauss-Legendre panels, and every integrand is
handled as a logarithm until the final weighted sum.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .backends import kernels as _k
from .errors import DomainError, EvaluationError, QuadratureError
from .spectrum import energies, log_big_f, phase_factors
from .states import FockVector, _cat_series_args

__all__ = [
    "RadialQuadrature",
    "weight_order",
    "weight_h",
    "log_weight_h",
    "radial_quadrature",
    "gauss_legendre_quadrature",
    "moment_check",
    "resolution_of_unity",
    "cat_measures",
    "cat_completeness",
    "reconstruct",
]

_LOG_CUTOFF = math.log(1e18)
_LOG_2PI = math.log(2.0 * math.pi)


def weight_order(params):
    """Order nu = 1 + 2/(3 eps) of the Bessel function in the weight."""
    return 1.0 + params.kappa


def log_weight_h(x, params):
    """ln h(x), elementwise for positive ``x``.

    h(x) = 4 u^(nu/2) K_nu(2 sqrt(u)) / (3 pi eps Gamma(beta)) with
    u = 2x/(3 eps) and nu = 1 + 2/(3 eps).
    """
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)):
        raise DomainError("weight_h requires x > 0")
    nu = weight_order(params)
    u = params.kappa * x
    logk = specfun.log_bessel_k(nu, 2.0 * np.sqrt(u))
    out = (
        math.log(4.0)
        + 0.5 * nu * np.log(u)
        + logk
        - math.log(3.0 * math.pi * params.epsilon)
        - math.lgamma(params.beta)
    )
    return float(out) if np.ndim(out) == 0 else out


def weight_h(x, params):
    """Radial weight h(x) > 0 of the coherent-state measure.

    Examples
    --------
    >>> from anharmonic.spectrum import ModelParams
    >>> bool(weight_h(1.0, ModelParams(0.1)) > 0)
    True
    """
    return np.exp(log_weight_h(x, params))


@dataclass(frozen=True)
class RadialQuadrature:
    """Radial rule on [0, r_max] for the family r^(2n+1) h(r^2), n <= n_max.

    Attributes
    ----------
    nodes, weights : ndarray
        Gauss-Legendre nodes and weights (all positive).
    r_max : float
        Cut-off; the top integrand there is below 1e-18 of its peak.
    n_nodes : int
    n_max : int
        Highest level the rule was certified for.
    params : ModelParams
    log_h : ndarray
        ln h(r^2) at the nodes.
    doubling_change : float
        Largest relative change of a certified integral when every panel
        is split in two (``nan`` for uncertified rules).
    """

    nodes: np.ndarray
    weights: np.ndarray
    r_max: float
    n_nodes: int
    n_max: int
    params: object
    log_h: np.ndarray
    doubling_change: float = math.nan

    def log_integrals(self, powers):
        """ln of sum_j w_j r_j^p h(r_j^2) for each power p."""
        p = np.asarray(powers, dtype=float)
        logs = p[:, None] * np.log(self.nodes)[None, :] + self.log_h[None, :] + np.log(self.weights)
        return _logsumexp_rows(logs)


def _logsumexp_rows(logs):
    top = logs.max(axis=1)
    return top + np.log(np.sum(np.exp(logs - top[:, None]), axis=1))


def _log_family(r, log_h, params, n_max):
    """ln[(2 pi / F(n)) r^(2n+1) h(r^2)] for n = 0..n_max (rows)."""
    n = np.arange(n_max + 1)[:, None]
    lf = log_big_f(n_max, params)[:, None]
    return _LOG_2PI - lf + (2 * n + 1) * np.log(r)[None, :] + log_h[None, :]


def _find_r_max(params, n_max):
    """Smallest r beyond every peak where all family members fall below 1e-18 of peak."""
    upper = 1.0
    for _ in range(200):
        r = np.linspace(upper / 800.0, upper, 800)
        logs = _log_family(r, log_weight_h(r * r, params), params, n_max)
        peaks = logs.max(axis=1)
        below = np.all(logs < (peaks - _LOG_CUTOFF)[:, None], axis=0)
        past_peak = r > r[np.argmax(logs, axis=1)].max()
        ok = below & past_peak
        if ok.any():
            return float(r[np.argmax(ok)])
        upper *= 1.5
    raise QuadratureError("could not locate the tail cut-off of the radial weight")


def _panel_rule(edges, order):
    x, w = np.polynomial.legendre.leggauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + b) * 0.5 + half * x[None, :]
    weights = half * w[None, :]
    return nodes, weights


def _panel_integrals(edges, order, params, n_max):
    """Per-panel integrals, shape (n_max+1, n_panels), plus the flat rule."""
    nodes, weights = _panel_rule(edges, order)
    flat = nodes.reshape(-1)
    log_h = log_weight_h(flat * flat, params)
    logs = _log_family(flat, log_h, params, n_max) + np.log(weights.reshape(-1))[None, :]
    vals = np.exp(logs).reshape(n_max + 1, *nodes.shape).sum(axis=2)
    return vals, flat, weights.reshape(-1), log_h


def radial_quadrature(params, n_max, tol=1e-9, order=24, panel_tol=1e-13, max_panels=4096):
    """Adaptive, doubling-certified radial rule for levels n <= ``n_max``.

    Panels are bisected until the order-``order`` and order-``2*order``
    Gauss-Legendre results agree to ``panel_tol`` (relative to each
    normalized integral).  The final rule is then compared with the rule
    obtained by splitting every panel in two.

    Raises
    ------
    QuadratureError
        If adaptivity exceeds ``max_panels`` or the doubling test changes an
        integral by ``tol`` or more (relative).
    """
    n_max = int(n_max)
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    r_max = _find_r_max(params, n_max)
    edges = np.linspace(0.0, r_max, 9)
    while True:
        lo, *_ = _panel_integrals(edges, order, params, n_max)
        hi, *_ = _panel_integrals(edges, 2 * order, params, n_max)
        total = hi.sum(axis=1)
        err = np.max(np.abs(hi - lo) / total[:, None], axis=0)
        bad = err > panel_tol
        if not bad.any():
            break
        if edges.size - 1 + bad.sum() > max_panels:
            raise QuadratureError("radial quadrature exceeded the panel budget")
        mids = 0.5 * (edges[:-1] + edges[1:])[bad]
        edges = np.sort(np.concatenate([edges, mids]))
    vals, nodes, weights, log_h = _panel_integrals(edges, 2 * order, params, n_max)
    mids = 0.5 * (edges[:-1] + edges[1:])
    fine_edges = np.sort(np.concatenate([edges, mids]))
    fine, *_ = _panel_integrals(fine_edges, 2 * order, params, n_max)
    coarse_total = vals.sum(axis=1)
    change = float(np.max(np.abs(fine.sum(axis=1) / coarse_total - 1.0)))
    if not change < tol:
        raise QuadratureError(f"node doubling changed an integral by {change:.2e} >= {tol:.1e}")
    return RadialQuadrature(nodes, weights, r_max, nodes.size, n_max, params, log_h, change)


def gauss_legendre_quadrature(params, n_max, n_nodes, r_max=None):
    """Single-panel Gauss-Legendre rule on [0, r_max]; not certified."""
    if r_max is None:
        r_max = _find_r_max(params, n_max)
    nodes, weights = _panel_rule(np.array([0.0, float(r_max)]), int(n_nodes))
    nodes, weights = nodes.reshape(-1), weights.reshape(-1)
    return RadialQuadrature(
        nodes, weights, float(r_max), nodes.size, int(n_max), params,
        log_weight_h(nodes * nodes, params),
    )


def _check_quad(quad, params, n_needed):
    if quad.params != params:
        raise DomainError("quadrature was built for different model parameters")
    if n_needed > quad.n_max:
        raise DomainError(f"quadrature covers levels up to {quad.n_max}, need {n_needed}")


def moment_check(n, params, quad=None):
    """Mellin moment int_0^inf y^(n-1) g(y) dy against Gamma(n) Gamma(n + 2/(3 eps) + 1).

    In terms of the radial weight the moment equals
    (3 pi eps / 2) Gamma(beta) kappa^(n-1) (2 kappa) int r^(2n-1) h(r^2) dr.

    Returns
    -------
    computed, expected, rel_err : float
        ``rel_err`` is computed / expected - 1 (signed).
    """
    n = int(n)
    if n < 1:
        raise DomainError("moment index n must be >= 1")
    if quad is None:
        quad = radial_quadrature(params, n - 1)
    _check_quad(quad, params, n - 1)
    eps = params.epsilon
    log_int = quad.log_integrals([2 * n - 1])[0]
    log_computed = (
        math.log(1.5 * math.pi * eps)
        + math.lgamma(params.beta)
        + (n - 1) * math.log(params.kappa)
        + math.log(2.0 * params.kappa)
        + log_int
    )
    log_expected = math.lgamma(n) + math.lgamma(n + params.kappa + 1.0)
    rel_err = math.expm1(log_computed - log_expected)
    if log_computed > 709.0 or log_expected > 709.0:
        raise EvaluationError("moment overflows double precision; compare logarithms instead")
    return math.exp(log_computed), math.exp(log_expected), rel_err


def _unity_diagonal(quad, params, dim):
    n = np.arange(dim)
    lf = log_big_f(dim - 1, params)
    return np.exp(_LOG_2PI - lf + quad.log_integrals(2 * n + 1))


def resolution_of_unity(dim, params, quad=None):
    """Matrix of int |z><z| dmu(z) on the truncated basis.

    Off-diagonal entries vanish by the angular integral and are set to
    exact zeros; the diagonal is (2 pi / F(n)) int r^(2n+1) h(r^2) dr.
    """
    dim = int(dim)
    if dim < 1:
        raise DomainError("dim must be positive")
    if quad is None:
        quad = radial_quadrature(params, dim - 1)
    _check_quad(quad, params, dim - 1)
    return np.diag(_unity_diagonal(quad, params, dim).astype(complex))


def _log_parity_sum(r, parity, params):
    """ln of the parity-restricted sum of r^(2n)/F(n) (the inverse squared N)."""
    even_b, odd_b = _cat_series_args(params)
    r = np.asarray(r, dtype=float)
    x = np.ascontiguousarray((r * r / (6.0 * params.epsilon)) ** 2).reshape(-1)
    den = np.array(even_b if parity == "even" else odd_b)
    pol = specfun.DEFAULT_POLICY
    logs, ok = _k.pfq_real(np.empty(0, dtype=np.complex128), den, x,
                           pol.rel_tol, pol.max_terms, pol.overflow_guard)
    if not np.all(ok):
        raise EvaluationError("0F3 normalizer series did not converge")
    logs = logs.reshape(r.shape)
    if parity == "odd":
        logs = logs + np.log(r * r / (1.0 + 3.0 * params.epsilon))
    return logs


def cat_measures(parity, r, phi, params):
    """Measure density N_parity(r)^(-2) h(r^2) r for even or odd cats (phi-independent)."""
    if parity not in ("even", "odd"):
        raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0.0)):
        raise DomainError("cat_measures requires r > 0")
    np.broadcast(r_arr, np.asarray(phi, dtype=float))
    out = np.exp(_log_parity_sum(r_arr, parity, params) + log_weight_h(r_arr * r_arr, params) + np.log(r_arr))
    return float(out) if out.ndim == 0 else out


def cat_completeness(dim, params, quad=None):
    """Diagonal of the even plus odd cat completeness integral.

    Each level n receives int |<n|cat(z)>|^2 dmu_parity(z) from the cat of
    its own parity.  The normalizers N_e, N_o are evaluated at every node
    so the result checks them against the radial weight.
    """
    dim = int(dim)
    if quad is None:
        quad = radial_quadrature(params, dim - 1)
    _check_quad(quad, params, dim - 1)
    r = quad.nodes
    n = np.arange(dim)
    lf = log_big_f(dim - 1, params)
    out = np.empty(dim)
    for parity, sel in (("even", n % 2 == 0), ("odd", n % 2 == 1)):
        log_sum = _log_parity_sum(r, parity, params)
        # |amp_n|^2 = N^2 r^(2n)/F(n) and density = N^(-2) h r
        log_amp2 = -log_sum[None, :] + 2 * n[sel][:, None] * np.log(r)[None, :] - lf[sel][:, None]
        log_density = log_sum + quad.log_h + np.log(r)
        logs = log_amp2 + log_density[None, :] + np.log(quad.weights)[None, :]
        out[sel] = np.exp(_LOG_2PI + _logsumexp_rows(logs))
    return out


def reconstruct(state, quad=None, params=None):
    """Rebuild a state from its coherent-state overlaps.

    Evaluates int |z> <z|g> dmu(z) on the product of the radial rule and
    a uniform angular grid of 2*dim points, which integrates the angular
    factors exp(i (m - n) phi) exactly.
    """
    params = state.params if params is None else params
    dim = state.dim
    if quad is None:
        quad = radial_quadrature(params, dim - 1)
    _check_quad(quad, params, dim - 1)
    n = np.arange(dim)
    n_phi = 2 * dim
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    lf = log_big_f(dim - 1, params)
    # sqrt of the radial weight folded into each unnormalized amplitude
    log_s = (
        n[None, :] * np.log(quad.nodes)[:, None]
        - 0.5 * lf[None, :]
        + 0.5 * (quad.log_h + np.log(quad.nodes) + np.log(quad.weights))[:, None]
    )
    s = np.exp(log_s)
    ang = np.exp(1j * np.outer(phi, n)) * phase_factors(params.alpha, energies(dim, params))[None, :]
    b = (s[:, None, :] * ang[None, :, :]).reshape(-1, dim)
    g = state.amplitudes
    out = b.T @ (b.conj() @ g) * (2.0 * np.pi / n_phi)
    return FockVector(out, params, state.tail_tol)
