"""Pure numpy / Python kernels.

Scalar kernels are the plain-Python loop sources.  Array kernels that can
be expressed with whole-array operations are vectorized here.
"""
import numpy as np

from . import _loops
from ._loops import (  # noqa: F401
    logk_dispatch,
    logk_hankel,
    logk_integral,
    logk_series,
    pfq_dd,
    pfq_real_loop as pfq_real,
)

NAME = "numpy"


def log_bessel_k(nu, xs):
    """Vectorized log K_nu over an array of arguments.

    The Hankel and integral branches are evaluated with array operations;
    the small-argument series is left to the scalar loop.
    """
    xs = np.asarray(xs, dtype=float)
    out = np.empty(xs.shape)
    branch = np.full(xs.shape, _loops.BRANCH_INTEGRAL, dtype=np.int64)
    todo = np.ones(xs.shape, dtype=bool)
    nu = abs(float(nu))

    for i in np.flatnonzero(xs <= _loops.K_SERIES_MAX_X):
        v, loss = _loops.logk_series(nu, xs[i])
        if loss <= _loops.K_SERIES_MAX_LOSS:
            out[i] = v
            branch[i] = _loops.BRANCH_SERIES
            todo[i] = False

    big = np.flatnonzero(xs >= _loops.K_HANKEL_MIN_X)
    if big.size:
        v, ok = _hankel_vec(nu, xs[big])
        out[big[ok]] = v[ok]
        branch[big[ok]] = _loops.BRANCH_HANKEL
        todo[big[ok]] = False

    rest = np.flatnonzero(todo)
    if rest.size:
        out[rest] = _integral_vec(nu, xs[rest])
    return out, branch


def _hankel_vec(nu, x):
    mu = 4.0 * nu * nu
    term = np.ones_like(x)
    total = np.ones_like(x)
    done = np.zeros(x.shape, dtype=bool)
    bad = np.zeros(x.shape, dtype=bool)
    for k in range(1, 400):
        new = term * (mu - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        live = ~(done | bad)
        grow = live & (np.abs(new) > np.abs(term)) & (k > nu)
        bad |= grow
        live &= ~grow
        term = np.where(live, new, term)
        total = np.where(live, total + new, total)
        done |= live & (np.abs(new) <= 1e-17 * np.abs(total))
        if not (~(done | bad)).any():
            break
    with np.errstate(invalid="ignore", divide="ignore"):
        v = 0.5 * np.log(0.5 * np.pi / x) - x + np.log(total)
    return v, done


def _log_integrand(nu, x, t):
    y = np.abs(nu * t)
    return -x * np.cosh(t) + y + np.log1p(np.exp(-2.0 * y)) - np.log(2.0)


def _integral_vec(nu, x):
    h = np.minimum(0.25, 0.35 / (x * x + nu * nu) ** 0.25)
    tstar = np.arcsinh(nu / x) if nu > 0 else np.zeros_like(x)
    peak = _log_integrand(nu, x, tstar)
    # the integrand is unimodal in t, so the cut-off can be located per point
    nmax = np.ones(x.shape, dtype=np.int64)
    while True:
        grow = (_log_integrand(nu, x, nmax * h) > peak - 42.0) | (nmax * h < tstar)
        if not grow.any():
            break
        nmax = nmax + grow
    kmax = int(nmax.max())
    k = np.arange(kmax + 1)[:, None]
    logs = _log_integrand(nu, x[None, :], k * h[None, :]) - peak[None, :]
    w = np.where(k <= nmax[None, :], 1.0, 0.0)
    w[0] = 0.5
    acc = np.sum(w * np.exp(logs), axis=0)
    return peak + np.log(h * acc)


def delta_table(e, n_max):
    h_max = n_max // 2
    table = np.zeros((n_max + 1, h_max + 1))
    table[0, 0] = 1.0
    if n_max >= 1:
        table[1, 0] = 1.0
    # overflow to inf is left to the caller, as in the compiled kernel
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_max):
            table[n + 1, 0] = 1.0
            table[n + 1, 1:] = table[n, 1:] + e[n] * table[n - 1, :-1]
    return table


gis_forward = _loops.gis_forward
