"""Scalar loop kernels shared by both backends.

Everything here is written in the subset of Python that numba's nopython
mode accepts: ``math`` calls, float/complex scalars and numpy arrays.  The
numba backend compiles these functions; the numpy backend calls them as
plain Python where a loop cannot be vectorized (series with data-dependent
stopping, recurrences).
"""
import math

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1, Dekker splitting constant
_LN2 = math.log(2.0)
_RESCALE_BITS = 600
_RESCALE = 2.0 ** -_RESCALE_BITS

# Branch tags reported by the K_nu dispatcher.
BRANCH_SERIES = 0
BRANCH_INTEGRAL = 1
BRANCH_HANKEL = 2

K_SERIES_MAX_X = 2.0
K_HANKEL_MIN_X = 25.0
K_SERIES_MAX_LOSS = 1.0e4


# ---------------------------------------------------------------------------
# double-double arithmetic (error-free transformations)
# ---------------------------------------------------------------------------

def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ahi = t - (t - a)
    alo = a - ahi
    t = _SPLIT * b
    bhi = t - (t - b)
    blo = b - bhi
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def dd_add(ah, al, bh, bl):
    s1, s2 = two_sum(ah, bh)
    t1, t2 = two_sum(al, bl)
    s2 += t1
    s1, s2 = quick_two_sum(s1, s2)
    s2 += t2
    return quick_two_sum(s1, s2)


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e += ah * bl + al * bh
    return quick_two_sum(p, e)


def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = dd_mul(bh, bl, q1, 0.0)
    rh, rl = dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = dd_mul(bh, bl, q2, 0.0)
    rh, rl = dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add(q1, q2, q3, 0.0)


def cdd_mul(ar, arl, ai, ail, br, brl, bi, bil):
    """(a) * (b) for complex double-doubles stored as (re_hi, re_lo, im_hi, im_lo)."""
    rrh, rrl = dd_mul(ar, arl, br, brl)
    iih, iil = dd_mul(ai, ail, bi, bil)
    reh, rel = dd_add(rrh, rrl, -iih, -iil)
    rih, ril = dd_mul(ar, arl, bi, bil)
    irh, irl = dd_mul(ai, ail, br, brl)
    imh, iml = dd_add(rih, ril, irh, irl)
    return reh, rel, imh, iml


# ---------------------------------------------------------------------------
# generalized hypergeometric series pFq(num; den; x)
# ---------------------------------------------------------------------------

def pfq_dd(num, den, xr, xi, rel_tol, max_terms, guard):
    """Sum pFq with complex numerator and real denominator parameters.

    Terms are generated by the ratio recurrence and accumulated in complex
    double-double arithmetic.  When the running sum exceeds ``guard`` the
    sum and current term are rescaled by an exact power of two and the
    exponent is carried in ``log_scale``.

    Returns ``(re, im, log_scale, n_terms, converged, log_max_term)``; the
    value is ``(re + i im) * exp(log_scale)``.
    """
    tr, trl, ti, til = 1.0, 0.0, 0.0, 0.0
    sr, srl, si, sil = 1.0, 0.0, 0.0, 0.0
    log_scale = 0.0
    log_max = 0.0
    p = num.shape[0]
    q = den.shape[0]
    converged = 0
    n = 0
    while n < max_terms:
        fn = float(n)
        # numerator factors prod(a_j + n), complex dd
        nr, nrl, ni, nil = 1.0, 0.0, 0.0, 0.0
        for j in range(p):
            ah, al = two_sum(num[j].real, fn)
            nr, nrl, ni, nil = cdd_mul(nr, nrl, ni, nil, ah, al, num[j].imag, 0.0)
        # denominator prod(b_j + n) * (n + 1), real dd
        dh, dl = fn + 1.0, 0.0
        for j in range(q):
            bh, bl = two_sum(den[j], fn)
            dh, dl = dd_mul(dh, dl, bh, bl)
        nr, nrl, ni, nil = cdd_mul(nr, nrl, ni, nil, xr, 0.0, xi, 0.0)
        nr, nrl = dd_div(nr, nrl, dh, dl)
        ni, nil = dd_div(ni, nil, dh, dl)
        tr, trl, ti, til = cdd_mul(tr, trl, ti, til, nr, nrl, ni, nil)
        sr, srl = dd_add(sr, srl, tr, trl)
        si, sil = dd_add(si, sil, ti, til)
        n += 1
        tmag = math.hypot(tr, ti)
        smag = math.hypot(sr, si)
        if tmag > 0.0:
            lt = math.log(tmag) + log_scale
            if lt > log_max:
                log_max = lt
        if smag > guard:
            sr *= _RESCALE
            srl *= _RESCALE
            si *= _RESCALE
            sil *= _RESCALE
            tr *= _RESCALE
            trl *= _RESCALE
            ti *= _RESCALE
            til *= _RESCALE
            log_scale += _RESCALE_BITS * _LN2
            tmag *= _RESCALE
            smag *= _RESCALE
        if tmag == 0.0:
            converged = 1
            break
        ratio = math.hypot(nr, ni)
        if ratio < 1.0 and tmag <= rel_tol * smag:
            converged = 1
            break
    return sr + srl, si + sil, log_scale, n, converged, log_max


# ---------------------------------------------------------------------------
# modified Bessel function K_nu, three branches
# ---------------------------------------------------------------------------

def _log_abs_gamma_sign(x):
    """Return (log|Gamma(x)|, sign Gamma(x)) for non-integer or positive x."""
    if x > 0.0:
        return math.lgamma(x), 1.0
    k = math.floor(-x)
    sign = 1.0 if (int(k) % 2 == 1) else -1.0
    return math.lgamma(x), sign


def logk_series(nu, x):
    """log K_nu(x) from (pi/2)(I_-nu - I_nu)/sin(nu pi).

    Returns ``(logk, loss)`` where ``loss`` estimates the cancellation factor
    (|I_-nu| + |I_nu|) / |I_-nu - I_nu|; ``loss`` is ``inf`` when the
    difference has the wrong sign or the order is an integer.
    """
    nu = abs(nu)
    s = math.sin(math.pi * nu)
    if s == 0.0 or nu == math.floor(nu):
        return math.nan, math.inf
    y = 0.25 * x * x
    lx = math.log(0.5 * x)
    lg_m, sg_m = _log_abs_gamma_sign(1.0 - nu)
    lg_p = math.lgamma(1.0 + nu)
    l_m = -nu * lx - lg_m
    l_p = nu * lx - lg_p
    # S_- and S_+ are 0F1(1 -+ nu; x^2/4) partial sums
    t_m = 1.0
    t_p = 1.0
    s_m = 1.0
    s_p = 1.0
    abs_m = 1.0
    n = 0
    while n < 500:
        fn = float(n)
        t_m = t_m * y / ((fn + 1.0) * (fn + 1.0 - nu))
        t_p = t_p * y / ((fn + 1.0) * (fn + 1.0 + nu))
        s_m += t_m
        s_p += t_p
        abs_m += abs(t_m)
        n += 1
        if abs(t_m) <= 1e-17 * abs(s_m) and abs(t_p) <= 1e-17 * s_p and fn > nu:
            break
    rel = math.exp(l_p - l_m)
    diff = sg_m * s_m - rel * s_p
    if diff * s <= 0.0:
        return math.nan, math.inf
    loss = (abs_m + rel * s_p) / abs(diff)
    logk = math.log(0.5 * math.pi) + l_m + math.log(abs(diff)) - math.log(abs(s))
    return logk, loss


def logk_hankel(nu, x):
    """log K_nu(x) from the large-argument (Hankel) expansion.

    Returns ``(logk, ok)``; ``ok`` is 0 when the asymptotic series starts to
    diverge before reaching double-precision accuracy.
    """
    mu = 4.0 * nu * nu
    term = 1.0
    total = 1.0
    k = 1
    while k < 400:
        fk = float(k)
        new = term * (mu - (2.0 * fk - 1.0) ** 2) / (8.0 * fk * x)
        if abs(new) > abs(term) and fk > nu:
            return math.nan, 0
        term = new
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return 0.5 * math.log(0.5 * math.pi / x) - x + math.log(total), 1
        k += 1
    return math.nan, 0


def _log_integrand(nu, x, t):
    y = abs(nu * t)
    return -x * math.cosh(t) + y + math.log1p(math.exp(-2.0 * y)) - _LN2


def integral_step(nu, x):
    return min(0.25, 0.35 / (x * x + nu * nu) ** 0.25)


def logk_integral(nu, x):
    """log K_nu(x) from the trapezoidal rule on int_0^inf e^{-x cosh t} cosh(nu t) dt.

    The integrand is even and analytic in a strip, so the trapezoidal rule
    converges geometrically; all summands are positive.
    """
    nu = abs(nu)
    h = integral_step(nu, x)
    tstar = math.asinh(nu / x) if nu > 0.0 else 0.0
    peak = _log_integrand(nu, x, tstar)
    nmax = 1
    while _log_integrand(nu, x, nmax * h) > peak - 42.0 or nmax * h < tstar:
        nmax += 1
    acc = 0.5 * math.exp(_log_integrand(nu, x, 0.0) - peak)
    for k in range(1, nmax + 1):
        acc += math.exp(_log_integrand(nu, x, k * h) - peak)
    return peak + math.log(h * acc)


def logk_dispatch(nu, x):
    """Branch-selecting log K_nu(x); returns ``(logk, branch)``."""
    nu = abs(nu)
    if x <= K_SERIES_MAX_X:
        v, loss = logk_series(nu, x)
        if loss <= K_SERIES_MAX_LOSS:
            return v, BRANCH_SERIES
    elif x >= K_HANKEL_MIN_X:
        v, ok = logk_hankel(nu, x)
        if ok == 1:
            return v, BRANCH_HANKEL
    return logk_integral(nu, x), BRANCH_INTEGRAL


def log_bessel_k_loop(nu, xs):
    out = np.empty(xs.shape[0])
    branch = np.empty(xs.shape[0], dtype=np.int64)
    for i in range(xs.shape[0]):
        v, b = logk_dispatch(nu, xs[i])
        out[i] = v
        branch[i] = b
    return out, branch


def pfq_real_loop(num, den, xs, rel_tol, max_terms, guard):
    """Log-magnitude of pFq at many non-negative real arguments."""
    out = np.empty(xs.shape[0])
    ok = np.empty(xs.shape[0], dtype=np.int64)
    for i in range(xs.shape[0]):
        sr, si, ls, n, conv, lm = pfq_dd(num, den, xs[i], 0.0, rel_tol, max_terms, guard)
        out[i] = math.log(abs(sr)) + ls
        ok[i] = conv
    return out, ok


# ---------------------------------------------------------------------------
# recurrences
# ---------------------------------------------------------------------------

def delta_table(e, n_max):
    """D[n, h] = sum over h-subsets of {1..n-1} with gaps >= 2 of prod e_j.

    Filled by D[n+1, h] = D[n, h] + e_n D[n-1, h-1].
    """
    h_max = n_max // 2
    table = np.zeros((n_max + 1, h_max + 1))
    table[0, 0] = 1.0
    if n_max >= 1:
        table[1, 0] = 1.0
    for n in range(1, n_max):
        table[n + 1, 0] = 1.0
        for h in range(1, h_max + 1):
            table[n + 1, h] = table[n, h] + e[n] * table[n - 1, h - 1]
    return table


def gis_forward(sqrt_e, a, q, dim):
    """Gauge-free GIS amplitudes d_n with d_0 = 1.

    sqrt(e_{n+1}) d_{n+1} = a d_n + q sqrt(e_n) d_{n-1}, where
    a = 2z/(1+lambda) and q = (lambda-1)/(lambda+1).
    """
    d = np.zeros(dim, dtype=np.complex128)
    d[0] = 1.0
    if dim > 1:
        d[1] = a * d[0] / sqrt_e[1]
    for n in range(1, dim - 1):
        d[n + 1] = (a * d[n] + q * sqrt_e[n] * d[n - 1]) / sqrt_e[n + 1]
    return d
