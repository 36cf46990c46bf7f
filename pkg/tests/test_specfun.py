import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from anharmonic import specfun
from anharmonic.errors import (
    DomainError,
    EvaluationError,
    OrderError,
    PoleError,
    PrecisionError,
)
from anharmonic.specfun import SeriesPolicy


def rel(a, b):
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------- ln_gamma

@pytest.mark.parametrize("x", [1.0, 0.5, 11.0, 1e-3, 2.5, 123.4, 9999.0])
def test_ln_gamma_matches_oracle(x):
    ref = oracles.ln_gamma(x)
    assert abs(specfun.ln_gamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_ln_gamma_examples():
    assert specfun.ln_gamma(1) == 0.0
    assert specfun.ln_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
    assert specfun.ln_gamma(11) == pytest.approx(math.log(math.factorial(10)), rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_ln_gamma_domain(x):
    with pytest.raises(DomainError):
        specfun.ln_gamma(x)


# ---------------------------------------------------------------- series

def test_policy_validation():
    with pytest.raises(DomainError):
        SeriesPolicy(rel_tol=1e-3)
    with pytest.raises(DomainError):
        SeriesPolicy(rel_tol=0.0)
    with pytest.raises(DomainError):
        SeriesPolicy(max_terms=10)
    SeriesPolicy(rel_tol=1e-6, max_terms=64)


def test_hyp0f1_examples():
    assert specfun.hyp0f1(3.3, 0) == 1
    assert specfun.hyp0f1(0.5, 0.25).real == pytest.approx(math.cosh(1.0), rel=1e-15)
    exact = sum(1.0 / (math.factorial(n) * math.factorial(n + 1)) for n in range(40))
    assert specfun.hyp0f1(2, 1).real == pytest.approx(exact, rel=1e-15)


@pytest.mark.parametrize("b", [0, -1, -7])
def test_pole_error(b):
    with pytest.raises(PoleError):
        specfun.hyp0f1(b, 1.0)
    with pytest.raises(PoleError):
        specfun.hyp0f3(0.5, b, 2.0, 1.0)


def test_max_terms_reports_failure():
    pol = SeriesPolicy(max_terms=64)
    with pytest.raises(EvaluationError):
        specfun.hyp0f1(1.0, 5000.0, pol)


def test_cancellation_detected():
    # 0F1(1; -x) alternates with peak terms ~ e^{2 sqrt x} while the value is O(1)
    with pytest.raises(PrecisionError):
        specfun.hyp0f1(1.0, -2000.0)


@settings(max_examples=60, deadline=None)
@given(
    b=st.floats(min_value=0.05, max_value=40.0),
    r=st.floats(min_value=0.0, max_value=50.0),
    theta=st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_hyp0f1_against_bruteforce(b, r, theta):
    x = r * complex(math.cos(theta), math.sin(theta))
    ref = oracles.pfq_series((), (b,), x, n_terms=500)
    try:
        val = specfun.hyp0f1(b, x)
    except PrecisionError:
        # only legitimate when the alternating sum really cancels
        assert abs(ref) < 1e-3 * oracles.pfq_series((), (b,), abs(x), n_terms=500).real
        return
    assert rel(val, ref) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(b=st.floats(min_value=1.05, max_value=30.0), x=st.floats(min_value=-40.0, max_value=50.0))
def test_hyp0f1_contiguity(b, x):
    lhs = specfun.hyp0f1(b - 1, x) - specfun.hyp0f1(b, x)
    rhs = x / (b * (b - 1)) * specfun.hyp0f1(b + 1, x)
    assert abs(lhs - rhs) <= 1e-10 * max(abs(rhs), abs(specfun.hyp0f1(b, x)))


def test_hyp0f3_examples():
    assert specfun.hyp0f3(0.5, 1.0, 1.5, 0) == 1
    x = 1.0 / 16.0
    direct = sum(
        x ** k / (math.factorial(k) * math.gamma(0.5 + k) / math.gamma(0.5)
                  * math.gamma(1 + k) * math.gamma(1.5 + k) / math.gamma(1.5))
        for k in range(30)
    )
    assert specfun.hyp0f3(0.5, 1.0, 1.5, x).real == pytest.approx(direct, rel=1e-14)


@pytest.mark.parametrize("bs,x", [((0.5, 4.3, 4.8), 12.0), ((1.5, 2.2, 2.7), 300.0 + 50j), ((0.5, 14.3, 14.8), 1e5)])
def test_hyp0f3_oracle(bs, x):
    assert rel(specfun.hyp0f3(*bs, x), oracles.pfq_series((), bs, x)) <= 1e-10


def test_hyp1f1_examples():
    assert specfun.hyp1f1(0.3, 2.0, 0) == 1
    assert specfun.hyp1f1(1, 2, 1).real == pytest.approx(math.e - 1, rel=1e-15)


def test_hyp1f1_kummer_identity_grid():
    rng = np.random.default_rng(12)
    for _ in range(100):
        a = complex(*rng.uniform(-5, 5, 2))
        b = rng.uniform(0.05, 10)
        z = rng.uniform(0, 20) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        lhs = specfun.hyp1f1(a, b, z)
        rhs = np.exp(z) * specfun.hyp1f1(b - a, b, -z)
        ref = oracles.hyp1f1(a, b, z)
        assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(ref), 1e-300) + 1e-12 * abs(np.exp(z))
        assert abs(lhs - ref) <= 1e-9 * abs(ref) + 1e-13 * abs(np.exp(z)) * (1 + abs(ref))


# ---------------------------------------------------------------- Bessel

def test_bessel_i_examples():
    assert specfun.bessel_i(0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.sinh(1), rel=1e-14)
    ref = math.sqrt(1 / math.pi) * (math.cosh(2) - math.sinh(2) / 2)
    assert specfun.bessel_i(1.5, 2.0) == pytest.approx(ref, rel=1e-14)
    nu, x = 2.7, 1e-5
    assert specfun.bessel_i(nu, x) == pytest.approx((x / 2) ** nu / math.gamma(nu + 1), rel=1e-9)


@pytest.mark.parametrize("nu", [-0.3, 0.0, 0.5, 1.0, 3.7, 14.3])
@pytest.mark.parametrize("x", [0.01, 1.0, 7.5, 40.0, 300.0])
def test_bessel_i_oracle(nu, x):
    assert rel(specfun.bessel_i(nu, x), oracles.bessel_i(nu, x)) <= 1e-10


def test_bessel_i_overflow_goes_to_log():
    with pytest.raises(EvaluationError):
        specfun.bessel_i(0.5, 900.0)
    assert specfun.log_bessel_i(0.5, 900.0) == pytest.approx(
        float(oracles.mp.log(oracles.mp.besseli(0.5, 900))), rel=1e-13)


def test_bessel_k_examples():
    assert specfun.bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), rel=1e-14)
    ref = math.sqrt(math.pi / 4) * math.exp(-2) * 1.5
    assert specfun.bessel_k(1.5, 2.0) == pytest.approx(ref, rel=1e-14)
    nu, x = 2.3, 50.0
    assert specfun.bessel_k(nu, x) * specfun.bessel_i(nu, x) * 2 * x == pytest.approx(1.0, abs=2e-3)


def test_bessel_k_integer_order():
    with pytest.raises(OrderError):
        specfun.bessel_k(2.0, 1.0)
    with pytest.raises(OrderError):
        specfun.bessel_k_series(0.0, 1.0)


def test_bessel_k_series_precision_error():
    with pytest.raises(PrecisionError):
        specfun.bessel_k_series(0.3, 20.0)


def test_bessel_k_asymptotic_refuses_small_x():
    with pytest.raises(PrecisionError):
        specfun.bessel_k_asymptotic(7.3, 3.0)


NUS = [0.1, 0.5, 1.37, 3.5, 7.7, 12.9, 19.9]


@pytest.mark.parametrize("nu", NUS)
def test_bessel_k_oracle_grid(nu):
    for x in np.geomspace(1e-3, 100, 41):
        assert rel(specfun.bessel_k(nu, x), oracles.bessel_k(nu, x)) <= 1e-10


@pytest.mark.parametrize("nu", NUS)
def test_bessel_k_branch_overlap(nu):
    for x in np.linspace(1.0, 2.0, 6):
        try:
            s = specfun.bessel_k_series(nu, x)
        except PrecisionError:
            continue
        assert rel(s, specfun.bessel_k_integral(nu, x)) <= 1e-9
    for x in np.linspace(25.0, 40.0, 6):
        try:
            h = specfun.bessel_k_asymptotic(nu, x)
        except PrecisionError:
            continue
        assert rel(h, specfun.bessel_k_integral(nu, x)) <= 1e-9


@settings(max_examples=80, deadline=None)
@given(nu=st.floats(min_value=0.01, max_value=19.99), x=st.floats(min_value=1e-3, max_value=100.0))
def test_bessel_k_positive(nu, x):
    if nu == math.floor(nu):
        return
    assert specfun.bessel_k(nu, x) > 0
    assert math.isfinite(specfun.log_bessel_k(nu, x))


def test_log_bessel_k_vectorized_and_large_argument():
    xs = np.array([0.5, 3.0, 30.0, 800.0])
    vals, branch = specfun.log_bessel_k(4.5, xs, return_branch=True)
    for x, v in zip(xs, vals):
        assert v == pytest.approx(oracles.log_bessel_k(4.5, x), rel=1e-13)
    assert set(branch.tolist()) <= {0, 1, 2}
    # e^-800 underflows; the log form stays usable
    assert specfun.bessel_k(4.5, 800.0) == 0.0
