import math

import numpy as np
import pytest

import oracles
from anharmonic.errors import DomainError, QuadratureError
from anharmonic.measure import (
    cat_completeness,
    cat_measures,
    gauss_legendre_quadrature,
    log_weight_h,
    moment_check,
    radial_quadrature,
    reconstruct,
    resolution_of_unity,
    weight_h,
    weight_order,
)
from anharmonic.spectrum import ModelParams
from anharmonic.states import FockVector, coherent, kernel

P = ModelParams(0.1, 0.25)


@pytest.fixture(scope="module")
def quad20():
    return radial_quadrature(P, 20)


def test_weight_order():
    assert weight_order(ModelParams(0.1)) == pytest.approx(1 + 2 / 0.3)


def test_weight_positive_on_log_grid():
    x = np.geomspace(1e-6, 1e3, 200)
    assert np.all(weight_h(x, P) > 0)
    with pytest.raises(DomainError):
        weight_h(0.0, P)


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.3, 2 / 3])
def test_weight_matches_oracle(eps):
    p = ModelParams(eps)
    for x in (1e-4, 0.3, 2.0, 15.0, 120.0):
        ref = float(oracles.mp.log(oracles.weight_h(x, eps)))
        assert log_weight_h(x, p) == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_weight_super_polynomial_decay():
    x = np.array([10.0, 40.0, 160.0, 640.0])
    ratios = weight_h(4 * x, P) / weight_h(x, P)
    for k in range(1, 6):
        scaled = ratios * x ** k
        assert np.all(np.diff(np.log(scaled)) < 0)


def test_quadrature_invariants(quad20):
    q = quad20
    assert np.all(q.weights > 0) and np.all(q.nodes > 0) and q.nodes.max() < q.r_max
    assert q.doubling_change < 1e-9
    # top integrand at r_max is below 1e-18 of its peak
    n = q.n_max
    f = lambda r: (2 * n + 1) * np.log(r) + log_weight_h(r * r, P)
    assert f(q.r_max) - f(q.nodes).max() < math.log(1e-18)


def test_quadrature_failure_is_reported():
    with pytest.raises(QuadratureError):
        radial_quadrature(P, 10, tol=1e-30, panel_tol=1e-30, max_panels=16)


def test_moment_examples(quad20):
    c, e, r = moment_check(1, P, quad20)
    assert e == pytest.approx(math.gamma(2 + 2 / 0.3), rel=1e-14)
    assert abs(r) <= 1e-8
    assert abs(moment_check(10, P, quad20)[2]) <= 1e-7
    with pytest.raises(DomainError):
        moment_check(0, P, quad20)
    with pytest.raises(DomainError):
        moment_check(30, P, quad20)


def test_moment_oracle_values(quad20):
    for n in (1, 5, 12):
        c, e, _ = moment_check(n, P, quad20)
        assert e == pytest.approx(float(oracles.moment_expected(n, 0.1)), rel=1e-12)


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.3])
def test_moment_identity(eps):
    p = ModelParams(eps)
    q = radial_quadrature(p, 19)
    errs = [moment_check(n, p, q)[2] for n in range(1, 21)]
    assert max(abs(x) for x in errs) <= 1e-12


def test_coarse_rule_errors_shrink():
    worst = []
    for nodes in (8, 16, 24):
        q = gauss_legendre_quadrature(P, 19, nodes)
        worst.append(max(abs(moment_check(n, P, q)[2]) for n in range(1, 21)))
    assert worst[0] > worst[1] > worst[2]


def test_resolution_of_unity(quad20):
    m = resolution_of_unity(20, P, quad20)
    off = m - np.diag(np.diag(m))
    assert np.all(off == 0)
    assert np.max(np.abs(np.diag(m) - 1)) <= 1e-6
    with pytest.raises(DomainError):
        resolution_of_unity(5, ModelParams(0.2), quad20)


def test_unity_against_mp_quadrature():
    for n in (0, 4):
        assert oracles.unity_diagonal(n, 0.1) == pytest.approx(1.0, abs=1e-12)


def test_cat_measures():
    r = np.array([1e-4, 0.5, 2.0])
    even = cat_measures("even", r, 0.0, P)
    assert even[0] == pytest.approx(weight_h(1e-8, P) * 1e-4, rel=1e-6)
    assert np.array_equal(even, cat_measures("even", r, 1.3, P))
    assert np.all(cat_measures("odd", r, 0.0, P) > 0)
    with pytest.raises(DomainError):
        cat_measures("even", 0.0, 0.0, P)
    with pytest.raises(DomainError):
        cat_measures("both", 1.0, 0.0, P)


def test_cat_completeness(quad20):
    diag = cat_completeness(20, P, quad20)
    assert np.max(np.abs(diag - 1)) <= 1e-6
    assert np.allclose(diag, np.diag(resolution_of_unity(20, P, quad20)).real, atol=1e-12)


def test_reconstruct_vacuum_and_random(quad20):
    vac = FockVector(np.eye(1, 10, 0)[0], P)
    assert np.linalg.norm(reconstruct(vac, quad20).amplitudes - vac.amplitudes) <= 1e-8
    rng = np.random.default_rng(5)
    g = rng.normal(size=10) + 1j * rng.normal(size=10)
    s = FockVector(g / np.linalg.norm(g), P)
    assert np.linalg.norm(reconstruct(s, quad20).amplitudes - s.amplitudes) <= 1e-6


def test_reconstruct_coherent_and_kernel():
    z = 0.9 - 0.6j
    v = coherent(z, P, 40)
    q = radial_quadrature(P, 39)
    out = reconstruct(v, q)
    assert np.linalg.norm(out.amplitudes - v.amplitudes) <= 1e-6
    w = coherent(0.3 + 0.2j, P, 40)
    assert abs(w.inner(out) - kernel(0.3 + 0.2j, z, P)) <= 1e-6
