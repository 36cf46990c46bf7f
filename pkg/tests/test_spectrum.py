import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from anharmonic.errors import DimensionError, DomainError
from anharmonic.spectrum import (
    ModelParams,
    apply_lowering,
    apply_raising,
    big_f,
    energies,
    energy,
    ladder_matrices,
    log_big_f,
    number_from_hamiltonian,
    phase_factors,
    radius_growth,
    su11_generators,
)

EPS_GRID = [1e-4, 1e-2, 0.1, 0.5, 1.0]


def test_params_validation():
    for bad in (0.0, -0.1, math.inf, math.nan):
        with pytest.raises(DomainError):
            ModelParams(bad)
    p = ModelParams(0.1, 0.3)
    assert p.beta == pytest.approx(2 + 2 / 0.3)
    assert p.with_alpha(1.0).alpha == 1.0


def test_energy_examples():
    assert energy(0, ModelParams(0.37)) == 0.0
    assert energy(7, ModelParams(1e-12)) == pytest.approx(7.0, abs=1e-9)
    assert energy(2, ModelParams(0.1)) == pytest.approx(2.9, rel=1e-15)


@pytest.mark.parametrize("eps", EPS_GRID)
def test_energy_strictly_increasing(eps):
    e = energy(np.arange(10 ** 6 + 1), ModelParams(eps))
    assert np.all(np.diff(e) > 0)


def test_big_f_examples():
    p = ModelParams(0.1)
    assert big_f(0, p) == 1.0
    assert big_f(3, p) == pytest.approx(1.3 * 2.9 * 4.8, rel=1e-15)


@pytest.mark.parametrize("eps", EPS_GRID)
def test_big_f_closed_form(eps):
    p = ModelParams(eps)
    lf = log_big_f(100, p)
    for n in range(0, 101):
        ref = oracles.big_f_closed(n, eps)
        assert math.exp(lf[n] - float(oracles.mp.log(ref))) == pytest.approx(1.0, abs=1e-11)
        if n <= 30:
            assert big_f(n, p) == pytest.approx(float(ref), rel=1e-11)


def test_big_f_log_space_beyond_30():
    p = ModelParams(0.05)
    assert big_f(60, p) == pytest.approx(float(oracles.big_f_closed(60, 0.05)), rel=1e-11)
    with pytest.raises(DomainError):
        big_f(-1, p)


def test_phase_factors_unit_modulus_and_reduction():
    e = energies(50, ModelParams(0.3))
    ph = phase_factors(123.456, e)
    assert np.allclose(np.abs(ph), 1.0, atol=1e-15)
    with oracles.mp.workdps(40):
        ref = [complex(oracles.mp.expj(-oracles.mp.mpf(123.456) * oracles.mp.mpf(float(x)))) for x in e]
    # long-double products carry ~2^-63 relative error in theta itself
    bound = 4e-16 + 2.0 ** -62 * np.abs(123.456 * e)
    assert np.all(np.abs(ph - ref) <= bound)


def test_ladder_matrices_basic():
    p = ModelParams(0.1, 0.7)
    am, ap, num, ham = ladder_matrices(8, p)
    assert np.array_equal(ap, am.conj().T)
    assert np.all(am[:, 0] == 0)
    assert np.allclose(np.diag(ham).real, energies(8, p))
    assert np.allclose(np.diag(num).real, np.arange(8))
    with pytest.raises(DimensionError):
        ladder_matrices(1, p)


@pytest.mark.parametrize("alpha", [0.0, 1.0, math.pi])
def test_factorization_and_gauge(alpha):
    p = ModelParams(0.1, alpha)
    am, ap, _, ham = ladder_matrices(25, p)
    assert np.max(np.abs(ap @ am - ham)) <= 1e-13
    am0, ap0, _, _ = ladder_matrices(25, ModelParams(0.1, 0.0))
    assert np.max(np.abs(ap @ am - ap0 @ am0)) <= 1e-13


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.3])
def test_commutator_defect_localized(eps):
    dim = 15
    p = ModelParams(eps, 0.4)
    am, ap, _, _ = ladder_matrices(dim, p)
    diff = am @ ap - ap @ am - np.diag(1 + 3 * eps * (np.arange(dim) + 1))
    mask = np.ones((dim, dim), bool)
    mask[-1, -1] = False
    assert np.max(np.abs(diff[mask])) <= 1e-12
    assert abs(diff[-1, -1]) > 1.0


def test_vector_ladder_ops_match_matrices():
    p = ModelParams(0.2, 0.9)
    rng = np.random.default_rng(3)
    v = rng.normal(size=12) + 1j * rng.normal(size=12)
    am, ap, _, _ = ladder_matrices(12, p)
    assert np.allclose(apply_lowering(v, p), am @ v, atol=1e-14)
    assert np.allclose(apply_raising(v, p), ap @ v, atol=1e-14)
    grown = apply_raising(v, p, grow=True)
    assert grown.size == 13 and np.allclose(grown[:12], ap @ v, atol=1e-14)


def test_number_from_hamiltonian():
    p = ModelParams(0.2)
    assert number_from_hamiltonian(0.0, p) == 0.0
    assert number_from_hamiltonian(energy(5, p), p) == pytest.approx(5.0, abs=1e-12)
    with pytest.raises(DomainError):
        number_from_hamiltonian(-1.0, p)


@settings(max_examples=50, deadline=None)
@given(eps=st.floats(min_value=1e-4, max_value=2.0), n=st.integers(min_value=0, max_value=50))
def test_number_inverts_energy(eps, n):
    p = ModelParams(eps)
    assert abs(number_from_hamiltonian(energy(n, p), p) - n) <= 1e-12 * max(1, n)


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.3, 1.0])
def test_su11(eps):
    dim = 12
    p = ModelParams(eps, 0.6)
    jm, jp, j12, cas = su11_generators(dim, p)
    k = 1 / (3 * eps)
    inner = slice(0, dim - 1)
    assert np.max(np.abs((jm @ jp - jp @ jm - j12)[inner, inner])) <= 1e-12 * k
    assert np.allclose(np.diag(j12).real, k + np.arange(dim) + 1)
    assert np.allclose(np.diag(cas)[: dim - 1].real, k * (k + 1), rtol=1e-13)
    assert np.max(np.abs(cas - np.diag(np.diag(cas)))) <= 1e-12 * k * k
    assert np.max(np.abs((j12 @ jp - jp @ j12 - jp)[inner, inner])) <= 1e-12 * k
    assert np.max(np.abs((j12 @ jm - jm @ j12 + jm)[inner, inner])) <= 1e-12 * k


def test_radius_growth():
    p = ModelParams(0.1)
    g = radius_growth(200, p)
    assert np.all(np.diff(g[1:]) > 0)
    assert g.max() > 10
    small = radius_growth(20, ModelParams(1e-6))
    stirling = np.array([math.factorial(n) ** (1 / n) for n in range(1, 21)])
    assert np.max(np.abs(small / stirling - 1)) < 0.01
    with pytest.raises(DomainError):
        radius_growth(1, p)
