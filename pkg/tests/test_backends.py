import os
import subprocess
import sys

import numpy as np
import pytest

from anharmonic import backends

NB = backends.load("numba")
NP = backends.load("numpy")

pytestmark = pytest.mark.skipif(NB.NAME != "numba", reason="numba not available")


def test_names():
    assert NB.NAME == "numba" and NP.NAME == "numpy"
    with pytest.raises(ValueError):
        backends.load("fortran")


@pytest.mark.parametrize("nu", [0.3, 2.5, 7.666666666666667, 23.2])
def test_log_bessel_k_agree(nu):
    xs = np.geomspace(1e-4, 500.0, 300)
    a, ba = NB.log_bessel_k(nu, xs)
    b, bb = NP.log_bessel_k(nu, xs)
    assert np.array_equal(ba, bb)
    assert np.max(np.abs(a - b) / np.maximum(np.abs(b), 1.0)) <= 1e-13


@pytest.mark.parametrize("x", [0.5, -30.0, 12 + 7j, 1e4])
def test_pfq_dd_agree(x):
    num = np.array([0.5 + 0.1j], dtype=np.complex128)
    den = np.array([1.5, 4.3, 2.2])
    args = (num, den, complex(x).real, complex(x).imag, 2.0 ** -53, 100000, 1e290)
    a, b = NB.pfq_dd(*args), NP.pfq_dd(*args)
    assert a[2:5] == b[2:5]
    assert a[0] == pytest.approx(b[0], rel=1e-15, abs=1e-300)
    assert a[1] == pytest.approx(b[1], rel=1e-15, abs=1e-300)


def test_pfq_real_agree():
    xs = np.geomspace(1e-3, 1e6, 50)
    num = np.empty(0, dtype=np.complex128)
    den = np.array([0.5, 4.33, 4.83])
    a = NB.pfq_real(num, den, xs, 2.0 ** -53, 100000, 1e290)
    b = NP.pfq_real(num, den, xs, 2.0 ** -53, 100000, 1e290)
    assert np.array_equal(a[1], b[1])
    assert np.allclose(a[0], b[0], rtol=1e-14, atol=0)


def test_delta_table_agree():
    e = np.arange(40) + 0.15 * (np.arange(40) ** 2 + np.arange(40))
    assert np.allclose(NB.delta_table(e, 39), NP.delta_table(e, 39), rtol=1e-14, atol=0)


def test_gis_forward_agree():
    e = np.arange(60) + 0.15 * (np.arange(60) ** 2 + np.arange(60))
    args = (np.sqrt(e), 1.2 - 0.3j, -0.2 + 0.1j, 60)
    a, b = NB.gis_forward(*args), NP.gis_forward(*args)
    # compiled complex arithmetic may contract differently; agree to rounding
    assert np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)) <= 1e-12


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("0", "numba"), ("", "numba")])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, ANHARMONIC_DISABLE_NUMBA=flag)
    res = subprocess.run(
        [sys.executable, "-c", "from anharmonic.backends import kernels; print(kernels.NAME)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert res.stdout.strip() == expected


def test_library_results_identical_across_backends():
    code = (
        "import numpy as np\n"
        "from anharmonic import specfun, spectrum, intelligent, measure\n"
        "p = spectrum.ModelParams(0.1)\n"
        "q = measure.radial_quadrature(p, 15)\n"
        "v = intelligent.gis_closed_form(intelligent.GisLabel(0.5, 1.0), p)\n"
        "print(repr(specfun.bessel_k(3.3, 7.0)), repr(q.r_max), repr(float(abs(v.amplitudes).sum())))\n"
    )
    outs = []
    for flag in ("1", "0"):
        env = dict(os.environ, ANHARMONIC_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
        outs.append([float(x) for x in res.stdout.split()])
    assert np.allclose(outs[0], outs[1], rtol=1e-12, atol=0)
