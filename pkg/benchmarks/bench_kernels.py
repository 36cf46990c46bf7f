"""Compare the numba and pure-numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once before timing so numba compilation (or cache
loading) is excluded.  The best of ``--repeat`` runs is reported.
"""
import argparse
import timeit

import numpy as np

from anharmonic import backends


def cases(k):
    xs = np.geomspace(1e-3, 400.0, 2000)
    xr = np.geomspace(1e-2, 1e6, 400)
    e = np.arange(400) + 0.15 * (np.arange(400) ** 2 + np.arange(400))
    num = np.empty(0, dtype=np.complex128)
    den = np.array([0.5, 4.33, 4.83])
    return {
        "log_bessel_k (2000 pts)": lambda: k.log_bessel_k(7.666666666666667, xs),
        "pfq_real 0F3 (400 pts)": lambda: k.pfq_real(num, den, xr, 2.0 ** -53, 100000, 1e290),
        "delta_table (n = 150)": lambda: k.delta_table(e, 150),
        "gis_forward (dim = 400)": lambda: k.gis_forward(np.sqrt(e), 1.1 - 0.2j, 0.3 + 0.1j, 400),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    nb, npk = backends.load("numba"), backends.load("numpy")
    if nb.NAME != "numba":
        print("numba is not importable; only the numpy backend is available")
        return
    rows = []
    for (name, f_nb), f_np in zip(cases(nb).items(), cases(npk).values()):
        f_nb()
        f_np()
        t_nb = min(timeit.repeat(f_nb, number=1, repeat=args.repeat))
        t_np = min(timeit.repeat(f_np, number=1, repeat=args.repeat))
        rows.append((name, t_nb, t_np))
    print(f"{'kernel':28s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>9s}")
    for name, t_nb, t_np in rows:
        print(f"{name:28s} {1e3 * t_nb:12.3f} {1e3 * t_np:12.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
