"""Command-line interface.

    anharmonic spectrum --epsilon 0.1 --dim 4
    anharmonic state coherent --epsilon 0.1 --z 1,0.5
    anharmonic verify unity --epsilon 0.1 --dim 20

Data goes to stdout as CSV (a table, a blank line, then ``quantity,value``
rows) or as a single JSON object; diagnostics go to stderr.  Exit codes:
0 success, 1 failed verification, 2 usage error, 3 computation error.
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import analytic, intelligent, measure, spectrum, states
from .errors import AnharmonicError

SCHEMA_VERSION = 1

OUTPUT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command", "config", "columns", "rows", "summary"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "config": {"type": "object"},
        "columns": {"type": "array", "items": {"type": "string"}},
        "rows": {
            "type": "array",
            "items": {"type": "array", "items": {"type": ["number", "string", "boolean", "null"]}},
        },
        "summary": {
            "type": "object",
            "additionalProperties": {"type": ["number", "string", "boolean", "null"]},
        },
    },
    "additionalProperties": False,
}

STATE_KINDS = ("coherent", "even-cat", "odd-cat", "real-cat", "imag-cat", "gis", "squeezed-vacuum")
SUITES = ("unity", "moments", "algebra", "gis-equivalence", "rs", "limit")


def _complex_arg(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        re, im = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers 're,im', got {text!r}") from None
    if not (math.isfinite(re) and math.isfinite(im)):
        raise argparse.ArgumentTypeError("complex value must be finite")
    return complex(re, im)


def _common_flags():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--epsilon", type=float, required=True, help="anharmonicity eps > 0")
    p.add_argument("--alpha", type=float, default=0.0, help="phase parameter (default 0)")
    p.add_argument("--z", type=_complex_arg, default=0j, help="label z as 're,im'")
    p.add_argument("--lambda", dest="lam", type=_complex_arg, default=1 + 0j,
                   help="GIS label lambda as 're,im' (default 1,0)")
    p.add_argument("--dim", type=int, default=None, help="truncation dimension")
    p.add_argument("--tol", type=float, default=None, help="tolerance override for verify")
    p.add_argument("--output-format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    return p


def build_parser():
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="anharmonic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="energy levels and F(n)")
    st = sub.add_parser("state", parents=[common], help="amplitudes and distribution of a state")
    st.add_argument("kind", choices=STATE_KINDS)
    ve = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ve.add_argument("suite", choices=SUITES)
    return parser


def _validate(parser, args):
    if not (math.isfinite(args.epsilon) and args.epsilon > 0):
        parser.error("--epsilon must be a positive finite number")
    if not math.isfinite(args.alpha):
        parser.error("--alpha must be finite")
    if args.dim is not None and args.dim < 3:
        parser.error("--dim must be an integer >= 3")
    if args.tol is not None and not (args.tol > 0 and math.isfinite(args.tol)):
        parser.error("--tol must be a positive number")
    if args.seed < 0:
        parser.error("--seed must be non-negative")
    if args.lam == -1:
        parser.error("--lambda must not be -1,0 (no normalizable solution)")


def _config(args):
    out = {
        "epsilon": args.epsilon,
        "alpha": args.alpha,
        "z": [args.z.real, args.z.imag],
        "lambda": [args.lam.real, args.lam.imag],
        "dim": args.dim,
        "tol": args.tol,
        "seed": args.seed,
    }
    if args.command == "state":
        out["kind"] = args.kind
    if args.command == "verify":
        out["suite"] = args.suite
    return out


def _num(x):
    """JSON-safe scalar: non-finite floats become null."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, str) or x is None:
        return x
    x = float(x)
    return x if math.isfinite(x) else None


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_spectrum(args, params):
    dim = 10 if args.dim is None else args.dim
    e = spectrum.energies(dim, params)
    lf = spectrum.log_big_f(dim - 1, params)
    rows = []
    for n in range(dim):
        f = spectrum.big_f(n, params)
        root = math.exp(lf[n] / n) if n > 0 else None
        rows.append([n, float(e[n]), f, root])
    summary = {"levels": dim}
    return ["n", "energy", "big_f", "big_f_root"], rows, summary


def _build_state(kind, args, params):
    label = states.CoherentLabel(args.z)
    dim = args.dim
    if kind == "coherent":
        return states.coherent(label, params, dim)
    if kind == "even-cat":
        return states.even_cat(label, params, dim)
    if kind == "odd-cat":
        return states.odd_cat(label, params, dim)
    if kind == "real-cat":
        return states.real_cat(label, params, dim)
    if kind == "imag-cat":
        return states.imaginary_cat(label, params, dim)
    if kind == "gis":
        return intelligent.gis_recurrence(intelligent.GisLabel(args.lam, args.z), params, dim)
    return intelligent.squeezed_vacuum(args.lam, params, dim)


def cmd_state(args, params):
    state = _build_state(args.kind, args, params)
    amps = state.amplitudes
    probs = state.probabilities()
    rows = [[n, float(a.real), float(a.imag), float(p)] for n, (a, p) in enumerate(zip(amps, probs))]
    e = spectrum.energies(state.dim, params)
    report = intelligent.uncertainty_report(state)
    summary = {
        "kind": args.kind,
        "dim": state.dim,
        "norm": state.norm(),
        "tail": state.tail,
        "mean_energy": float(np.sum(e * probs)),
    }
    summary.update(report.as_dict())
    if args.kind == "gis":
        summary["classification"] = intelligent.gis_classify(intelligent.GisLabel(args.lam, args.z))
        summary["var_ratio"] = report.var_x / report.var_p
    return ["n", "re", "im", "prob"], rows, summary


class _Checks:
    def __init__(self):
        self.rows = []

    def le(self, name, measured, tol):
        measured = float(measured)
        self.rows.append([name, measured, float(tol), bool(measured <= tol)])

    def ge(self, name, measured, bound):
        measured = float(measured)
        self.rows.append([name, measured, float(bound), bool(measured >= bound)])

    @property
    def passed(self):
        return all(r[3] for r in self.rows)


def _suite_unity(args, params, chk):
    dim = 20 if args.dim is None else args.dim
    tol = 1e-6 if args.tol is None else args.tol
    quad = measure.radial_quadrature(params, dim - 1)
    m = measure.resolution_of_unity(dim, params, quad)
    chk.le("max |M_nn - 1|", np.max(np.abs(np.diag(m) - 1.0)), tol)
    chk.le("max |M_mn|, m != n", np.max(np.abs(m - np.diag(np.diag(m)))), 0.0)
    chk.le("node doubling change", quad.doubling_change, 1e-9)
    chk.le("max |cat completeness - 1|", np.max(np.abs(measure.cat_completeness(dim, params, quad) - 1.0)), tol)


def _suite_moments(args, params, chk):
    n_max = 20 if args.dim is None else args.dim
    tol = 1e-7 if args.tol is None else args.tol
    quad = measure.radial_quadrature(params, n_max - 1)
    worst = max(abs(measure.moment_check(n, params, quad)[2]) for n in range(1, n_max + 1))
    chk.le(f"max moment rel_err, n=1..{n_max}", worst, tol)


def _suite_algebra(args, params, chk):
    dim = 12 if args.dim is None else args.dim
    tol = 1e-12 if args.tol is None else args.tol
    eps = params.epsilon
    am, ap, num, ham = spectrum.ladder_matrices(dim, params)
    inner = slice(0, dim - 1)
    comm = am @ ap - ap @ am
    target = np.diag(1.0 + 3.0 * eps * (np.arange(dim) + 1.0))
    chk.le("[A-,A+] - (1+3eps(N+1))", np.max(np.abs((comm - target)[inner, inner])), tol)
    chk.le("A+A- - H", np.max(np.abs(ap @ am - ham)), tol)
    jm, jp, j12, cas = spectrum.su11_generators(dim, params)
    chk.le("[J-,J+] - J12", np.max(np.abs((jm @ jp - jp @ jm - j12)[inner, inner])), tol)
    chk.le("[J12,J+] - J+", np.max(np.abs((j12 @ jp - jp @ j12 - jp)[inner, inner])), tol)
    kk = 1.0 / (3.0 * eps)
    chk.le("Casimir - k(k+1)", np.max(np.abs((cas - kk * (kk + 1) * np.eye(dim))[inner, inner])) / (kk * (kk + 1)), tol)
    x, p, g = intelligent.xp_operators(dim, params)
    chk.le("[X,P] - iG", np.max(np.abs((x @ p - p @ x - 1j * g)[inner, inner])), tol)


def _suite_gis_equivalence(args, params, chk):
    tol = 1e-9 if args.tol is None else args.tol
    label = intelligent.GisLabel(args.lam, args.z)
    ref = intelligent.gis_recurrence(label, params, args.dim)
    dim = ref.dim
    k = min(16, dim)
    r = ref.amplitudes[:k] / ref.amplitudes[0]
    others = {
        "continued fraction": lambda: intelligent.gis_continued_fraction_state(label, params, dim, fallback=True),
        "operator series": lambda: intelligent.gis_operator_series(label, params, dim),
    }
    if label.z != 0:
        others["closed form"] = lambda: intelligent.gis_closed_form(label, params, dim)
    for name, build in others.items():
        amps = build().amplitudes
        v = amps[:k] / amps[0]
        mask = np.abs(r) > 0
        err = np.max(np.abs(v[mask] - r[mask]) / np.abs(r[mask]))
        chk.le(f"{name} vs recurrence", err, tol)
    chk.le("eigen-residual", intelligent.eigen_residual(ref, label), tol)


def _suite_rs(args, params, chk):
    dim = 20 if args.dim is None else args.dim
    tol = 1e-9 if args.tol is None else args.tol
    rng = np.random.default_rng(args.seed)
    worst = math.inf
    for _ in range(100):
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        rep = intelligent.uncertainty_report(states.FockVector(v / np.linalg.norm(v), params))
        worst = min(worst, rep.residual)
    chk.ge("min rs_left - rs_right over 100 random states", worst, -tol)
    label = intelligent.GisLabel(args.lam, args.z)
    rep = intelligent.uncertainty_report(intelligent.gis_recurrence(label, params))
    chk.le("GIS |residual| / rs_right", abs(rep.residual) / rep.rs_right, 1e-8)
    chk.le("GIS |var_x/var_p - |lambda|^2|", abs(rep.var_x / rep.var_p - abs(label.lam) ** 2), 1e-8)


def _suite_limit(args, params, chk):
    eps_seq = [0.1, 0.01, 1e-3, 1e-4, 1e-5, 1e-6]
    fid = states.harmonic_limit_fidelity(args.z, args.alpha, eps_seq, args.dim)
    chk.ge("coherent fidelity at eps=1e-6", fid[-1], 1.0 - 1e-5)
    chk.ge("fidelity increments (min)", float(np.min(np.diff(fid))), -1e-12)
    vac = intelligent.uncertainty_report(states.coherent(0, params, 3))
    chk.le("vacuum |dX dP - (1+3eps)/2|",
           abs(math.sqrt(vac.var_x * vac.var_p) - (1 + 3 * params.epsilon) / 2), 1e-12)
    label = intelligent.GisLabel(args.lam, args.z)
    small = spectrum.ModelParams(1e-6, args.alpha)
    if label.lam == 1:
        coeffs = analytic.to_analytic(states.coherent(args.z, small, 40)).coeffs[:10]
        coeffs = coeffs / coeffs[0]
    else:
        coeffs = analytic.kummer_gis(label, small, 10).coeffs
    gauss = analytic.gaussian_limit_coefficients(label, 10)
    # relative to the largest coefficient: single coefficients can nearly cancel
    err = np.max(np.abs(coeffs - gauss)) / np.max(np.abs(gauss))
    chk.le("first 10 analytic coefficients vs Gaussian", err, 1e-4)


_SUITES = {
    "unity": _suite_unity,
    "moments": _suite_moments,
    "algebra": _suite_algebra,
    "gis-equivalence": _suite_gis_equivalence,
    "rs": _suite_rs,
    "limit": _suite_limit,
}


def cmd_verify(args, params):
    chk = _Checks()
    _SUITES[args.suite](args, params, chk)
    summary = {"suite": args.suite, "checks": len(chk.rows), "passed": chk.passed}
    return ["check", "measured", "tolerance", "passed"], chk.rows, summary


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def _csv_cell(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render(command, config, columns, rows, summary, fmt):
    rows = [[_num(c) for c in r] for r in rows]
    summary = {k: _num(v) for k, v in summary.items()}
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "config": config,
            "columns": columns,
            "rows": rows,
            "summary": summary,
        }
        return json.dumps(doc, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(c) for c in r])
    buf.write("\n")
    w.writerow(["quantity", "value"])
    for k, v in summary.items():
        w.writerow([k, _csv_cell(v)])
    return buf.getvalue()


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        _validate(parser, args)
    except SystemExit as exc:
        return int(exc.code)
    if args.epsilon > 0.5:
        print(f"warning: epsilon = {args.epsilon} > 0.5 is far outside the perturbative regime",
              file=sys.stderr)
    params = spectrum.ModelParams(args.epsilon, args.alpha)
    handler = {"spectrum": cmd_spectrum, "state": cmd_state, "verify": cmd_verify}[args.command]
    try:
        columns, rows, summary = handler(args, params)
    except AnharmonicError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(render(args.command, _config(args), columns, rows, summary, args.output_format))
    if args.command == "verify" and not summary["passed"]:
        failed = [r[0] for r in rows if not r[3]]
        print("verification failed: " + "; ".join(failed), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
