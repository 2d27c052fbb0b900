"""Command-line front end: ``cornerdet <subcommand> [options]``.

Exit codes: 0 success, 2 bad input (domain, parse or usage), 3 numerical
failure (pole, singular matrix, divergence).
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .errors import DivergenceError, DomainError, NumericalError, UnsupportedSymbolError
from .fisher_hartwig import (
    FHParams,
    fh_asymptotic_det,
    fh_entry_asymptotic,
    fh_exact_det,
    fh_last_col_entry,
)
from .lattice import CAUCHY_BINET_MAX_N, cauchy_binet_check, gram_determinant
from .limits import limit_ratio, limit_ratio_report
from .linalg import determinant
from .symbols import (
    PureFisherHartwig,
    geometric_mean,
    is_hermitian,
    parse_complex,
    parse_symbol,
    szego_constant,
)
from .toeplitz import (
    CornerPerturbation,
    build_toeplitz,
    inverse_corners,
    levinson_first_column,
    perturbed_det_ratio_exact,
)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3

SWEEP_COLUMNS = ("n", "exact_det", "oracle_det", "ratio", "limit", "residual")

#: Imaginary parts below this fraction of the real part are dropped on output.
REAL_COLLAPSE_RTOL = 1e-12


# -- formatting ---------------------------------------------------------------

def _fmt_float(x, precision):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    # round to the requested significant digits, then print the shortest round-trip form
    return repr(float(format(x, f".{precision}g")))


def _collapse(z):
    z = complex(z)
    if abs(z.imag) <= REAL_COLLAPSE_RTOL * abs(z.real) or z.imag == 0:
        return z.real
    return z


def to_json(obj, precision=17):
    """Compact JSON with fixed field order and fixed number formatting.

    Complex numbers become ``{"re": .., "im": ..}`` unless their imaginary
    part is negligible, in which case they collapse to a plain number.
    """
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj, precision)
    if isinstance(obj, (complex, np.complexfloating)):
        z = _collapse(obj)
        if isinstance(z, float):
            return _fmt_float(z, precision)
        return '{"re":%s,"im":%s}' % (_fmt_float(z.real, precision), _fmt_float(z.imag, precision))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{to_json(v, precision)}"
                              for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(to_json(v, precision) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(v, precision):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    z = _collapse(v)
    if isinstance(z, float):
        out = _fmt_float(z, precision)
        return "" if out == "null" else out
    im = _fmt_float(z.imag, precision)
    sign = "" if im.startswith("-") else "+"
    return f"{_fmt_float(z.real, precision)}{sign}{im}i"


def to_csv(rows, columns, precision=17):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(r.get(c), precision) for c in columns])
    return buf.getvalue()


# -- literal parsing ----------------------------------------------------------

def parse_rows(text):
    """Parse a matrix literal ``a+bi,a+bi;a+bi,a+bi`` (rows separated by ``;``)."""
    rows = [[parse_complex(c) for c in r.split(",")] for r in text.split(";") if r.strip()]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise DomainError(f"matrix literal must be rectangular: {text!r}")
    return np.array(rows, dtype=np.complex128)


def parse_corner(text):
    key, sep, val = text.partition("=")
    if key.strip() != "m0" or not sep:
        raise DomainError(f"--corner expects m0=<k>, got {text!r}")
    try:
        return int(val)
    except ValueError:
        raise DomainError(f"m0 must be an integer, got {val!r}") from None


def perturbation_from_args(args):
    blocks = {name: getattr(args, name) for name in ("E11", "E12", "E21", "E22")}
    given = {k: parse_rows(v) for k, v in blocks.items() if v is not None}
    if args.corner is not None:
        m0 = parse_corner(args.corner)
    elif given:
        m0 = next(iter(given.values())).shape[0]
    else:
        m0 = 1
    zero = np.zeros((m0, m0))
    return CornerPerturbation(m0, *(given.get(k, zero) for k in ("E11", "E12", "E21", "E22")))


def parse_n_list(text):
    try:
        ns = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"--n-list must be comma-separated integers, got {text!r}") from None
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("--n-list must be nonempty and strictly increasing")
    return ns


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise DomainError(f"--{name.replace('_', '-')} is required for '{args.command}'")


def _ns(args):
    if args.n_list is not None:
        return parse_n_list(args.n_list)
    _require(args, "n")
    return [args.n]


# -- subcommands --------------------------------------------------------------

def _exact_det(s, n):
    if isinstance(s, PureFisherHartwig):
        return fh_exact_det(FHParams.from_symbol(s), n)
    return None


def _asymptotic_det(s, n):
    """Leading asymptotics: ``C n**(delta gamma)`` for pure FH, ``G**n E`` for smooth symbols."""
    if isinstance(s, PureFisherHartwig):
        return fh_asymptotic_det(FHParams.from_symbol(s), n)
    try:
        return geometric_mean(s) ** n * szego_constant(s).value
    except (DivergenceError, UnsupportedSymbolError):
        return None


def cmd_det(args):
    _require(args, "symbol", "n")
    s = parse_symbol(args.symbol)
    n = args.n
    return {"n": n, "exact": _exact_det(s, n), "oracle": determinant(build_toeplitz(s, n)),
            "asymptotic": _asymptotic_det(s, n)}


def cmd_ratio(args):
    _require(args, "symbol")
    s = parse_symbol(args.symbol)
    p = perturbation_from_args(args)
    out = [{"n": n, "ratio": perturbed_det_ratio_exact(s, p, n)} for n in _ns(args)]
    return out[0] if len(out) == 1 else out


def cmd_limit(args):
    _require(args, "symbol")
    s = parse_symbol(args.symbol)
    p = perturbation_from_args(args)
    if args.n_list is None and args.n is None:
        return {"limit": limit_ratio(s, p), "samples": [], "residuals_monotone": None}
    rep = limit_ratio_report(s, p, _ns(args))
    return {"limit": rep.limit_value,
            "samples": [{"n": n, "ratio": r, "residual": e}
                        for (n, r), (_, e) in zip(rep.samples, rep.residuals)],
            "residuals_monotone": rep.residuals_monotone}


def cmd_inverse_corners(args):
    _require(args, "symbol", "n")
    s = parse_symbol(args.symbol)
    m0 = parse_corner(args.corner) if args.corner is not None else 1
    c = inverse_corners(s, args.n, m0)
    return {"n": c.n, "m0": c.m0, "S11": c.S11, "S12": c.S12, "S21": c.S21, "S22": c.S22}


def cmd_fh_entry(args):
    _require(args, "symbol", "n", "j")
    s = parse_symbol(args.symbol)
    if not isinstance(s, PureFisherHartwig):
        raise UnsupportedSymbolError("fh-entry needs an fh:<delta>,<gamma> symbol")
    p = FHParams.from_symbol(s)
    n, j = args.n, args.j
    if args.which == "top":
        exact = fh_last_col_entry(p, j, n)
    else:
        exact = fh_last_col_entry(p, n - j, n)
    return {"n": n, "j": j, "which": args.which, "exact": exact,
            "asymptotic": fh_entry_asymptotic(p, j, args.which)(n)}


def cmd_verblunsky(args):
    _require(args, "symbol", "n")
    s = parse_symbol(args.symbol)
    if not is_hermitian(s):
        raise UnsupportedSymbolError("verblunsky needs a Hermitian symbol")
    d = levinson_first_column(s, args.n)
    return {"n": d.n, "verblunsky": d.verblunsky, "kappa": d.kappa,
            "first_column": d.first_column, "det_ratios": d.det_ratios}


def cmd_lattice(args):
    _require(args, "n")
    n = args.n
    out = {"n": n, "gram_det": gram_determinant(n), "expected": (n + 1) ** 3}
    if args.cauchy_binet:
        if not 2 <= n <= CAUCHY_BINET_MAX_N:
            raise DomainError(f"--cauchy-binet supports 2 <= n <= {CAUCHY_BINET_MAX_N}")
        out["minors"] = cauchy_binet_check(n)[1]
    return out


def sweep_rows(s, p, ns):
    """One row per n: exact and oracle determinants, corner ratio, its limit and the residual."""
    try:
        lim = complex(limit_ratio(s, p))
    except (UnsupportedSymbolError, DivergenceError):
        lim = None
    rows = []
    for n in ns:
        ratio = perturbed_det_ratio_exact(s, p, n)
        rows.append({"n": n, "exact_det": _exact_det(s, n),
                     "oracle_det": determinant(build_toeplitz(s, n)), "ratio": ratio,
                     "limit": lim, "residual": None if lim is None else abs(ratio - lim)})
    return rows


def cmd_sweep(args):
    _require(args, "symbol", "n_list")
    s = parse_symbol(args.symbol)
    return sweep_rows(s, perturbation_from_args(args), parse_n_list(args.n_list))


COMMANDS = {
    "det": (cmd_det, "exact, oracle and asymptotic determinants of T_n(a)"),
    "ratio": (cmd_ratio, "det(T_n + E_n) / det T_n from the inverse corners"),
    "limit": (cmd_limit, "n -> infinity limit of the ratio, with finite-n residuals"),
    "inverse-corners": (cmd_inverse_corners, "the four m0 x m0 corners of T_n^{-1}"),
    "fh-entry": (cmd_fh_entry, "exact and asymptotic last-column entry of T_n^{-1}(xi eta)"),
    "verblunsky": (cmd_verblunsky, "Levinson recursion: Verblunsky coefficients and first column"),
    "lattice": (cmd_lattice, "Gram determinant of the cyclic-group lattice"),
    "sweep": (cmd_sweep, "ratio and determinants over an n-list (CSV by default)"),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cornerdet",
        description="Determinants of Toeplitz matrices with corner perturbations.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("--symbol", help="fh:<d>,<g> | laurent:k=c,... | hfh:[(re,im,alpha);...]*b:k=c,...")
        sp.add_argument("--n", type=int, help="matrix size")
        sp.add_argument("--n-list", dest="n_list", help="comma-separated increasing sizes")
        sp.add_argument("--corner", help="corner block size, m0=<k>")
        for blk in ("E11", "E12", "E21", "E22"):
            sp.add_argument(f"--{blk}", dest=blk, help="rows 'a+bi,...;...'")
        sp.add_argument("--format", choices=("json", "csv"),
                        default="csv" if name == "sweep" else "json")
        sp.add_argument("--output", help="write here instead of standard output")
        sp.add_argument("--precision", type=int, default=17, help="significant digits (default 17)")
        if name == "fh-entry":
            sp.add_argument("--j", type=int, help="row index j")
            sp.add_argument("--which", choices=("top", "bottom"), default="top",
                            help="c_{j,n} (top) or c_{n-j,n} (bottom)")
        if name == "lattice":
            sp.add_argument("--cauchy-binet", action="store_true", help="also list the maximal minors")
    return parser


def render(result, fmt, precision):
    if fmt == "json":
        return to_json(result, precision) + "\n"
    rows = result if isinstance(result, list) else [result]
    columns = list(SWEEP_COLUMNS) if all(set(r) <= set(SWEEP_COLUMNS) for r in rows) \
        else list(dict.fromkeys(k for r in rows for k in r))
    return to_csv(rows, columns, precision)


def run(argv=None, stdout=None, stderr=None):
    """Parse ``argv``, run the subcommand and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_DOMAIN
    if not 1 <= args.precision <= 17:
        print("cornerdet: --precision must be between 1 and 17", file=stderr)
        return EXIT_DOMAIN
    try:
        result = COMMANDS[args.command][0](args)
        text = render(result, args.format, args.precision)
    except DomainError as e:
        print(f"cornerdet: error: {e}", file=stderr)
        return EXIT_DOMAIN
    except NumericalError as e:
        print(f"cornerdet: numerical error: {e}", file=stderr)
        return EXIT_NUMERICAL
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))
