"""Command-line interface.

Exit codes: 0 success, 2 usage or domain error, 3 numerical or accuracy
error, 4 when a ``check`` verdict is ``fails``.
"""
import argparse
import configparser
import math
import os
import sys

import numpy as np

from . import analysis, critical, entropy as ent
from .distribution import DensityModel, mellin_moment
from .errors import DomainError, RegimeError
from .mittag_leffler import MLParams, ml_derivative, reciprocal_convexity_statistic
from .reports import CSV_FLOAT, GridSpec, ScanReport, Verdict
from .wright import WrightParams, laplace_identity_check, wright_eval

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_FAILS = 0, 2, 3, 4
CHECK_KINDS = ("logconcavity", "turan", "recip-convexity", "msu", "inflections", "entropy-concavity")
SCAN_KINDS = ("logconcavity", "turan", "msu", "recip-convexity", "entropy-concavity")
CONFIG_SECTION = "wrightml"


def _fmt(v):
    return format(float(v), CSV_FLOAT)


# --------------------------------------------------------------------------
# argument types

def _finite(s):
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not a finite number: {s!r}")
    return v


def _float_list(s):
    return [_finite(t) for t in s.split(",") if t.strip()]


def _positive_int(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {s!r}")
    return v


def _nonneg_int(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {s!r}")
    return v


# --------------------------------------------------------------------------
# parser

def _common(p, *names):
    help_ = {
        "alpha": "alpha parameter",
        "beta": "beta parameter",
        "rho": "Wright parameter rho",
        "x": "evaluation point(s), comma separated",
        "z": "evaluation point(s), comma separated",
        "order": "derivative order (default 0)",
        "n": "count",
        "seed": "random seed (default 0)",
    }
    for name in names:
        if name in ("x", "z"):
            p.add_argument(f"--{name}", type=_float_list, help=help_[name])
        elif name == "order":
            p.add_argument("--order", type=_nonneg_int, default=0, help=help_[name])
        elif name == "seed":
            p.add_argument("--seed", type=_nonneg_int, default=0, help=help_[name])
        else:
            p.add_argument(f"--{name}", type=_finite, help=help_.get(name, name))


def _grid_flags(p):
    p.add_argument("--grid-min", type=_finite, help="grid start (default: operation specific)")
    p.add_argument("--grid-max", type=_finite, help="grid end (default: operation specific)")
    p.add_argument("--grid-n", type=_positive_int, help="number of grid points (default 2000 for density scans)")


def _output_flags(p):
    p.add_argument("--out", help="write the result to this file instead of stdout")
    p.add_argument("--format", choices=("text", "csv"), default="text", help="output format (default text)")


def build_parser():
    parser = argparse.ArgumentParser(prog="wrightml", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", help="INI file whose [wrightml] section presets flag defaults")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("eval-ml", help="Mittag-Leffler function E_{alpha,beta} or its derivatives")
    _common(p, "alpha", "beta", "x", "order")
    p.set_defaults(beta=1.0)
    _output_flags(p)

    p = sub.add_parser("eval-wright", help="Wright function phi(rho, beta, z); with --t the Laplace identity")
    _common(p, "rho", "beta", "z")
    p.add_argument("--t", type=_float_list,
                   help="t > 0 values: print the Laplace transform of phi(rho, beta, -x) by quadrature "
                        "next to E_{-rho, beta-rho}(-t)")
    _output_flags(p)

    p = sub.add_parser("density", help="density of M_{alpha,beta} (or its derivatives) at x >= 0; "
                                       "with --s the moments E[M^s]")
    _common(p, "alpha", "beta", "x", "order")
    p.add_argument("--s", type=_float_list, help="moment orders s > -1")
    _output_flags(p)

    p = sub.add_parser("cdf", help="distribution function of M_{alpha,beta}")
    _common(p, "alpha", "beta", "x")
    _output_flags(p)

    p = sub.add_parser("sample", help="i.i.d. draws of M_{alpha,beta}, one per line")
    _common(p, "alpha", "beta", "seed")
    p.add_argument("--n", type=_positive_int, default=1000, help="number of draws (default 1000)")
    _output_flags(p)

    p = sub.add_parser("critical-alpha", help="the critical parameter alpha*, or alpha*(beta) with --beta")
    p.add_argument("--beta", type=_finite, help="solve the beta-indexed equation instead")
    _output_flags(p)

    p = sub.add_parser("rho-curve", help="CSV of (alpha, rho(alpha)) on alpha_i = i/(n+1)")
    p.add_argument("--n", type=_positive_int, default=1000, help="number of points (default 1000)")
    _output_flags(p)
    p.set_defaults(format="csv")

    p = sub.add_parser("scan", help="per-point statistic of a sign condition, as plot-ready CSV")
    p.add_argument("--kind", choices=SCAN_KINDS, required=True)
    _common(p, "alpha", "beta")
    p.add_argument("--halfline", choices=("positive", "negative"), default="positive",
                   help="half-line for recip-convexity (default positive)")
    _grid_flags(p)
    _output_flags(p)
    p.set_defaults(format="csv")

    p = sub.add_parser("zeros", help="certified positive zeros of phi(rho, beta, -x)")
    _common(p, "rho", "beta")
    _grid_flags(p)
    _output_flags(p)

    p = sub.add_parser("entropy", help="entropy of a probability vector, or g and log at --x")
    _common(p, "alpha", "beta")
    p.add_argument("--probs", help="CSV file with one probability per line")
    p.add_argument("--x", type=_float_list, help="points at which to print g(x) and log(x)")
    _output_flags(p)

    p = sub.add_parser("check", help="verdict of a sign condition (exit 4 when it fails)")
    p.add_argument("--kind", choices=CHECK_KINDS, required=True)
    _common(p, "alpha", "beta")
    p.add_argument("--halfline", choices=("positive", "negative", "sequence"), default="positive",
                   help="recip-convexity: half-line grid or the coefficient sequence (default positive)")
    p.add_argument("--n", type=_positive_int, default=60, help="sequence length for --halfline sequence (default 60)")
    _grid_flags(p)
    _output_flags(p)
    return parser


def _apply_config(parser, path):
    cfg = configparser.ConfigParser()
    if not cfg.read(path):
        raise DomainError(f"cannot read config file {path!r}")
    if not cfg.has_section(CONFIG_SECTION):
        return
    allowed = {"grid_min": _finite, "grid_max": _finite, "grid_n": _positive_int,
               "seed": _nonneg_int, "format": str, "n": _positive_int}
    values = {}
    for key, raw in cfg.items(CONFIG_SECTION):
        key = key.replace("-", "_")
        if key not in allowed:
            raise DomainError(f"unknown config key {key!r}")
        try:
            values[key] = allowed[key](raw)
        except argparse.ArgumentTypeError as exc:
            raise DomainError(f"config key {key!r}: {exc}")
    if "format" in values and values["format"] not in ("text", "csv"):
        raise DomainError("config format must be text or csv")
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in sub.choices.values():
        dests = {a.dest for a in sp._actions}
        sp.set_defaults(**{k: v for k, v in values.items() if k in dests})


# --------------------------------------------------------------------------
# helpers

def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise DomainError("missing required flag(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _table(header, rows):
    out = [",".join(header)]
    out += [",".join(v if isinstance(v, str) else _fmt(v) for v in row) for row in rows]
    return "\n".join(out) + "\n"


def _keyvals(pairs):
    return "".join(f"{k} = {v if isinstance(v, str) else _fmt(v)}\n" for k, v in pairs)


def _grid(args, default):
    if args.grid_min is None and args.grid_max is None and args.grid_n is None:
        return default
    if default is None:
        raise DomainError("--grid-min/--grid-max/--grid-n need a default grid")
    lo = default.xmin if args.grid_min is None else args.grid_min
    hi = default.xmax if args.grid_max is None else args.grid_max
    n = default.n if args.grid_n is None else args.grid_n
    if args.grid_min is None and args.grid_max is None:
        return GridSpec(default.xmin, default.xmax, n, default.spacing, default.split)
    return GridSpec(lo, hi, n, "linear")


def _report_out(rep, fmt):
    return rep.to_csv() if fmt == "csv" else rep.to_text()


# --------------------------------------------------------------------------
# subcommands

def cmd_eval_ml(args):
    _require(args, "alpha", "x")
    p = MLParams(args.alpha, args.beta)
    rows = []
    for x in args.x:
        r = ml_derivative(p, x, args.order)
        rows.append((x, r.value, r.abs_err, r.method.value))
    if args.format == "csv":
        return _table(["x", "value", "abs_err", "method"], rows), EXIT_OK
    return "".join(_keyvals([("x", x), ("value", v), ("abs_err", e), ("method", m)]) for x, v, e, m in rows), EXIT_OK


def cmd_eval_wright(args):
    _require(args, "rho", "beta")
    if args.z is None and args.t is None:
        raise DomainError("eval-wright needs --z or --t")
    p = WrightParams(args.rho, args.beta)
    out = []
    if args.z is not None:
        rows = []
        for z in args.z:
            r = wright_eval(p, z)
            rows.append((z, r.value, r.abs_err, r.method.value))
        if args.format == "csv":
            out.append(_table(["z", "value", "abs_err", "method"], rows))
        else:
            out.append("".join(_keyvals([("z", z), ("value", v), ("abs_err", e), ("method", m)])
                               for z, v, e, m in rows))
    if args.t is not None:
        rows = [(t, *laplace_identity_check(p, t)) for t in args.t]
        if args.format == "csv":
            out.append(_table(["t", "laplace", "ml"], rows))
        else:
            out.append("".join(_keyvals([("t", t), ("laplace", lhs), ("ml", rhs)]) for t, lhs, rhs in rows))
    return "".join(out), EXIT_OK


def _model(args, table=False):
    _require(args, "alpha", "beta")
    return DensityModel((args.alpha, args.beta), build_table=table)


def cmd_density(args):
    if args.x is None and args.s is None:
        raise DomainError("density needs --x or --s")
    m = _model(args)
    out = []
    if args.x is not None:
        v, e = m.pdf_err(np.array(args.x), args.order)
        rows = list(zip(args.x, v, e))
        if args.format == "csv":
            out.append(_table(["x", "density", "abs_err"], rows))
        else:
            out.append("".join(_keyvals([("x", x), ("density", d), ("abs_err", err)]) for x, d, err in rows))
    if args.s is not None:
        rows = [(s, mellin_moment(m, s)) for s in args.s]
        if args.format == "csv":
            out.append(_table(["s", "moment"], rows))
        else:
            out.append("".join(_keyvals([("s", s), ("moment", v)]) for s, v in rows))
    return "".join(out), EXIT_OK


def cmd_cdf(args):
    _require(args, "x")
    m = _model(args)
    F = np.atleast_1d(m.cdf(np.array(args.x)))
    rows = list(zip(args.x, F))
    if args.format == "csv":
        return _table(["x", "cdf"], rows), EXIT_OK
    return "".join(_keyvals([("x", x), ("cdf", f)]) for x, f in rows), EXIT_OK


def cmd_sample(args):
    m = _model(args, table=True)
    draws = m.sample(args.n, args.seed)
    return _table(["x"], [(d,) for d in draws]), EXIT_OK


def cmd_critical_alpha(args):
    res = critical.solve_alpha_star() if args.beta is None else critical.solve_alpha_star_beta(args.beta)
    rows = [("alpha_star", res.alpha_star), ("bracket_lo", res.bracket[0]), ("bracket_hi", res.bracket[1]),
            ("residual", res.residual), ("iterations", str(res.iterations)), ("flag", res.flag)]
    if args.format == "csv":
        return _table([k for k, _ in rows], [[v for _, v in rows]]), EXIT_OK
    return _keyvals(rows), EXIT_OK


def cmd_rho_curve(args):
    if args.n < 2:
        raise DomainError("--n must be >= 2")
    curve = critical.rho_curve(args.n)
    if args.format == "text":
        return "".join(f"{_fmt(a)} {_fmt(r)}\n" for a, r in curve), EXIT_OK
    return _table(["alpha", "rho"], curve), EXIT_OK


def cmd_scan(args):
    _require(args, "alpha", "beta")
    a, b = args.alpha, args.beta
    if args.kind == "entropy-concavity":
        gen = ent.EntropyGen(a, b)
        zmax = ent.concavity_range(gen)
        default = GridSpec(-zmax, -1e-3, 400, "log")
        g = _grid(args, default)
        xs = g.points()
        vals, errs = ent.concavity_statistic(gen, xs)
        header = ["z", "D", "abs_err"]
    elif args.kind == "recip-convexity":
        g = _grid(args, analysis.recip_default_grid(a, args.halfline))
        xs = g.points()
        vals, errs = reciprocal_convexity_statistic((a, b), xs)
        header = ["x", "D", "abs_err"]
    else:
        g = _grid(args, analysis.default_grid((a, b)))
        xs = g.points()
        stat = {"logconcavity": analysis.logconcavity_statistic,
                "msu": analysis.msu_statistic,
                "turan": analysis.turan_statistic}[args.kind]
        vals, errs = stat((a, b), xs)
        header = ["x", "statistic", "abs_err"]
    return _table(header, zip(xs, vals, errs)), EXIT_OK


def cmd_zeros(args):
    _require(args, "rho", "beta")
    n = args.grid_n or analysis.DEFAULT_GRID_POINTS
    rep = analysis.count_zeros(args.rho, args.beta, xmax=args.grid_max, n=n)
    return (rep.to_csv() if args.format == "csv" else rep.to_text()), EXIT_OK


def _read_probs(path):
    vals = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                vals.append(float(line.split(",")[0]))
            except ValueError:
                if vals:
                    raise DomainError(f"bad probability line {line!r}")
                # a header line
    return np.array(vals)


def cmd_entropy(args):
    _require(args, "alpha")
    gen = ent.EntropyGen(args.alpha, args.beta)
    if args.probs is None and args.x is None:
        raise DomainError("entropy needs --probs or --x")
    out = []
    if args.probs is not None:
        S = ent.entropy(gen, _read_probs(args.probs))
        out.append(_table(["entropy"], [(S,)]) if args.format == "csv" else _keyvals([("entropy", S)]))
    if args.x is not None:
        rows = []
        for x in args.x:
            lg = ent.log_alpha(gen, x) if x > 0 else -math.inf
            rows.append((x, ent.g_alpha(gen, x) if 0 <= x <= 1 else math.nan, lg))
        if args.format == "csv":
            out.append(_table(["x", "g", "log"], rows))
        else:
            out.append("".join(_keyvals([("x", x), ("g", g), ("log", lg)]) for x, g, lg in rows))
    return "".join(out), EXIT_OK


def _inflection_report(a, b, grid):
    g = analysis.default_grid((a, b)) if grid is None else grid
    count = analysis.count_inflections((a, b), g)
    verdict = Verdict.HOLDS if count <= 2 else Verdict.FAILS
    # min_value = 2 - count: negative exactly when there are more than two inflections
    return ScanReport("inflections", {"alpha": a, "beta": b}, g, verdict, float(2 - count), float(count), 0.0)


def cmd_check(args):
    _require(args, "alpha", "beta")
    a, b = args.alpha, args.beta
    kind = args.kind
    if kind == "logconcavity":
        rep = analysis.logconcavity_scan((a, b), _density_grid(args, a, b))
    elif kind == "turan":
        rep = analysis.turan_check(a, b, _density_grid(args, a, b))
    elif kind == "msu":
        _, rep = analysis.msu_classify((a, b), _density_grid(args, a, b))
    elif kind == "inflections":
        rep = _inflection_report(a, b, _density_grid(args, a, b))
    elif kind == "recip-convexity":
        if args.halfline == "sequence":
            rep = analysis.reciprocal_convexity_un(a, b, args.n)
        else:
            rep = analysis.reciprocal_convexity_grid(a, b, args.halfline,
                                                     _grid(args, analysis.recip_default_grid(a, args.halfline)))
    else:
        gen = ent.EntropyGen(a, b)
        rep = ent.certify_concavity(gen, args.grid_n or 400, z_max=None if args.grid_max is None else abs(args.grid_max))
    code = EXIT_FAILS if rep.verdict == Verdict.FAILS else EXIT_OK
    return _report_out(rep, args.format), code


def _density_grid(args, a, b):
    """None (the operation's default grid) unless a grid flag is given."""
    if args.grid_min is None and args.grid_max is None and args.grid_n is None:
        return None
    return _grid(args, analysis.default_grid((a, b)))


COMMANDS = {
    "eval-ml": cmd_eval_ml,
    "eval-wright": cmd_eval_wright,
    "density": cmd_density,
    "cdf": cmd_cdf,
    "sample": cmd_sample,
    "critical-alpha": cmd_critical_alpha,
    "rho-curve": cmd_rho_curve,
    "scan": cmd_scan,
    "zeros": cmd_zeros,
    "entropy": cmd_entropy,
    "check": cmd_check,
}


def run(argv=None, stdout=None, stderr=None):
    """Run the CLI; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg_path = _config_path(argv)
        if cfg_path is not None:
            _apply_config(parser, cfg_path)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except DomainError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    try:
        text, code = COMMANDS[args.command](args)
    except (DomainError, RegimeError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError) as exc:
        print(f"numerical error: {exc}", file=stderr)
        return EXIT_NUMERIC
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def _config_path(argv):
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def main():
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)
