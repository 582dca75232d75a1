"""``rsg``: reproduce the benchmark tables, evaluate R(s; alpha, beta),
dump coefficient polynomials, evaluate Mordell integrals and run decay
studies.

Exit status: 0 when every check passes, 1 on a numeric mismatch, 2 on a
usage or domain error.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import coeffs, mordell, studies
from .fixtures import TABLES, parse_expr, split_marked
from .numkernel import DomainError, QuadratureError, theta_exact
from .precision import PrecisionConfig
from .report import Report, complex_fields, format_complex, format_real, to_csv, to_json, to_text
from .rsformula import (EvalPoint, RegimeWarning, hardy_z, hardy_z_exact, remainder_exact, rs_general,
                        rs_intermediate)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
DEFAULT_N_CAP = 20


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--digits", type=int, default=40, help="working precision in decimal digits (>= 15)")
    p.add_argument("--fast", action="store_true", help="use machine floats with relaxed tolerances")
    p.add_argument("--format", choices=("csv", "json", "text"), default="text", dest="output_format")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent rows")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog="rsg", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="reproduce a benchmark table (1-7)")
    p.add_argument("table_id", type=int, choices=sorted(TABLES))

    p = sub.add_parser("eval", parents=[common], help="evaluate R(s; alpha, beta)")
    p.add_argument("--s", required=True, help="e.g. '1/2+600*i'")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha", help="first partial-sum length")
    g.add_argument("--lambda", dest="lam", help="shape parameter sqrt(alpha/beta)")
    p.add_argument("--beta", help="second length; derived from t = 2 pi alpha beta when omitted")
    p.add_argument("--N", type=int, default=5, help="expansion order")
    p.add_argument("--mode", choices=("general", "intermediate", "exact"), default="general")

    p = sub.add_parser("coeffs", parents=[common], help="dump P_{n,k}(x, sigma) exactly")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", default=None, help="single k or range 'lo:hi' (inclusive); default 0:3n")
    p.add_argument("--sigma", default=None, help="exact rational to substitute, e.g. 1/2")
    p.add_argument("--route", choices=("hermite", "s"), default="hermite")
    p.add_argument("--max-n", type=int, default=DEFAULT_N_CAP)

    p = sub.add_parser("mordell", parents=[common], help="evaluate G^(k)(u; tau)")
    p.add_argument("--u", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--tau")
    g.add_argument("--rational", help="tau as m/n; also runs the closed form")
    p.add_argument("--k", type=int, default=0)

    p = sub.add_parser("decay", parents=[common], help="error-decay regression study")
    p.add_argument("study", choices=("afe", "order", "theta"))
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--sigma", default=None)
    p.add_argument("--grid", default=None, help="comma-separated t values (theta) or alpha values")
    p.add_argument("--at-table", type=int, default=None,
                   help="order study: errors against N at a table point instead of against t")
    p.add_argument("--orders", default="1,3,5", help="orders used with --at-table")
    return parser


def _config(args) -> PrecisionConfig:
    try:
        return PrecisionConfig(args.digits, args.fast)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _config_dict(args) -> dict:
    return {"digits": args.digits, "fast_mode": args.fast, "format": args.output_format,
            "jobs": args.jobs}


def _out_digits(cfg: PrecisionConfig) -> int:
    return min(cfg.effective_digits, 30) if not cfg.fast_mode else 12


# --------------------------------------------------------------------------
# table
# --------------------------------------------------------------------------

def _digits_between(value, ref, ctx) -> float:
    diff = abs(value - ref)
    if diff == 0:
        return 99.0
    return float(-ctx.log10(diff / abs(ref)))


def _table_point(fx, cfg):
    ctx = cfg.ctx
    s = ctx.mpc(parse_expr(fx.sigma, ctx), parse_expr(fx.t, ctx))
    return EvalPoint(s, parse_expr(fx.alpha, ctx), parse_expr(fx.beta, ctx), cfg)


def _pack(z, cfg):
    # worker results cross the process boundary as decimal strings
    ctx = cfg.ctx
    z = ctx.mpc(z)
    n = cfg.effective_digits + 5
    return ctx.nstr(z.real, n), ctx.nstr(z.imag, n)


def _unpack(pair, ctx):
    return ctx.mpc(ctx.mpf(pair[0]), ctx.mpf(pair[1]))


def _task_remainder(table_id, digits, fast):
    cfg = PrecisionConfig(digits, fast)
    return _pack(remainder_exact(_table_point(TABLES[table_id], cfg)), cfg)


def _task_expansion(table_id, digits, fast, N):
    cfg = PrecisionConfig(digits, fast)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        values = rs_general(_table_point(TABLES[table_id], cfg), N).partial_values()
    return [_pack(v, cfg) for v in values]


def _task_hardy(digits, fast, N):
    cfg = PrecisionConfig(digits, fast)
    t = 2 * cfg.ctx.pi
    if N is None:
        return _pack(hardy_z_exact(t, cfg).real, cfg)
    return _pack(hardy_z(t, N, cfg), cfg)


def _run_tasks(tasks, jobs):
    if jobs <= 1:
        return [fn(*a) for fn, a in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, *a) for fn, a in tasks]
        return [f.result() for f in futures]


def cmd_table(args, report: Report) -> None:
    cfg = _config(args)
    ctx = cfg.ctx
    fx = TABLES[args.table_id]
    nd = _out_digits(cfg)
    slack = 10.0 ** 4 if cfg.fast_mode else 1.0

    if fx.kind == "hardy_z":
        tasks = [(_task_hardy, (cfg.digits, cfg.fast_mode, row.N)) for row in fx.rows]
        values = [_unpack(v, ctx).real for v in _run_tasks(tasks, args.jobs)]
        for row, val in zip(fx.rows, values):
            plain, decimals = split_marked(row.re)
            expected = ctx.mpf(plain)
            tol = 0.5 * 10.0 ** (-decimals) * slack
            ok = bool(abs(val - expected) <= tol)
            report.add({"table": fx.table_id, "N": "exact" if row.N is None else row.N, "t": "2*pi"},
                       format_real(val, ctx, nd), plain,
                       round(_digits_between(val, expected, ctx), 2), ok)
        return

    n_max = max(r.N for r in fx.rows if r.N is not None)
    tasks = [(_task_remainder, (fx.table_id, cfg.digits, cfg.fast_mode)),
             (_task_expansion, (fx.table_id, cfg.digits, cfg.fast_mode, n_max))]
    exact, partials = _run_tasks(tasks, args.jobs)
    exact = _unpack(exact, ctx)
    partials = [_unpack(v, ctx) for v in partials]
    inputs_base = {"table": fx.table_id, "sigma": fx.sigma, "t": fx.t, "alpha": fx.alpha, "beta": fx.beta}
    for row in fx.rows:
        re_plain, re_dec = split_marked(row.re)
        im_plain, im_dec = split_marked(row.im)
        expected = ctx.mpc(ctx.mpf(re_plain), ctx.mpf(im_plain))
        val = exact if row.N is None else partials[row.N]
        ok = (abs(val.real - expected.real) <= 0.5 * 10.0 ** (-re_dec) * slack
              and abs(val.imag - expected.imag) <= 0.5 * 10.0 ** (-im_dec) * slack)
        inputs = dict(inputs_base, N="exact" if row.N is None else row.N)
        if row.N == fx.expansion_N:
            vs_exact = _digits_between(val, exact, ctx)
            inputs["digits_vs_exact"] = round(vs_exact, 2)
            ok = ok and vs_exact >= fx.expansion_digits - (4 if cfg.fast_mode else 0)
        report.add(inputs, complex_fields(val, ctx, nd), {"re": re_plain, "im": im_plain},
                   round(_digits_between(val, expected, ctx), 2), bool(ok))


# --------------------------------------------------------------------------
# eval / coeffs / mordell / decay
# --------------------------------------------------------------------------

def cmd_eval(args, report: Report) -> None:
    cfg = _config(args)
    ctx = cfg.ctx
    s = ctx.mpc(parse_expr(args.s, ctx))
    if args.lam is not None:
        if args.beta is not None:
            raise UsageError("--beta cannot be combined with --lambda")
        pt = EvalPoint.from_lambda(s, parse_expr(args.lam, ctx), cfg)
    elif args.beta is not None:
        pt = EvalPoint.from_alpha_beta(s, parse_expr(args.alpha, ctx), parse_expr(args.beta, ctx), cfg)
    else:
        pt = EvalPoint.from_alpha(s, parse_expr(args.alpha, ctx), cfg)
    if args.N < 0:
        raise UsageError("--N must be nonnegative")
    nd = _out_digits(cfg)
    inputs = {"s": format_complex(pt.s, ctx, nd), "alpha": format_real(pt.alpha, ctx, nd),
              "beta": format_real(pt.beta, ctx, nd), "mode": args.mode}
    if args.mode == "exact":
        report.add(inputs, complex_fields(remainder_exact(pt), ctx, nd))
    elif args.mode == "general":
        res = rs_general(pt, args.N)
        inputs["N"] = args.N
        computed = complex_fields(res.value, ctx, nd)
        computed["order_terms"] = [complex_fields(v, ctx, nd) for v in res.order_terms]
        report.add(inputs, computed)
    else:
        corr = rs_intermediate(pt, args.N)
        inputs["N"] = args.N
        r_val = ctx.exp(ctx.mpc(0, 1) * theta_exact(pt.s, cfg)) * corr
        computed = complex_fields(r_val, ctx, nd)
        computed["zeta_correction"] = complex_fields(corr, ctx, nd)
        report.add(inputs, computed)


def _k_range(spec, n):
    if spec is None:
        return range(0, 3 * n + 1)
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        return range(int(lo), int(hi) + 1)
    k = int(spec)
    return range(k, k + 1)


def cmd_coeffs(args, report: Report) -> None:
    n = args.n
    if n < 0:
        raise UsageError("--n must be nonnegative")
    if n > args.max_n:
        raise UsageError(f"n = {n} exceeds the cap {args.max_n} (raise it with --max-n)")
    sigma = Fraction(args.sigma) if args.sigma is not None else None
    ks = _k_range(args.k, n)
    if ks.start < 0 or ks.stop - 1 > 3 * n or len(ks) == 0:
        raise UsageError(f"k must lie in 0..{3 * n}")
    for k in ks:
        poly = coeffs.p_poly(n, k, args.route)
        if sigma is not None:
            poly = poly.specialize(sigma=sigma)
        inputs = {"n": n, "k": k, "sigma": "symbolic" if sigma is None else str(sigma)}
        report.add(inputs, {"monomials": poly.monomials()})


def cmd_mordell(args, report: Report) -> None:
    cfg = _config(args)
    ctx = cfg.ctx
    u = ctx.mpc(parse_expr(args.u, ctx))
    nd = _out_digits(cfg)
    if args.k < 0:
        raise UsageError("--k must be nonnegative")
    if args.rational is not None:
        frac = Fraction(args.rational)
        if frac <= 0:
            raise UsageError("tau must be positive")
        tau = ctx.mpf(frac.numerator) / frac.denominator
    else:
        tau = ctx.mpc(parse_expr(args.tau, ctx))
    quad = mordell.g_value(u, tau, args.k, cfg)
    inputs = {"u": format_complex(u, ctx, nd), "tau": args.rational or args.tau, "k": args.k}
    computed = {"quadrature": complex_fields(quad, ctx, nd)}
    passed = None
    if args.rational is not None:
        try:
            closed = mordell.g_rational(u, frac.numerator, frac.denominator, args.k, cfg)
        except mordell.NearSingularityError as exc:
            computed["closed_form"] = f"skipped: {exc}"
        else:
            diff = abs(closed - quad)
            computed["closed_form"] = complex_fields(closed, ctx, nd)
            computed["difference"] = format_real(diff, ctx, 3)
            scale = max(1, abs(quad))
            passed = bool(diff <= cfg.tolerance(5) * scale)
    report.add(inputs, computed, passed=passed)


def _grid(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def cmd_decay(args, report: Report) -> None:
    cfg = _config(args)
    ctx = cfg.ctx
    if args.study == "order" and args.at_table is not None:
        fx = TABLES.get(args.at_table)
        if fx is None or fx.kind != "remainder":
            raise UsageError("--at-table needs one of the remainder tables 2-7")
        orders = [int(x) for x in _grid(args.orders)]
        pt = _table_point(fx, cfg)
        exact = remainder_exact(pt)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            partial = rs_general(pt, max(orders)).partial_values()
        errs = [abs(partial[N] - exact) for N in orders]
        for N, e in zip(orders, errs):
            report.add({"table": fx.table_id, "N": N}, {"error": format_real(e, ctx, 6)})
        decreasing = all(b < a for a, b in zip(errs, errs[1:]))
        slope = (math.log10(float(errs[-1])) - math.log10(float(errs[0]))) / max(1, orders[-1] - orders[0])
        report.footer.append(("slope", format_real(slope, ctx, 6)))
        report.footer.append(("strictly_decreasing", str(decreasing).lower()))
        return
    if args.study == "theta":
        ts = [float(x) for x in _grid(args.grid)] if args.grid else studies.DEFAULT_THETA_TS
        study = studies.theta_decay(args.N, args.sigma or "0.75", ts, cfg)
    elif args.study == "afe":
        alphas = _grid(args.grid) if args.grid else studies.DEFAULT_AFE_ALPHAS
        study = studies.afe_decay(alphas, args.sigma or "0.5", cfg)
    else:
        alphas = _grid(args.grid) if args.grid else studies.DEFAULT_ORDER_ALPHAS
        study = studies.order_decay(args.N, 3, alphas, args.sigma or "0.5", cfg)
    if not study.ts:
        raise UsageError("empty grid")
    inputs_base = {k: v for k, v in study.params.items()}
    for t, e in study.rows():
        report.add(dict(inputs_base, t=format_real(t, ctx, 10)), {"error": format_real(e, ctx, 6)})
    report.footer.append(("slope", format_real(study.slope, ctx, 6)))


COMMANDS = {"table": cmd_table, "eval": cmd_eval, "coeffs": cmd_coeffs, "mordell": cmd_mordell,
            "decay": cmd_decay}


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    return to_text(report)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    report = Report(args.command, _config_dict(args))
    try:
        COMMANDS[args.command](args, report)
    except (UsageError, DomainError, ValueError, IndexError, ZeroDivisionError) as exc:
        print(f"rsg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"rsg {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    text = render(report, args.output_format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_MISMATCH if report.summary["failed"] else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
