"""Error-decay studies: log-log regression of truncation error against t."""

from __future__ import annotations

import math
import statistics
import warnings
from dataclasses import dataclass

from .numkernel import theta_asymptotic, theta_exact
from .precision import as_config
from .rsformula import EvalPoint, RegimeWarning, remainder_exact, rs_general

__all__ = [
    "DecayStudy",
    "loglog_slope",
    "theta_decay",
    "afe_decay",
    "order_decay",
    "DEFAULT_THETA_TS",
    "DEFAULT_AFE_ALPHAS",
    "DEFAULT_ORDER_ALPHAS",
]

DEFAULT_THETA_TS = (50, 100, 200, 400, 800)
# alpha = k + 0.3 keeps the fractional part fixed; t runs from about 1e2 to 1e4
DEFAULT_AFE_ALPHAS = ("4.3", "6.3", "10.3", "16.3", "25.3", "39.3")
# lambda = sqrt(3): alpha = 17.2 + 3j keeps a = 0.2 and b = 0.7333... fixed,
# with t = 2 pi alpha^2 / 3 close to 620, 1130, 2600, 4670
DEFAULT_ORDER_ALPHAS = ("17.2", "23.2", "35.2", "47.2")


@dataclass
class DecayStudy:
    name: str
    params: dict
    ts: list
    errors: list
    slope: float

    def rows(self):
        return list(zip(self.ts, self.errors))


def loglog_slope(ts, errors) -> float:
    """Least-squares slope of log(error) against log(t)."""
    xs = [math.log(float(t)) for t in ts]
    ys = [math.log(float(e)) for e in errors]
    return statistics.linear_regression(xs, ys).slope


def theta_decay(N: int, sigma="0.75", ts=DEFAULT_THETA_TS, prec=None) -> DecayStudy:
    """|theta_asymptotic(s, N) - theta_exact(s)| along sigma + i t."""
    cfg = as_config(prec)
    ctx = cfg.ctx
    sig = ctx.mpf(sigma)
    errs = []
    for t in ts:
        s = ctx.mpc(sig, t)
        errs.append(abs(theta_asymptotic(s, N, cfg) - theta_exact(s, cfg)))
    return DecayStudy("theta", {"N": N, "sigma": str(sigma)}, list(ts), errs, loglog_slope(ts, errs))


def afe_decay(alphas=DEFAULT_AFE_ALPHAS, sigma="0.5", prec=None) -> DecayStudy:
    """|R(s; alpha, alpha)| with t = 2 pi alpha^2, i.e. lambda = 1."""
    cfg = as_config(prec)
    ctx = cfg.ctx
    ts, errs = [], []
    for al in alphas:
        al = ctx.mpf(al)
        t = 2 * ctx.pi * al * al
        pt = EvalPoint(ctx.mpc(ctx.mpf(sigma), t), al, al, cfg)
        ts.append(t)
        errs.append(abs(remainder_exact(pt)))
    return DecayStudy("afe", {"lambda": "1", "sigma": str(sigma)}, ts, errs, loglog_slope(ts, errs))


def order_decay(N: int, lam_sq: int = 3, alphas=DEFAULT_ORDER_ALPHAS, sigma="0.5", prec=None) -> DecayStudy:
    """|rs_general(pt, N) - R| at fixed lambda = sqrt(lam_sq) as t grows."""
    cfg = as_config(prec)
    ctx = cfg.ctx
    ts, errs = [], []
    for al in alphas:
        al = ctx.mpf(al)
        be = al / lam_sq
        t = 2 * ctx.pi * al * be
        pt = EvalPoint(ctx.mpc(ctx.mpf(sigma), t), al, be, cfg)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            approx = rs_general(pt, N).value
        ts.append(t)
        errs.append(abs(approx - remainder_exact(pt)))
    return DecayStudy("order", {"N": N, "lambda_sq": lam_sq, "sigma": str(sigma)}, ts, errs,
                      loglog_slope(ts, errs))
