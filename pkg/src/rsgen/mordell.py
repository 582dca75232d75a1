"""The Mordell integral Upsilon(u; tau) and its normalized form G(u; tau).

Values come from three independent routes:

* trapezoid quadrature on the line through 1/2 in direction e^{3 pi i/4},
  after moving ``u`` into a well-conditioned region with the unit and
  tau shift relations;
* the closed form for rational tau = m/n (Gauss-sum type), differentiated
  as a Taylor series;
* the classical kernel Psi(u) = G(u; 1).

Derivatives in ``u`` are returned as lists ``[F, F', ..., F^(K)]``.
"""

from __future__ import annotations

import math
from math import comb

from .numkernel import DomainError, QuadratureSpec, integrate_real_line
from .polyalg import hermite_poly
from .precision import as_config

__all__ = [
    "NearSingularityError",
    "theta_k",
    "psi_classical",
    "psi_derivatives",
    "upsilon",
    "upsilon_derivatives",
    "upsilon_reduced",
    "g_value",
    "g_derivatives",
    "g_rational",
    "g_rational_derivatives",
    "unit_shift_term",
    "tau_shift_term",
]

SINGULAR_THRESHOLD = 1e-3
_EPS = complex(-1, 1) / math.sqrt(2)  # e^{3 pi i/4}
STRIP = 0.25  # usable half-height of the pole-free strip (poles sit at 0.3535...)


class NearSingularityError(ArithmeticError):
    """Closed form evaluated too close to a removable singularity."""


def theta_k(k: int, u, ctx=None):
    """u^2/2 - sqrt(k) u - k/2 - 1/8."""
    if ctx is None:
        ctx = as_config(None).ctx
    return u * u / 2 - ctx.sqrt(k) * u - ctx.mpf(k) / 2 - ctx.mpf(1) / 8


def _target_digits(cfg, target_rel_err) -> int:
    if target_rel_err is None:
        return cfg.effective_digits
    return max(5, int(math.ceil(-math.log10(float(target_rel_err)))))


# --------------------------------------------------------------------------
# truncated Taylor series, stored as coefficient lists
# --------------------------------------------------------------------------

def _exp_quadratic_series(c0, c1, c2, M, ctx):
    """Taylor coefficients of exp(c0 + c1 h + c2 h^2) up to h^(M-1)."""
    e = [ctx.exp(c0)]
    for n in range(1, M):
        v = c1 * e[n - 1]
        if n >= 2:
            v += 2 * c2 * e[n - 2]
        e.append(v / n)
    return e


def _trig_linear_series(A, B, M, ctx, kind):
    """Coefficients of sin or cos of pi(A + B h)."""
    base = ctx.pi * A
    out = []
    fac = ctx.mpf(1)
    pb = ctx.mpf(1)
    for n in range(M):
        if n:
            fac *= n
            pb *= ctx.pi * B
        phase = base + n * ctx.pi / 2
        val = ctx.sin(phase) if kind == "sin" else ctx.cos(phase)
        out.append(pb * val / fac)
    return out


def _series_div(a, b, ctx):
    M = len(a)
    q = []
    for n in range(M):
        v = a[n]
        for j in range(1, n + 1):
            if j < len(b):
                v -= b[j] * q[n - j]
        q.append(v / b[0])
    return q


def _series_to_derivs(c, ctx):
    out = []
    fac = ctx.mpf(1)
    for n, v in enumerate(c):
        if n:
            fac *= n
        out.append(v * fac)
    return out


def _recentre(c, delta, K, ctx):
    """Derivatives 0..K at h = delta of the series sum c_n h^n."""
    out = []
    for k in range(K + 1):
        acc = ctx.mpc(0)
        for n in range(len(c) - 1, k - 1, -1):
            acc = acc * delta + c[n] * _falling(n, k)
        out.append(acc)
    return out


def _falling(n, k):
    v = 1
    for j in range(k):
        v *= n - j
    return v


# --------------------------------------------------------------------------
# Psi(u) = cos(pi(u^2/2 - u - 1/8)) / cos(pi u)
# --------------------------------------------------------------------------

def _psi_numerator(u0, M, ctx):
    # cos(pi q(u0+h)), q = u^2/2 - u - 1/8; q(u0+h) = q0 + (u0-1) h + h^2/2
    q0 = u0 * u0 / 2 - u0 - ctx.mpf(1) / 8
    i = ctx.mpc(0, 1)
    ep = _exp_quadratic_series(i * ctx.pi * q0, i * ctx.pi * (u0 - 1), i * ctx.pi / 2, M, ctx)
    em = _exp_quadratic_series(-i * ctx.pi * q0, -i * ctx.pi * (u0 - 1), -i * ctx.pi / 2, M, ctx)
    return [(x + y) / 2 for x, y in zip(ep, em)]


def psi_derivatives(u, K: int, prec=None):
    """[Psi(u), Psi'(u), ..., Psi^(K)(u)] from the quotient of cosines."""
    cfg = as_config(prec)
    out_ctx = cfg.ctx
    work = cfg.extended(10)
    ctx = work.ctx
    u = ctx.mpc(u)
    if abs(ctx.cos(ctx.pi * u)) >= 0.1:
        M = K + 1
        num = _psi_numerator(u, M, ctx)
        den = _trig_linear_series(u, 1, M, ctx, "cos")
        derivs = _series_to_derivs(_series_div(num, den, ctx), ctx)
    else:
        # expand about the nearest half-integer, where numerator and
        # denominator vanish together; the division is ill-conditioned
        # so it runs with doubled precision
        digits = work.effective_digits
        work = cfg.extended(digits + 10)
        ctx = work.ctx
        u = ctx.mpc(u)
        centre = ctx.floor(u.real) + ctx.mpf(1) / 2
        M = K + digits + 30
        num = _psi_numerator(ctx.mpc(centre), M + 1, ctx)[1:]
        den = _trig_linear_series(centre, 1, M + 1, ctx, "cos")[1:]
        c = _series_div(num, den, ctx)
        derivs = _recentre(c, u - centre, K, ctx)
    return [out_ctx.mpc(d) for d in derivs]


def psi_classical(u, k: int = 0, prec=None):
    """k-th derivative of Psi(u)."""
    return psi_derivatives(u, k, prec)[k]


# --------------------------------------------------------------------------
# quadrature for Upsilon and its u-derivatives
# --------------------------------------------------------------------------

def _check_tau(tau):
    if not tau.real > 0:
        raise DomainError("tau must have positive real part")


def _upsilon_quadrature(u, tau, K, cfg, digits):
    """[Upsilon^(j)(u; tau) for j <= K] by the trapezoid rule."""
    uc, tc = complex(u), complex(tau)
    A = math.pi * tc.real
    lin = math.pi * 1j * _EPS * (2 * uc - tc)
    t_c = lin.real / (2 * A)
    peak = lin.real**2 / (4 * A)
    lost = peak / math.log(10)
    need = digits + lost + 3
    if cfg.fast_mode:
        work = cfg
        need = min(need, 13.5)
    else:
        work = cfg.extended(int(lost) + 12 + K // 2)
    ctx = work.ctx
    ln_need = need * math.log(10)
    half_width = abs(t_c) + math.sqrt((ln_need + K * 3 + 5) / A) + 0.5
    growth = A * STRIP**2 + abs(lin.imag) * STRIP + 2 * math.pi * abs(tc.imag) * half_width * STRIP
    step = 2 * math.pi * STRIP / (ln_need + growth + 5)
    qspec = QuadratureSpec(step=step, half_width=half_width, max_refinements=6,
                           target_rel_err=10.0 ** (-need))

    u = ctx.mpc(u)
    tau = ctx.mpc(tau)
    i = ctx.mpc(0, 1)
    eps = ctx.expjpi(ctx.mpf(3) / 4)
    a2 = -ctx.pi * tau
    a1 = ctx.pi * i * eps * (2 * u - tau)
    p_arg = 2 * ctx.pi * i * eps
    two_eps = 2 * eps

    def integrand(x):
        base = ctx.exp(a2 * x * x + a1 * x) / (ctx.exp(p_arg * x) + 1)
        vals = [base]
        w = 1 + two_eps * x
        for _ in range(K):
            base = base * w
            vals.append(base)
        return vals

    integrals = integrate_real_line(integrand, qspec, work)
    front = -eps * ctx.exp(ctx.pi * i * (u - tau / 4))
    out = []
    for j, val in enumerate(integrals):
        out.append(front * (ctx.pi * i) ** j * val)
    return out, ctx


def unit_shift_term(x, tau, k, ctx):
    """k-th derivative of e^{3 pi i/4} tau^{-1/2} e^{pi i x^2/tau} in x."""
    c = ctx.expjpi(-ctx.mpf(1) / 4) * ctx.sqrt(ctx.pi / tau)
    h = hermite_poly(k).evaluate(c * x, ctx)
    return (ctx.expjpi(ctx.mpf(3 * (k + 1)) / 4) * (ctx.pi / tau) ** (ctx.mpf(k) / 2)
            * h * ctx.exp(ctx.pi * ctx.mpc(0, 1) * x * x / tau) / ctx.sqrt(tau))


def tau_shift_term(u0, tau, n, j, k, ctx):
    """k-th u0-derivative of exp(pi i[(n^2 - j^2) tau + 2(n - j) u0])."""
    i = ctx.mpc(0, 1)
    return (2 * ctx.pi * i * (n - j)) ** k * ctx.exp(
        ctx.pi * i * ((n * n - j * j) * tau + 2 * (n - j) * u0))


def _apply_unit_shift(vals, x, tau, m, ctx):
    """Upsilon derivatives at x + m from those at x."""
    K = len(vals) - 1
    out = list(vals)
    if m >= 0:
        for j in range(m):
            for k in range(K + 1):
                out[k] += unit_shift_term(x + j, tau, k, ctx)
    else:
        for j in range(m, 0):
            for k in range(K + 1):
                out[k] -= unit_shift_term(x + j, tau, k, ctx)
    return out


def _apply_tau_shift(vals, u0, tau, n, ctx):
    """Upsilon derivatives at u0 + n tau from those at u0."""
    if n == 0:
        return list(vals)
    K = len(vals) - 1
    i = ctx.mpc(0, 1)
    out = []
    if n > 0:
        lead = ctx.exp(ctx.pi * i * n * n * tau) * ctx.exp(2 * ctx.pi * i * n * u0)
        for k in range(K + 1):
            acc = ctx.mpc(0)
            for j in range(k + 1):
                acc += comb(k, j) * (2 * ctx.pi * i * n) ** (k - j) * vals[j]
            acc *= lead
            for j in range(n):
                acc -= tau_shift_term(u0, tau, n, j, k, ctx)
            out.append(acc)
        return out
    # inverse relation: u0 = v + |n| tau with v the target point
    p = -n
    v = u0 + n * tau
    lead = ctx.exp(-ctx.pi * i * p * p * tau) * ctx.exp(-2 * ctx.pi * i * p * v)
    shifted = []
    for j in range(K + 1):
        b = ctx.mpc(0)
        for l in range(p):
            b += tau_shift_term(v, tau, p, l, j, ctx)
        shifted.append(vals[j] + b)
    for k in range(K + 1):
        acc = ctx.mpc(0)
        for j in range(k + 1):
            acc += comb(k, j) * (-2 * ctx.pi * i * p) ** (k - j) * shifted[j]
        out.append(acc * lead)
    return out


def _default_shifts(u, tau):
    n = int(round((float(u.real) - float(tau.real) / 2) / float(tau.real)))
    u1 = u - n * tau
    m = int(round(float(u1.real) - float(tau.real) / 2))
    return n, m


def upsilon_reduced(u, tau, K: int, prec=None, target_rel_err=None, shifts=None):
    """[Upsilon^(j)(u; tau)]_{j<=K}, quadrature after shifting u.

    ``shifts=(n, m)`` writes u = u'' + m + n tau and integrates at u''.
    By default n and m move u'' to within half a unit of tau/2, where
    the integrand has no large exponential factors.
    """
    cfg = as_config(prec)
    ctx_in = cfg.ctx
    u = ctx_in.mpc(u)
    tau = ctx_in.mpc(tau)
    _check_tau(tau)
    if shifts is None:
        shifts = _default_shifts(u, tau)
    n, m = shifts
    digits = _target_digits(cfg, target_rel_err)
    ctx_probe = cfg.extended(12).ctx if not cfg.fast_mode else cfg.ctx
    base_point = ctx_probe.mpc(u) - m - n * ctx_probe.mpc(tau)
    vals, ctx = _upsilon_quadrature(base_point, tau, K, cfg, digits)
    # guard digits for the shift sums, which can be large
    tau_w = ctx.mpc(tau)
    x = ctx.mpc(u) - m - n * tau_w
    vals = _apply_unit_shift(vals, x, tau_w, m, ctx)
    vals = _apply_tau_shift(vals, x + m, tau_w, n, ctx)
    return [ctx_in.mpc(v) for v in vals]


def upsilon_derivatives(u, tau, K: int, prec=None, target_rel_err=None, reduce=True):
    """[Upsilon(u; tau), ..., Upsilon^(K)(u; tau)]."""
    if reduce:
        return upsilon_reduced(u, tau, K, prec, target_rel_err)
    return upsilon_reduced(u, tau, K, prec, target_rel_err, shifts=(0, 0))


def upsilon(u, tau, k: int = 0, prec=None, target_rel_err=None, reduce=True):
    """k-th u-derivative of the Mordell integral Upsilon(u; tau)."""
    return upsilon_derivatives(u, tau, k, prec, target_rel_err, reduce)[k]


# --------------------------------------------------------------------------
# G(u; tau)
# --------------------------------------------------------------------------

def _g_from_upsilon(u, tau, ups, ctx):
    K = len(ups) - 1
    i = ctx.mpc(0, 1)
    front = tau ** (ctx.mpf(1) / 4) * ctx.exp(-ctx.pi * i * u * u / 2 + ctx.pi * i / 8)
    c = ctx.expjpi(ctx.mpf(1) / 4) * ctx.sqrt(ctx.pi / 2)
    herm = [hermite_poly(j).evaluate(c * u, ctx) * ctx.expjpi(ctx.mpf(5 * j) / 4)
            * (ctx.pi / 2) ** (ctx.mpf(j) / 2) for j in range(K + 1)]
    root = ctx.sqrt(tau)
    out = []
    for k in range(K + 1):
        acc = ctx.mpc(0)
        for j in range(k + 1):
            acc += comb(k, j) * herm[j] * root ** (k - j) * ups[k - j]
        out.append(front * acc)
    return out


def g_derivatives(u, tau, K: int, prec=None, method: str = "auto", target_rel_err=None):
    """[G(u; tau), G'(u; tau), ..., G^(K)(u; tau)].

    ``method``: ``"quadrature"`` always integrates; ``"auto"`` first maps
    |tau| < 1 to 1/tau with the conjugation symmetry, which keeps the
    integrand narrow.
    """
    cfg = as_config(prec)
    ctx_out = cfg.ctx
    u = ctx_out.mpc(u)
    tau = ctx_out.mpc(tau)
    _check_tau(tau)
    if method not in ("auto", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto" and abs(tau) < 1:
        vals = g_derivatives(ctx_out.conj(u), 1 / ctx_out.conj(tau), K, cfg, "quadrature", target_rel_err)
        return [ctx_out.conj(v) for v in vals]
    work = cfg if cfg.fast_mode else cfg.extended(8)
    ctx = work.ctx
    uw = ctx.mpc(u)
    tw = ctx.mpc(tau)
    ups = upsilon_reduced(ctx.sqrt(tw) * uw, tw, K, work, target_rel_err)
    return [ctx_out.mpc(v) for v in _g_from_upsilon(uw, tw, ups, ctx)]


def g_value(u, tau, k: int = 0, prec=None, method: str = "auto", target_rel_err=None):
    """k-th derivative of G(u; tau)."""
    return g_derivatives(u, tau, k, prec, method, target_rel_err)[k]


# --------------------------------------------------------------------------
# rational tau = m/n
# --------------------------------------------------------------------------

def g_rational_derivatives(u, m: int, n: int, K: int, prec=None, threshold=SINGULAR_THRESHOLD):
    """[G^(j)(u; m/n)]_{j<=K} from the closed form.

    Raises :class:`NearSingularityError` when the denominator
    sin(pi(sqrt(mn) u + mn/2)) is below ``threshold`` in modulus.
    """
    if m < 1 or n < 1:
        raise DomainError("m and n must be positive integers")
    cfg = as_config(prec)
    ctx_out = cfg.ctx
    probe = cfg.extended(5).ctx if not cfg.fast_mode else cfg.ctx
    mn = m * n
    up = probe.mpc(u)
    d0 = abs(probe.sin(probe.pi * (probe.sqrt(mn) * up + probe.mpf(mn) / 2)))
    if d0 < threshold:
        raise NearSingularityError(
            f"|sin| = {float(d0):.3g} below {threshold:g} at u = {complex(up)}")
    guard = 10 + int((K + 1) * max(0.0, -math.log10(float(d0)) + 1))
    work = cfg if cfg.fast_mode else cfg.extended(guard)
    ctx = work.ctx
    u = ctx.mpc(u)
    M = K + 1
    i = ctx.mpc(0, 1)
    pi = ctx.pi
    r = ctx.mpf(m) / n
    sk = ctx.sqrt(mn)
    # theta_mn(u + h) = th0 + th1 h + h^2/2
    th0 = theta_k(mn, u, ctx)
    th1 = u - sk
    num = [ctx.mpc(0)] * M
    w1 = r ** (ctx.mpf(1) / 4)
    srt = ctx.sqrt(r)
    for j in range(n):
        # -pi i theta - pi i j [2 (u+h) sqrt(m/n) + j m/n]
        c0 = -pi * i * th0 - pi * i * j * (2 * u * srt + j * r)
        c1 = -pi * i * th1 - 2 * pi * i * j * srt
        ser = _exp_quadratic_series(c0, c1, -pi * i / 2, M, ctx)
        num = [a + w1 * b for a, b in zip(num, ser)]
    rinv = 1 / r
    sinv = ctx.sqrt(rinv)
    for j in range(m):
        c0 = pi * i * th0 + pi * i * j * (2 * u * sinv + j * rinv)
        c1 = pi * i * th1 + 2 * pi * i * j * sinv
        ser = _exp_quadratic_series(c0, c1, pi * i / 2, M, ctx)
        num = [a - b / w1 for a, b in zip(num, ser)]
    den = [2 * i * v for v in _trig_linear_series(sk * u + ctx.mpf(mn) / 2, sk, M, ctx, "sin")]
    derivs = _series_to_derivs(_series_div(num, den, ctx), ctx)
    return [ctx_out.mpc(v) for v in derivs]


def g_rational(u, m: int, n: int, k: int = 0, prec=None, threshold=SINGULAR_THRESHOLD):
    """k-th derivative of G(u; m/n) from the closed form."""
    return g_rational_derivatives(u, m, n, k, prec, threshold)[k]
