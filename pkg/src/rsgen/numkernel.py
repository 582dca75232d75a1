"""Log-gamma, chi and theta, their large-t series, and a real-line quadrature.

All functions take ``prec`` (a :class:`PrecisionConfig`, a digit count,
or ``None`` for the default) and return values in that context.  Work
that loses digits to cancellation runs with a few guard digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polyalg import bernoulli_number, bernoulli_poly
from .precision import as_config

__all__ = [
    "DomainError",
    "QuadratureError",
    "QuadratureSpec",
    "log_gamma",
    "gamma",
    "log_gamma_asymptotic",
    "chi",
    "theta_exact",
    "theta_asymptotic",
    "theta_critical_asymptotic",
    "gamma_asymptotic",
    "exp_theta_prefactor_series",
    "integrate_real_line",
]

GUARD = 10


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class QuadratureError(ArithmeticError):
    """Trapezoid refinements failed to settle."""


def _q(ctx, v: Fraction):
    return ctx.mpf(v.numerator) / v.denominator


# --------------------------------------------------------------------------
# log-gamma and friends
# --------------------------------------------------------------------------

def _log_gamma_raw(z, ctx, digits: int):
    """Principal log Gamma(z) for z off (-inf, 0]; ctx already has guard digits."""
    shift_to = 20 + digits // 2
    acc = ctx.mpc(0)
    # Gamma(z) = Gamma(z+m) / prod(z+j); principal logs keep the branch
    # continuous across the cut plane.
    while z.real < shift_to:
        acc -= ctx.log(z)
        z += 1
    eps = ctx.mpf(10) ** (-digits - 2)
    s = (z - ctx.mpf(1) / 2) * ctx.log(z) - z + ctx.log(2 * ctx.pi) / 2
    zinv = 1 / z
    zinv2 = zinv * zinv
    power = zinv
    k = 1
    while True:
        term = _q(ctx, bernoulli_number(2 * k)) / (2 * k * (2 * k - 1)) * power
        s += term
        if abs(term) < eps * max(1, abs(s)):
            break
        power *= zinv2
        k += 1
        if k > 4 * digits + 50:
            break
    return s + acc


def _check_gamma_arg(z, ctx):
    if z.imag == 0 and z.real <= 0:
        if z.real == ctx.floor(z.real):
            raise DomainError(f"Gamma has a pole at {z.real}")
        raise DomainError("log_gamma is not defined on the negative real axis")


def log_gamma(z, prec=None):
    """Principal branch of log Gamma(z) on the plane cut along (-inf, 0]."""
    cfg = as_config(prec)
    work = cfg.extended(GUARD)
    ctx = work.ctx
    z = ctx.mpc(z)
    _check_gamma_arg(z, ctx)
    return cfg.ctx.mpc(_log_gamma_raw(z, ctx, work.effective_digits))


def gamma(z, prec=None):
    """Gamma(z), using reflection on the negative real axis."""
    cfg = as_config(prec)
    work = cfg.extended(GUARD)
    ctx = work.ctx
    z = ctx.mpc(z)
    if z.imag == 0 and z.real <= 0:
        if z.real == ctx.floor(z.real):
            raise DomainError(f"Gamma has a pole at {z.real}")
        w = 1 - z
        val = ctx.pi / (ctx.sinpi(z.real) * ctx.exp(_log_gamma_raw(w, ctx, work.effective_digits)))
    else:
        val = ctx.exp(_log_gamma_raw(z, ctx, work.effective_digits))
    return cfg.ctx.mpc(val)


def log_gamma_asymptotic(s, N: int, prec=None):
    """Stirling series in the vertical-strip form with B_{k+1}(sigma) terms."""
    cfg = as_config(prec)
    ctx = cfg.ctx
    s = ctx.mpc(s)
    t = s.imag
    if t == 0:
        raise DomainError("needs Im(s) != 0")
    if N < 1:
        raise ValueError("N must be positive")
    it = ctx.mpc(0, t)
    out = (s - ctx.mpf(1) / 2) * ctx.log(it) - it + ctx.log(2 * ctx.pi) / 2
    for k in range(1, N):
        b = bernoulli_poly(k + 1).evaluate(s.real, ctx)
        out -= (ctx.mpc(0, 1) / t) ** k * b / (k * (k + 1))
    return out


def _is_bad_real(s, ctx):
    return s.imag == 0 and (s.real <= 0 or s.real >= 1)


def chi(s, prec=None):
    """chi(s) = pi^{s-1/2} Gamma((1-s)/2) / Gamma(s/2)."""
    cfg = as_config(prec)
    work = cfg.extended(GUARD)
    ctx = work.ctx
    s = ctx.mpc(s)
    half = ctx.mpf(1) / 2
    if _is_bad_real(s, ctx):
        # finite real values via Gamma with reflection; poles and zeros raise
        num = gamma((1 - s) / 2, work)
        den = gamma(s / 2, work)
        return cfg.ctx.mpc(ctx.power(ctx.pi, s - half) * num / den)
    d = work.effective_digits
    lg = (s - half) * ctx.log(ctx.pi) + _log_gamma_raw((1 - s) / 2, ctx, d) - _log_gamma_raw(s / 2, ctx, d)
    return cfg.ctx.mpc(ctx.exp(lg))


def theta_exact(s, prec=None):
    """theta(s) with theta(1/2) = 0, through -2i theta = log of the chi factors."""
    cfg = as_config(prec)
    work = cfg.extended(GUARD)
    ctx = work.ctx
    s = ctx.mpc(s)
    if _is_bad_real(s, ctx):
        raise DomainError("theta is not defined on (-inf, 0] or [1, inf)")
    d = work.effective_digits
    half = ctx.mpf(1) / 2
    m2i = (s - half) * ctx.log(ctx.pi) + _log_gamma_raw((1 - s) / 2, ctx, d) - _log_gamma_raw(s / 2, ctx, d)
    return cfg.ctx.mpc(m2i * ctx.mpc(0, half))


def _f_value(n: int, sigma, ctx):
    from .coeffs import f_poly

    return f_poly(n).evaluate(0, sigma, ctx)


def theta_asymptotic(s, N: int, prec=None):
    """Large-t series for theta(s) truncated after N-1 correction terms."""
    cfg = as_config(prec)
    ctx = cfg.ctx
    s = ctx.mpc(s)
    t = s.imag
    if t == 0:
        raise DomainError("needs Im(s) != 0")
    if N < 1:
        raise ValueError("N must be positive")
    sgn = 1 if t > 0 else -1
    i = ctx.mpc(0, 1)
    i_theta = ((s / 2 - ctx.mpf(1) / 4) * ctx.log(abs(t) / (2 * ctx.pi))
               - i * t / 2 - sgn * i * ctx.pi / 8)
    for n in range(1, N):
        i_theta -= (2 * i / t) ** n * _f_value(n, s.real, ctx)
    return i_theta / i


def theta_critical_asymptotic(t, N: int, prec=None):
    """Real series for theta(1/2 + it)."""
    cfg = as_config(prec)
    ctx = cfg.ctx
    t = ctx.mpf(t)
    if t == 0:
        raise DomainError("needs t != 0")
    if N < 1:
        raise ValueError("N must be positive")
    sgn = 1 if t > 0 else -1
    out = t / 2 * ctx.log(abs(t) / (2 * ctx.pi)) - t / 2 - sgn * ctx.pi / 8
    for n in range(1, N):
        b = bernoulli_poly(2 * n)(Fraction(1, 4)).re
        c = Fraction((-4) ** (n - 1)) * b / ((2 * n - 1) * n)
        out -= _q(ctx, c) / t ** (2 * n - 1)
    return out


def gamma_asymptotic(s, L: int, prec=None):
    """sqrt(2 pi) e^{pi i s/2 - it - pi i/4} t^{s-1/2} sum_{m<L} gamma_m(sigma)/t^m."""
    from .coeffs import gamma_m_poly

    cfg = as_config(prec)
    ctx = cfg.ctx
    s = ctx.mpc(s)
    t = s.imag
    if t < 1:
        raise DomainError("needs Im(s) >= 1")
    if L < 1:
        raise ValueError("L must be positive")
    i = ctx.mpc(0, 1)
    series = ctx.mpc(0)
    for m in range(L):
        series += gamma_m_poly(m).evaluate(0, s.real, ctx) / t**m
    lead = ctx.sqrt(2 * ctx.pi) * ctx.exp(ctx.pi * i * s / 2 - i * t - ctx.pi * i / 4
                                          + (s - ctx.mpf(1) / 2) * ctx.log(t))
    return lead * series


def exp_theta_prefactor_series(s, L: int, prec=None):
    """sum_{m<L} u_m(sigma)/(it)^m."""
    from .coeffs import u_poly

    cfg = as_config(prec)
    ctx = cfg.ctx
    s = ctx.mpc(s)
    t = s.imag
    if t < 2 * ctx.pi:
        raise DomainError("needs Im(s) >= 2 pi")
    if L < 1:
        raise ValueError("L must be positive")
    it = ctx.mpc(0, t)
    out = ctx.mpc(0)
    for m in range(L):
        out += u_poly(m).evaluate(0, s.real, ctx) / it**m
    return out


# --------------------------------------------------------------------------
# trapezoid quadrature on the real line
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    """Starting grid for :func:`integrate_real_line`.

    Each refinement halves ``step`` and stretches ``half_width`` by
    ``widen`` (default one quarter).
    """

    step: float
    half_width: float
    max_refinements: int = 8
    target_rel_err: float = 1e-30
    widen: float = 0.25

    def __post_init__(self):
        if not self.step > 0 or not self.half_width > 0:
            raise ValueError("step and half_width must be positive")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be positive")


def integrate_real_line(f, spec: QuadratureSpec, prec=None):
    """Trapezoid estimate of the integral of ``f`` over the real line.

    ``f`` may return a scalar or a sequence of values (integrated
    componentwise on a shared grid).  Node values are reused across
    refinements.
    """
    cfg = as_config(prec)
    ctx = cfg.ctx
    h0 = ctx.mpf(spec.step)
    tol = ctx.mpf(spec.target_rel_err)
    cache: dict[Fraction, object] = {}
    vector = None

    def value(key: Fraction):
        nonlocal vector
        v = cache.get(key)
        if v is None:
            x = h0 * key.numerator / key.denominator
            v = f(x)
            if vector is None:
                vector = isinstance(v, (list, tuple))
            if not vector:
                v = (v,)
            cache[key] = v
        return v

    def estimate(level: int):
        denom = 2**level
        half_width = ctx.mpf(spec.half_width) * (1 + spec.widen * level)
        n_max = int(ctx.floor(half_width / h0 * denom))
        sums = None
        abs_sums = None
        for n in range(-n_max, n_max + 1):
            v = value(Fraction(n, denom))
            if sums is None:
                sums = [ctx.mpc(0)] * len(v)
                abs_sums = [ctx.mpf(0)] * len(v)
            for j, c in enumerate(v):
                sums[j] += c
                abs_sums[j] += abs(c)
        h = h0 / denom
        return [h * x for x in sums], [h * x for x in abs_sums]

    prev, _ = estimate(0)
    for level in range(1, spec.max_refinements + 1):
        cur, mags = estimate(level)
        worst = ctx.mpf(0)
        for a, b, m in zip(cur, prev, mags):
            scale = max(abs(a), m)
            if scale == 0:
                continue
            worst = max(worst, abs(a - b) / scale)
        if worst <= tol:
            return cur if vector else cur[0]
        prev = cur
    raise QuadratureError(
        f"no convergence after {spec.max_refinements} refinements (last change {ctx.nstr(worst, 3)})")
