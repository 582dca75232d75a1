"""The remainder R(s; alpha, beta) of the approximate functional equation:
an exact value through an Euler-Maclaurin zeta, the generalized
Riemann-Siegel expansion, the a_k/c_k intermediate expansion, and
Hardy's Z(t) with the classical coefficients C_m(a).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from math import comb

from .coeffs import a_k_bell, p_poly, _c_weights
from .mordell import g_derivatives
from .numkernel import DomainError, _log_gamma_raw, theta_exact
from .polyalg import bernoulli_number, hermite_poly
from .precision import PrecisionConfig, as_config

__all__ = [
    "EvalPoint",
    "FracParts",
    "ExpansionResult",
    "RegimeWarning",
    "partial_sum",
    "zeta_reference",
    "remainder_exact",
    "rs_general",
    "rs_intermediate",
    "hardy_z",
    "hardy_z_exact",
    "c_classical_values",
    "hl_afe_residual",
]


class RegimeWarning(UserWarning):
    """lambda or 1/lambda is large compared with t^(1/6)."""


def _floor_guarded(x, ctx, digits):
    """floor(x), snapping values within 10^(4-digits) of an integer onto it."""
    nearest = ctx.nint(x)
    if abs(x - nearest) <= ctx.mpf(10) ** (4 - digits) * max(1, abs(x)):
        return int(nearest), ctx.mpf(0)
    fl = ctx.floor(x)
    return int(fl), x - fl


@dataclass(frozen=True)
class FracParts:
    a: object
    b: object
    lam: object
    floor_alpha: int
    floor_beta: int


@dataclass(frozen=True)
class EvalPoint:
    """s together with partial-sum lengths alpha, beta with t = 2 pi alpha beta."""

    s: object
    alpha: object
    beta: object
    prec: PrecisionConfig = field(default_factory=PrecisionConfig)

    def __post_init__(self):
        ctx = self.prec.ctx
        object.__setattr__(self, "s", ctx.mpc(self.s))
        object.__setattr__(self, "alpha", ctx.mpf(self.alpha))
        object.__setattr__(self, "beta", ctx.mpf(self.beta))
        if self.t < 2 * ctx.pi * (1 - ctx.mpf(10) ** (2 - self.prec.effective_digits)):
            raise DomainError("needs t >= 2 pi")
        if self.alpha < 1 - ctx.mpf(10) ** (4 - self.prec.effective_digits):
            raise DomainError("alpha must be at least 1")
        if self.beta < 1 - ctx.mpf(10) ** (4 - self.prec.effective_digits):
            raise DomainError("beta must be at least 1")
        mismatch = abs(2 * ctx.pi * self.alpha * self.beta / self.t - 1)
        if mismatch > ctx.mpf(10) ** (2 - self.prec.effective_digits):
            raise DomainError(f"t = 2 pi alpha beta violated (relative mismatch {ctx.nstr(mismatch, 3)})")

    @classmethod
    def from_alpha_beta(cls, s, alpha, beta, prec=None):
        return cls(s, alpha, beta, as_config(prec))

    @classmethod
    def from_alpha(cls, s, alpha, prec=None):
        cfg = as_config(prec)
        ctx = cfg.ctx
        s = ctx.mpc(s)
        alpha = ctx.mpf(alpha)
        return cls(s, alpha, s.imag / (2 * ctx.pi * alpha), cfg)

    @classmethod
    def from_lambda(cls, s, lam, prec=None):
        cfg = as_config(prec)
        ctx = cfg.ctx
        s = ctx.mpc(s)
        lam = ctx.mpf(lam)
        root = ctx.sqrt(s.imag / (2 * ctx.pi))
        return cls(s, lam * root, root / lam, cfg)

    @property
    def sigma(self):
        return self.s.real

    @property
    def t(self):
        return self.s.imag

    def frac(self) -> FracParts:
        ctx = self.prec.ctx
        d = self.prec.effective_digits
        fa, a = _floor_guarded(self.alpha, ctx, d)
        fb, b = _floor_guarded(self.beta, ctx, d)
        return FracParts(a, b, ctx.sqrt(self.alpha / self.beta), fa, fb)

    def swapped(self) -> "EvalPoint":
        """(1 - conj(s), beta, alpha), the mirror point of the symmetry."""
        ctx = self.prec.ctx
        return EvalPoint(1 - ctx.conj(self.s), self.beta, self.alpha, self.prec)


@dataclass
class ExpansionResult:
    """Truncated expansion: value = prefactor * sum_n order_terms[n] / t^(n/2)."""

    order_terms: list
    prefactor: object
    value: object
    N: int
    t: object = None
    g_derivs: list = field(default_factory=list)

    def partial_values(self) -> list:
        """Values for N' = 0, 1, ..., N."""
        out = [self.prefactor * 0]
        acc = 0
        for n, term in enumerate(self.order_terms):
            acc = acc + term / self.t ** (n / 2) if n else acc + term
            out.append(self.prefactor * acc)
        return out


# --------------------------------------------------------------------------
# Dirichlet sums and zeta
# --------------------------------------------------------------------------

def partial_sum(s, limit, prec=None):
    """sum_{1 <= n <= limit} n^(-s)."""
    cfg = as_config(prec)
    ctx = cfg.ctx
    s = ctx.mpc(s)
    limit = ctx.mpf(limit)
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    n_max = int(ctx.floor(limit))
    return ctx.fsum(ctx.power(n, -s) for n in range(1, n_max + 1)) if n_max else ctx.mpc(0)


def zeta_reference(s, prec=None):
    """zeta(s) by Euler-Maclaurin summation with an adaptive Bernoulli tail."""
    cfg = as_config(prec)
    out_ctx = cfg.ctx
    s0 = out_ctx.mpc(s)
    if s0 == 1:
        raise DomainError("zeta has a pole at s = 1")
    digits = cfg.effective_digits
    extra = 15 + max(0, int(-float(s0.real) * math.log10(abs(float(s0.imag)) + 10)))
    work = cfg if cfg.fast_mode else cfg.extended(extra)
    ctx = work.ctx
    s = ctx.mpc(s)
    M = max(int(math.ceil(abs(float(s.imag)) / 2)), 10 * digits)
    head = ctx.fsum(ctx.power(n, -s) for n in range(1, M))
    Mm = ctx.mpf(M)
    m_s = ctx.power(Mm, -s)
    total = head + Mm * m_s / (s - 1) + m_s / 2
    eps = ctx.mpf(10) ** (-digits - 5)
    poch = s  # s (s+1) ... (s+2k-2)
    m_pow = m_s / Mm  # M^(-s-2k+1) for k = 1
    fact = ctx.mpf(2)  # (2k)!
    prev = None
    for k in range(1, 10 * digits + 200):
        term = ctx.mpf(bernoulli_number(2 * k).numerator) / bernoulli_number(2 * k).denominator
        term = term / fact * poch * m_pow
        total += term
        if abs(term) < eps * abs(total) and prev is not None and abs(prev) < eps * abs(total):
            break
        prev = term
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        m_pow /= Mm * Mm
        fact *= (2 * k + 1) * (2 * k + 2)
    else:
        raise ArithmeticError("Euler-Maclaurin tail did not settle")
    return out_ctx.mpc(total)


def remainder_exact(pt: EvalPoint):
    """R(s; alpha, beta) from zeta and the two partial sums."""
    cfg = pt.prec
    work = cfg if cfg.fast_mode else cfg.extended(5)
    ctx = work.ctx
    s = ctx.mpc(pt.s)
    th = theta_exact(s, work)
    i = ctx.mpc(0, 1)
    e_plus = ctx.exp(i * th)
    z = zeta_reference(s, work)
    left = partial_sum(s, pt.alpha, work)
    right = partial_sum(1 - s, pt.beta, work)
    val = e_plus * (z - left) - ctx.exp(-i * th) * right
    return cfg.ctx.mpc(val)


# --------------------------------------------------------------------------
# the generalized expansion
# --------------------------------------------------------------------------

def _common_pieces(pt: EvalPoint, ctx):
    fp = pt.frac()
    a, b, lam = ctx.mpf(fp.a), ctx.mpf(fp.b), ctx.mpf(fp.lam)
    alpha, beta = ctx.mpf(pt.alpha), ctx.mpf(pt.beta)
    i = ctx.mpc(0, 1)
    phase = ctx.exp(ctx.pi * i * (2 * a * beta - 2 * b * alpha + a * a / lam**2 - b * b * lam**2) / 2)
    w = a / lam + b * lam
    x = ctx.sqrt(ctx.pi / 2) * (a / lam - b * lam)
    return fp, a, b, lam, phase, w, x


def _check_regime(lam, t, ctx):
    bound = t ** (ctx.mpf(1) / 6)
    if lam >= bound or 1 / lam >= bound:
        warnings.warn(
            f"lambda = {ctx.nstr(lam, 6)} is not small against t^(1/6) = {ctx.nstr(bound, 6)}; "
            "the expansion may not improve with N", RegimeWarning, stacklevel=3)


def rs_general(pt: EvalPoint, N: int, g_method: str = "auto") -> ExpansionResult:
    """Expansion of R(s; alpha, beta) in powers of t^(-1/2), truncated at N orders."""
    if not isinstance(N, int) or N < 0:
        raise ValueError("N must be a nonnegative integer")
    cfg = pt.prec
    work = cfg if cfg.fast_mode else cfg.extended(5)
    ctx = work.ctx
    s = ctx.mpc(pt.s)
    t = s.imag
    sigma = s.real
    fp, a, b, lam, phase, w, x = _common_pieces(pt, ctx)
    _check_regime(lam, t, ctx)
    sign = -1 if (fp.floor_alpha * fp.floor_beta) % 2 == 0 else 1
    prefactor = sign * phase * (2 * ctx.pi / t) ** (ctx.mpf(1) / 4) * ctx.exp((ctx.mpf(1) / 2 - s) * ctx.log(lam))
    if N == 0:
        zero = cfg.ctx.mpc(0)
        return ExpansionResult([], cfg.ctx.mpc(prefactor), zero, 0, cfg.ctx.mpf(t))
    K = 3 * (N - 1)
    derivs = g_derivatives(w, lam**2, K, work, g_method)
    scaled = [d / (2 * ctx.pi) ** (ctx.mpf(r) / 2) for r, d in enumerate(derivs)]
    terms = []
    total = ctx.mpc(0)
    for n in range(N):
        acc = ctx.mpc(0)
        for r in range(3 * n + 1):
            poly = p_poly(n, 3 * n - r)
            if poly:
                acc += scaled[r] * poly.evaluate(x, sigma, ctx)
        terms.append(acc)
        total += acc * ctx.exp(-ctx.mpf(n) / 2 * ctx.log(t))
    conv = cfg.ctx.mpc
    return ExpansionResult(
        order_terms=[conv(v) for v in terms],
        prefactor=conv(prefactor),
        value=conv(prefactor * total),
        N=N,
        t=cfg.ctx.mpf(t),
        g_derivs=[conv(v) for v in derivs],
    )


def rs_intermediate(pt: EvalPoint, N: int, g_method: str = "auto"):
    """Correction term C with zeta(s) ~ sum_{n<=alpha} n^-s + chi(s) sum_{n<=beta} n^(s-1) + C.

    Built from Siegel's a_k(s) and c_k; R(s; alpha, beta) ~ e^{i theta(s)} C.
    """
    if not isinstance(N, int) or N < 0:
        raise ValueError("N must be a nonnegative integer")
    cfg = pt.prec
    work = cfg if cfg.fast_mode else cfg.extended(10)
    ctx = work.ctx
    s = ctx.mpc(pt.s)
    t = s.imag
    if N == 0:
        return cfg.ctx.mpc(0)
    fp, a, b, lam, phase, w, x = _common_pieces(pt, ctx)
    i = ctx.mpc(0, 1)
    omega = ctx.expjpi(-ctx.mpf(1) / 4) * x
    derivs = g_derivatives(w, lam**2, N - 1, work, g_method)
    herm = [hermite_poly(j).evaluate(omega, ctx) for j in range(N)]
    total = ctx.mpc(0)
    for k in range(N):
        ck = ctx.mpc(0)
        for r in range(k + 1):
            ck += (comb(k, r) * derivs[r] * ctx.expjpi(ctx.mpf(k - 3 * r) / 4)
                   / (2 ** (k - r) * (2 * ctx.pi) ** (ctx.mpf(r) / 2)) * herm[k - r])
        total += a_k_bell(k).evaluate(s.real, t, ctx) * ck
    sign = 1 if (fp.floor_alpha * fp.floor_beta) % 2 == 0 else -1
    log_front = (s * ctx.log(2 * ctx.pi) + ctx.pi * i * s / 2 - _log_gamma_raw(s, ctx, work.effective_digits)
                 + ctx.mpf(1) / 4 * ctx.log(2 * ctx.pi / t) + (ctx.mpf(1) / 2 - s) * ctx.log(lam)
                 + (s / 2 - ctx.mpf(1) / 4) * ctx.log(t / (2 * ctx.pi)) - i * t / 2 - i * ctx.pi / 8)
    front = sign * ctx.exp(log_front) * phase / (ctx.exp(2 * ctx.pi * i * s) - 1)
    return cfg.ctx.mpc(front * total)


# --------------------------------------------------------------------------
# Hardy's Z
# --------------------------------------------------------------------------

def c_classical_values(a, N: int, prec=None) -> list:
    """[C_0(a), ..., C_{N-1}(a)] sharing one set of G(2a; 1) derivatives."""
    cfg = as_config(prec)
    ctx = cfg.ctx
    a = ctx.mpf(a)
    if not 0 <= a < 1:
        raise ValueError("a must lie in [0, 1)")
    if N == 0:
        return []
    derivs = g_derivatives(2 * a, 1, 3 * (N - 1), cfg, "quadrature")
    out = []
    for n in range(N):
        total = ctx.mpc(0)
        for r, wgt in _c_weights(n):
            total += derivs[r] * wgt.to_ctx(ctx) / (2 * ctx.pi) ** (ctx.mpf(r) / 2)
        out.append(total.real)
    return out


def hardy_z(t, N: int, prec=None):
    """Z(t) from the main sum plus N classical correction terms."""
    cfg = as_config(prec)
    work = cfg if cfg.fast_mode else cfg.extended(5)
    ctx = work.ctx
    t = ctx.mpf(t)
    if t < 2 * ctx.pi * (1 - ctx.mpf(10) ** (2 - cfg.effective_digits)):
        raise DomainError("needs t >= 2 pi")
    if not isinstance(N, int) or N < 0:
        raise ValueError("N must be a nonnegative integer")
    alpha = ctx.sqrt(t / (2 * ctx.pi))
    fl, a = _floor_guarded(alpha, ctx, work.effective_digits)
    th = theta_exact(ctx.mpc(ctx.mpf(1) / 2, t), work).real
    main = 2 * ctx.fsum(ctx.cos(th - t * ctx.log(n)) / ctx.sqrt(n) for n in range(1, fl + 1))
    if N == 0:
        return cfg.ctx.mpf(main)
    cs = c_classical_values(a, N, work)
    corr = ctx.fsum(c / t ** (ctx.mpf(m) / 2) for m, c in enumerate(cs))
    sign = -1 if fl % 2 == 0 else 1
    return cfg.ctx.mpf(main + sign * (2 * ctx.pi / t) ** (ctx.mpf(1) / 4) * corr)


def hardy_z_exact(t, prec=None):
    """e^{i theta(1/2+it)} zeta(1/2+it); returned as a complex number whose
    imaginary part measures the round-off."""
    cfg = as_config(prec)
    work = cfg if cfg.fast_mode else cfg.extended(5)
    ctx = work.ctx
    s = ctx.mpc(ctx.mpf(1) / 2, t)
    val = ctx.exp(ctx.mpc(0, 1) * theta_exact(s, work)) * zeta_reference(s, work)
    return cfg.ctx.mpc(val)


def hl_afe_residual(pt: EvalPoint):
    """|R| t^(1/4) / (lambda^(1/2-sigma) (lambda^(1/2) + lambda^(-1/2)))."""
    ctx = pt.prec.ctx
    lam = ctx.sqrt(pt.alpha / pt.beta)
    r = abs(remainder_exact(pt))
    shape = lam ** (ctx.mpf(1) / 2 - pt.sigma) * (ctx.sqrt(lam) + 1 / ctx.sqrt(lam))
    return r * pt.t ** (ctx.mpf(1) / 4) / shape
