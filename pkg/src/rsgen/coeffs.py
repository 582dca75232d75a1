"""Exact construction of the coefficient families of the expansion.

Every builder returns exact objects over Q(i); the only numeric entry
points are :func:`a_k_eval` and :func:`c_classical`.  Builders are
memoized process-wide, which is safe because the results are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .polyalg import BellTable, BiPoly, GaussRational, bernoulli_poly, hermite_poly, i_power
from .precision import as_config

__all__ = [
    "f_poly",
    "u_poly",
    "g_poly",
    "gamma_m_poly",
    "d_poly",
    "q_poly",
    "q_poly_by_degree",
    "s_poly",
    "p_poly",
    "AkCoeff",
    "a_k_bell",
    "a_k_recursive",
    "a_k_eval",
    "c_classical",
]

_ZERO = BiPoly()
_ONE = BiPoly.const(1)
_SIGMA = BiPoly.sigma()


def _sigma_poly_from_uni(uni) -> BiPoly:
    return BiPoly.sigma_poly(uni.coeffs)


def _check_index(name: str, value: int, lo: int, hi: int) -> None:
    if not isinstance(value, int) or not lo <= value <= hi:
        raise IndexError(f"{name}={value!r} outside {lo}..{hi}")


# --------------------------------------------------------------------------
# f_n, u_m and the Gamma-series coefficients
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def f_poly(n: int) -> BiPoly:
    """f_n(sigma), a polynomial of degree n+1."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("f_n is defined for n >= 1")
    b = bernoulli_poly(n + 1)
    half = Fraction(1, 2)
    first = b.compose_linear(half, 0)
    second = b.compose_linear(-half, half)
    sign = 1 if (n + 1) % 2 == 0 else -1
    total = first + second * sign
    return _sigma_poly_from_uni(total) * Fraction(1, 2 * n * (n + 1))


_F_TABLE = BellTable(f_poly, one=_ONE, zero=_ZERO)


@lru_cache(maxsize=None)
def u_poly(m: int) -> BiPoly:
    """u_m(sigma) = (-2)^m sum_k Bell_{m,k}(f_1, f_2, ...)/k!."""
    if not isinstance(m, int) or m < 0:
        raise ValueError("m must be a nonnegative integer")
    if m == 0:
        return _ONE
    acc = _ZERO
    for k in range(1, m + 1):
        acc = acc + _F_TABLE(m, k) * Fraction(1, factorial(k))
    return acc * (-2) ** m


@lru_cache(maxsize=None)
def g_poly(n: int) -> BiPoly:
    """g_n(sigma) = -B_{n+1}(sigma)/(n(n+1))."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("g_n is defined for n >= 1")
    return _sigma_poly_from_uni(bernoulli_poly(n + 1)) * Fraction(-1, n * (n + 1))


_G_TABLE = BellTable(g_poly, one=_ONE, zero=_ZERO)


@lru_cache(maxsize=None)
def gamma_m_poly(m: int) -> BiPoly:
    """gamma_m(sigma) = i^m sum_k Bell_{m,k}(g_1, g_2, ...)/k!."""
    if not isinstance(m, int) or m < 0:
        raise ValueError("m must be a nonnegative integer")
    if m == 0:
        return _ONE
    acc = _ZERO
    for k in range(1, m + 1):
        acc = acc + _G_TABLE(m, k) * Fraction(1, factorial(k))
    return acc * i_power(m)


# --------------------------------------------------------------------------
# d_{m,r}
# --------------------------------------------------------------------------

# p_j = (-1)^{j+1}/(j+2): 1/3, -1/4, 1/5, ...
_P_TABLE = BellTable(lambda j: Fraction((-1) ** (j + 1), j + 2))
# l_j = (-1)^{j+1}/j: 1, -1/2, 1/3, ...
_L_TABLE = BellTable(lambda j: Fraction((-1) ** (j + 1), j))


@lru_cache(maxsize=None)
def _sigma_minus_one_power(k: int) -> BiPoly:
    return (_SIGMA - 1) ** k


@lru_cache(maxsize=None)
def _log_factor(j: int) -> BiPoly:
    """sum_k Bell_{j,k}(1, -1/2, 1/3, ...) (sigma-1)^k / k!."""
    acc = _ZERO
    for k in range(j + 1):
        c = _L_TABLE(j, k)
        if c:
            acc = acc + _sigma_minus_one_power(k) * (c / factorial(k))
    return acc


@lru_cache(maxsize=None)
def d_poly(m: int, r: int) -> BiPoly:
    """d_{m,r}(sigma), of degree m - r."""
    if not isinstance(m, int) or not isinstance(r, int) or m < 0 or r < 0:
        raise ValueError("indices must be nonnegative integers")
    if r > m:
        raise ValueError(f"empty range: d_{{m,r}} needs r <= m, got m={m}, r={r}")
    acc = _ZERO
    rf = factorial(r)
    for n in range(r, m + 1):
        c = _P_TABLE(n, r)
        if c:
            acc = acc + _log_factor(m - n) * (c / rf)
    return acc


# --------------------------------------------------------------------------
# q, s and P
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def q_poly(n: int, ell: int) -> BiPoly:
    """q_{n,3n-2ell}(sigma)."""
    if not isinstance(n, int) or n < 0:
        raise IndexError("n must be a nonnegative integer")
    _check_index("ell", ell, 0, 3 * n // 2)
    acc = _ZERO
    for m in range(max(0, ell - n), ell // 3 + 1):
        acc = acc + u_poly(m) * d_poly(n - 2 * m, n - ell + m)
    return acc


def q_poly_by_degree(n: int, k: int) -> BiPoly:
    """q_{n,k}; zero when k and n have opposite parity."""
    _check_index("k", k, 0, 3 * n)
    if (3 * n - k) % 2:
        return _ZERO
    return q_poly(n, (3 * n - k) // 2)


@lru_cache(maxsize=None)
def s_poly(n: int, m: int) -> BiPoly:
    """s_{n,m}(sigma) = sum_ell 4^ell (3n-2ell)!/(m-ell)! q_{n,3n-2ell}(sigma)."""
    if not isinstance(n, int) or n < 0:
        raise IndexError("n must be a nonnegative integer")
    _check_index("m", m, 0, 3 * n // 2)
    acc = _ZERO
    for ell in range(m + 1):
        w = Fraction(4**ell * factorial(3 * n - 2 * ell), factorial(m - ell))
        acc = acc + q_poly(n, ell) * w
    return acc


def _hermite_rotated(j: int, k: int) -> BiPoly:
    """e^{3 pi i k/4} H_j(e^{-pi i/4} x), which lies in Q(i)[x] when j = k mod 2."""
    h = hermite_poly(j)
    out = {}
    for p, c in enumerate(h.coeffs):
        if not c:
            continue
        eighth = (3 * k - p) % 8
        if eighth % 2:
            raise ArithmeticError(
                f"coefficient of x^{p} left Q(i) (exponent {eighth}/8 of a turn)")
        out[(p, 0)] = c * i_power(eighth // 2)
    return BiPoly(out)


def _p_hermite(n: int, k: int) -> BiPoly:
    acc = _ZERO
    for ell in range(k // 2 + 1):
        q = q_poly(n, ell)
        if not q:
            continue
        w = Fraction(comb(3 * n - 2 * ell, 3 * n - k) * (-1) ** (n + ell), 2 ** (k - 2 * ell))
        acc = acc + q * _hermite_rotated(k - 2 * ell, k) * w
    return acc


def _p_from_s(n: int, k: int) -> BiPoly:
    acc = _ZERO
    four_i = GaussRational(0, 4)
    for m in range(k // 2 + 1):
        w = GaussRational(1) / (four_i**m * factorial(k - 2 * m))
        acc = acc + s_poly(n, m) * BiPoly({(k - 2 * m, 0): w})
    return acc * (i_power(k) * Fraction((-1) ** n, factorial(3 * n - k)))


@lru_cache(maxsize=None)
def p_poly(n: int, k: int, route: str = "hermite") -> BiPoly:
    """P_{n,k}(x, sigma).

    ``route="hermite"`` expands the Hermite form directly; ``route="s"``
    assembles through s_{n,m}.  Both are exact and must agree.
    """
    if not isinstance(n, int) or n < 0:
        raise IndexError("n must be a nonnegative integer")
    _check_index("k", k, 0, 3 * n)
    if route == "hermite":
        return _p_hermite(n, k)
    if route == "s":
        return _p_from_s(n, k)
    raise ValueError(f"unknown route {route!r}")


# --------------------------------------------------------------------------
# a_k as Laurent polynomials in t^{1/2}
# --------------------------------------------------------------------------

class AkCoeff:
    """a_k(s) stored as {e: poly(sigma)} meaning sum poly(sigma) * t^(e/2)."""

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms: dict[int, BiPoly]):
        self.k = k
        self.terms = {e: p for e, p in terms.items() if p}

    def __eq__(self, other):
        if not isinstance(other, AkCoeff):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        parts = ", ".join(f"t^({e}/2): {p.serialize()!r}" for e, p in sorted(self.terms.items()))
        return f"AkCoeff(k={self.k}, {{{parts}}})"

    def evaluate(self, sigma, t, ctx):
        root = ctx.sqrt(t)
        total = ctx.mpf(0)
        for e, p in self.terms.items():
            total += p.evaluate(0, sigma, ctx) * root**e
        return total


@lru_cache(maxsize=None)
def a_k_bell(k: int) -> AkCoeff:
    """a_k = sum_r i^r d_{k-2r,r}(sigma) t^{r-k/2}."""
    if not isinstance(k, int) or k < 0:
        raise ValueError("k must be a nonnegative integer")
    terms = {}
    for r in range(k // 3 + 1):
        terms[2 * r - k] = d_poly(k - 2 * r, r) * i_power(r)
    return AkCoeff(k, terms)


@lru_cache(maxsize=None)
def _a_recursive_terms(k: int) -> tuple:
    if k < 0:
        return ()
    if k == 0:
        return ((0, _ONE),)
    # k sqrt(t) a_k = -(k - sigma) a_{k-1} + i a_{k-3}
    acc: dict[int, BiPoly] = {}
    factor = (_SIGMA - k) * Fraction(1, k)
    for e, p in _a_recursive_terms(k - 1):
        acc[e - 1] = acc.get(e - 1, _ZERO) + p * factor
    for e, p in _a_recursive_terms(k - 3):
        acc[e - 1] = acc.get(e - 1, _ZERO) + p * GaussRational(0, Fraction(1, k))
    return tuple(sorted((e, p) for e, p in acc.items() if p))


def a_k_recursive(k: int) -> AkCoeff:
    """a_k from the three-term recursion, for cross-checking :func:`a_k_bell`."""
    if not isinstance(k, int) or k < 0:
        raise ValueError("k must be a nonnegative integer")
    return AkCoeff(k, dict(_a_recursive_terms(k)))


def a_k_eval(k: int, s, prec=None):
    """Numeric a_k(s) for Im s > 0."""
    cfg = as_config(prec)
    ctx = cfg.ctx
    s = ctx.mpc(s)
    if s.imag <= 0:
        raise ValueError("a_k(s) needs t = Im(s) > 0")
    return a_k_bell(k).evaluate(s.real, s.imag, ctx)


# --------------------------------------------------------------------------
# classical Riemann-Siegel coefficients
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _c_weights(n: int) -> tuple:
    """Nonzero pairs (r, P_{n,3n-r}(0, 1/2))."""
    out = []
    for r in range(3 * n + 1):
        v = p_poly(n, 3 * n - r).specialize(x=0, sigma=Fraction(1, 2)).to_scalar()
        if v:
            out.append((r, v))
    return tuple(out)


def c_classical(n: int, prec=None):
    """Return a -> C_n(a) built from derivatives of G(u; 1) at u = 2a."""
    from .mordell import g_derivatives

    if not isinstance(n, int) or n < 0:
        raise ValueError("n must be a nonnegative integer")
    cfg = as_config(prec)
    weights = _c_weights(n)

    def c_n(a):
        ctx = cfg.ctx
        a = ctx.mpf(a)
        if not 0 <= a < 1:
            raise ValueError("a must lie in [0, 1)")
        derivs = g_derivatives(2 * a, 1, 3 * n, cfg)
        two_pi = 2 * ctx.pi
        total = ctx.mpc(0)
        for r, w in weights:
            total += derivs[r] * w.to_ctx(ctx) / two_pi ** (ctx.mpf(r) / 2)
        return total

    return c_n
