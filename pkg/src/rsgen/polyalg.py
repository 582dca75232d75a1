"""Exact arithmetic over Q(i): Gaussian rationals, polynomials, and the
classical polynomial families (Bernoulli, Hermite, partial ordinary Bell).

Everything here is exact.  Floating point only enters through
``evaluate`` methods, which take an mpmath context.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Iterable, Sequence

__all__ = [
    "GaussRational",
    "UniPoly",
    "BiPoly",
    "BellTable",
    "I",
    "bell_partial_ordinary",
    "bernoulli_number",
    "bernoulli_poly",
    "hermite_poly",
    "format_rational",
    "parse_rational",
]


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot make an exact rational from {type(v).__name__}")


class GaussRational:
    """An element re + im*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, v) -> "GaussRational":
        if isinstance(v, GaussRational):
            return v
        return cls(v)

    def __repr__(self):
        return f"GaussRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_gauss(self)

    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussRational):
            return GaussRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussRational):
            return GaussRational(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, GaussRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussRational(a * c)
            return GaussRational(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return GaussRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(i)")
            return GaussRational(self.re / other, self.im / other)
        if isinstance(other, GaussRational):
            n = other.re * other.re + other.im * other.im
            if n == 0:
                raise ZeroDivisionError("division by zero in Q(i)")
            return self * GaussRational(other.re / n, -other.im / n)
        return NotImplemented

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return GaussRational(1) / self**(-n)
        result = GaussRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def to_ctx(self, ctx):
        if self.im == 0:
            return ctx.mpf(self.re.numerator) / self.re.denominator
        return ctx.mpc(ctx.mpf(self.re.numerator) / self.re.denominator,
                       ctx.mpf(self.im.numerator) / self.im.denominator)


I = GaussRational(0, 1)
_ZERO = GaussRational(0)
_ONE = GaussRational(1)


def i_power(k: int) -> GaussRational:
    """i**k for any integer k."""
    return (GaussRational(1), GaussRational(0, 1),
            GaussRational(-1), GaussRational(0, -1))[k % 4]


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def format_gauss(z: GaussRational) -> str:
    im = format_rational(abs(z.im))
    sign = "-" if z.im < 0 else "+"
    return f"{format_rational(z.re)}{sign}{im}i"


_GAUSS_RE = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)([+-])(\d+(?:/\d+)?)i\s*$")


def parse_gauss(text: str) -> GaussRational:
    m = _GAUSS_RE.match(text)
    if not m:
        raise ValueError(f"not a Gaussian rational literal: {text!r}")
    im = parse_rational(m.group(3))
    if m.group(2) == "-":
        im = -im
    return GaussRational(parse_rational(m.group(1)), im)


# --------------------------------------------------------------------------
# univariate polynomials
# --------------------------------------------------------------------------

class UniPoly:
    """Dense univariate polynomial over Q(i), ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [GaussRational.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, k: int) -> GaussRational:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return _ZERO

    def __add__(self, other):
        other = _as_unipoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_unipoly(other))

    def __rsub__(self, other):
        return _as_unipoly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return UniPoly(c * other for c in self.coeffs)
        other = _as_unipoly(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __call__(self, x):
        """Exact Horner evaluation at a rational or Gaussian rational."""
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate(self, x, ctx):
        acc = ctx.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c.to_ctx(ctx)
        return acc

    def compose_linear(self, a, b) -> "UniPoly":
        """p(a*x + b)."""
        lin = UniPoly([b, a])
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * lin + UniPoly([c])
        return acc

    def to_bipoly(self, var: str = "x") -> "BiPoly":
        if var == "x":
            return BiPoly({(k, 0): c for k, c in enumerate(self.coeffs)})
        if var == "sigma":
            return BiPoly({(0, k): c for k, c in enumerate(self.coeffs)})
        raise ValueError(f"unknown variable {var!r}")


def _as_unipoly(v) -> UniPoly:
    if isinstance(v, UniPoly):
        return v
    return UniPoly([v])


# --------------------------------------------------------------------------
# bivariate polynomials in (x, sigma)
# --------------------------------------------------------------------------

Scalar = (int, Fraction, GaussRational)


class BiPoly:
    """Sparse polynomial in x and sigma over Q(i).

    Stored as a map ``(deg_x, deg_sigma) -> coefficient`` with no zero
    entries.  Instances are treated as immutable.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: dict | None = None):
        c = {}
        if coeffs:
            for key, v in coeffs.items():
                v = GaussRational.coerce(v)
                if v:
                    c[key] = v
        self._c = c

    @classmethod
    def _raw(cls, c: dict) -> "BiPoly":
        p = cls.__new__(cls)
        p._c = c
        return p

    @classmethod
    def const(cls, v) -> "BiPoly":
        return cls({(0, 0): v})

    @classmethod
    def x(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def sigma(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    @classmethod
    def sigma_poly(cls, coeffs: Sequence) -> "BiPoly":
        """Polynomial in sigma from ascending coefficients."""
        return cls({(0, k): c for k, c in enumerate(coeffs)})

    @classmethod
    def x_poly(cls, coeffs: Sequence) -> "BiPoly":
        return cls({(k, 0): c for k, c in enumerate(coeffs)})

    # -- inspection ---------------------------------------------------------
    def items(self):
        return self._c.items()

    def coeff(self, i: int, j: int = 0) -> GaussRational:
        return self._c.get((i, j), _ZERO)

    def is_zero(self) -> bool:
        return not self._c

    __bool__ = lambda self: bool(self._c)  # noqa: E731

    @property
    def degree_x(self) -> int:
        return max((i for i, _ in self._c), default=-1)

    @property
    def degree_sigma(self) -> int:
        return max((j for _, j in self._c), default=-1)

    def x_coeff(self, i: int) -> "BiPoly":
        """Coefficient of x**i, as a polynomial in sigma."""
        return BiPoly._raw({(0, j): v for (a, j), v in self._c.items() if a == i})

    def sigma_coeffs(self) -> list[GaussRational]:
        """Ascending sigma coefficients; requires x-degree 0."""
        if self.degree_x > 0:
            raise ValueError("polynomial depends on x")
        out = [_ZERO] * (self.degree_sigma + 1)
        for (_, j), v in self._c.items():
            out[j] = v
        return out

    def __repr__(self):
        return f"BiPoly({self.serialize()!r})"

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self._c == other._c
        if isinstance(other, Scalar):
            return self == BiPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Scalar):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        c = dict(self._c)
        for k, v in other._c.items():
            w = c.get(k)
            w = v if w is None else w + v
            if w:
                c[k] = w
            else:
                c.pop(k, None)
        return BiPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if isinstance(other, Scalar):
            other = BiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar):
            if not other:
                return BiPoly()
            return BiPoly._raw({k: v * other for k, v in self._c.items()})
        if not isinstance(other, BiPoly):
            return NotImplemented
        c: dict = {}
        for (i1, j1), v1 in self._c.items():
            for (i2, j2), v2 in other._c.items():
                k = (i1 + i2, j1 + j2)
                w = c.get(k)
                c[k] = v1 * v2 if w is None else w + v1 * v2
        return BiPoly._raw({k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            return BiPoly._raw({k: v / other for k, v in self._c.items()})
        return NotImplemented

    def __pow__(self, n: int):
        result = BiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- substitutions ------------------------------------------------------
    def conjugate(self) -> "BiPoly":
        """Conjugate every coefficient."""
        return BiPoly._raw({k: v.conjugate() for k, v in self._c.items()})

    def negate_x(self) -> "BiPoly":
        """p(-x, sigma)."""
        return BiPoly._raw({(i, j): (-v if i % 2 else v) for (i, j), v in self._c.items()})

    def compose_sigma(self, a, b) -> "BiPoly":
        """p(x, a*sigma + b) for exact a, b."""
        a = GaussRational.coerce(a)
        b = GaussRational.coerce(b)
        out = BiPoly()
        by_j: dict[int, dict] = {}
        for (i, j), v in self._c.items():
            by_j.setdefault(j, {})[(i, 0)] = v
        for j, part in by_j.items():
            # (a*sigma + b)**j
            lin = BiPoly({(0, r): comb(j, r) * a**r * b**(j - r) for r in range(j + 1)})
            out = out + BiPoly._raw(part) * lin
        return out

    def reflect_sigma(self) -> "BiPoly":
        """p(x, 1 - sigma)."""
        return self.compose_sigma(-1, 1)

    def specialize(self, x=None, sigma=None) -> "BiPoly":
        """Substitute exact values for x and/or sigma."""
        c: dict = {}
        for (i, j), v in self._c.items():
            if x is not None:
                v = v * GaussRational.coerce(x) ** i
                i = 0
            if sigma is not None:
                v = v * GaussRational.coerce(sigma) ** j
                j = 0
            w = c.get((i, j))
            c[(i, j)] = v if w is None else w + v
        return BiPoly({k: v for k, v in c.items() if v})

    def to_scalar(self) -> GaussRational:
        if any(k != (0, 0) for k in self._c):
            raise ValueError("polynomial is not constant")
        return self.coeff(0, 0)

    def evaluate(self, x, sigma, ctx):
        """Numeric value at (x, sigma) in the given mpmath context."""
        # group by power of x and run Horner in sigma inside
        dx, ds = self.degree_x, self.degree_sigma
        if dx < 0:
            return ctx.mpf(0)
        grid = [[None] * (ds + 1) for _ in range(dx + 1)]
        for (i, j), v in self._c.items():
            grid[i][j] = v
        acc = ctx.mpf(0)
        for i in range(dx, -1, -1):
            row = ctx.mpf(0)
            for j in range(ds, -1, -1):
                row = row * sigma
                if grid[i][j] is not None:
                    row = row + grid[i][j].to_ctx(ctx)
            acc = acc * x + row
        return acc

    # -- text form ----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self._c.items(), key=lambda kv: (-kv[0][0], -kv[0][1]))

    def serialize(self) -> str:
        """One monomial per line: ``a+bi * x^j * sigma^k``."""
        if not self._c:
            return "0+0i * x^0 * sigma^0"
        return "\n".join(
            f"{format_gauss(v)} * x^{i} * sigma^{j}" for (i, j), v in self.sorted_terms()
        )

    def monomials(self) -> list[str]:
        return self.serialize().splitlines()

    @classmethod
    def parse(cls, text: str) -> "BiPoly":
        c = {}
        for line in text.replace(";", "\n").splitlines():
            line = line.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split("*")]
            if len(parts) != 3 or not parts[1].startswith("x^") or not parts[2].startswith("sigma^"):
                raise ValueError(f"bad monomial: {line!r}")
            key = (int(parts[1][2:]), int(parts[2][6:]))
            c[key] = c.get(key, _ZERO) + parse_gauss(parts[0])
        return cls(c)


# --------------------------------------------------------------------------
# classical families
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa gives B_n with B_1 = +1/2; fix the sign afterwards.
    out = []
    a = []
    for m in range(n + 1):
        a.append(Fraction(1, m + 1))
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if n >= 1:
        out[1] = -out[1]
    return tuple(out)


_BERN_CACHE: list[Fraction] = []


def bernoulli_number(n: int) -> Fraction:
    """B_n = B_n(0), so B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n >= len(_BERN_CACHE):
        size = max(n + 1, 2 * len(_BERN_CACHE), 32)
        _BERN_CACHE[:] = _bernoulli_table(size - 1)
    return _BERN_CACHE[n]


@lru_cache(maxsize=None)
def bernoulli_poly(n: int) -> UniPoly:
    """B_n(x) from t e^{xt}/(e^t - 1) = sum B_n(x) t^n/n!."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return UniPoly(comb(n, k) * bernoulli_number(n - k) for k in range(n + 1))


@lru_cache(maxsize=None)
def hermite_poly(n: int) -> UniPoly:
    """Physicists' Hermite polynomial, generating function exp(2xt - t^2)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    coeffs = [0] * (n + 1)
    for j in range(n // 2 + 1):
        coeffs[n - 2 * j] = (-1) ** j * factorial(n) * 2 ** (n - 2 * j) // (
            factorial(j) * factorial(n - 2 * j))
    return UniPoly(coeffs)


# --------------------------------------------------------------------------
# partial ordinary Bell polynomials
# --------------------------------------------------------------------------

class BellTable:
    """Memoized values B^_{i,j}(p_1, p_2, ...) for one input sequence.

    ``seq`` is either a sequence (``seq[0]`` is p_1) or a callable
    ``m -> p_m`` for m >= 1.  Entries may be any ring elements supporting
    ``+`` and ``*`` (rationals, Gaussian rationals, BiPoly).
    """

    def __init__(self, seq: Sequence | Callable[[int], object], one=None, zero=None):
        if callable(seq):
            self._get = seq
        else:
            items = list(seq)
            self._get = lambda m: items[m - 1] if m <= len(items) else None
        self._p: dict[int, object] = {}
        self.one = Fraction(1) if one is None else one
        self.zero = Fraction(0) if zero is None else zero
        self._memo: dict[tuple[int, int], object] = {}

    def p(self, m: int):
        if m not in self._p:
            v = self._get(m)
            if v is None:
                raise IndexError(f"sequence entry p_{m} not available")
            self._p[m] = v
        return self._p[m]

    def __call__(self, i: int, j: int):
        return self.value(i, j)

    def value(self, i: int, j: int):
        if i < 0 or j < 0:
            raise ValueError("indices must be nonnegative")
        if j == 0:
            return self.one if i == 0 else self.zero
        if i < j:
            return self.zero
        key = (i, j)
        memo = self._memo
        if key in memo:
            return memo[key]
        acc = self.zero
        for m in range(1, i - j + 2):
            prev = self.value(i - m, j - 1)
            if prev == self.zero:
                continue
            acc = acc + self.p(m) * prev
        memo[key] = acc
        return acc


def bell_partial_ordinary(i: int, j: int, p, one=None, zero=None):
    """Coefficient of x^i in (p_1 x + p_2 x^2 + ...)^j."""
    table = p if isinstance(p, BellTable) else BellTable(p, one=one, zero=zero)
    return table.value(i, j)
