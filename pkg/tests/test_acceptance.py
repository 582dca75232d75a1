"""The thirteen acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line with its runtime; the lines are
printed together at the end of the pytest run.
"""

import time
from contextlib import contextmanager
from fractions import Fraction as F
from math import comb, factorial

import mpmath
import pytest

from conftest import ACCEPTANCE_KEY
from rsgen.coeffs import a_k_bell, a_k_eval, a_k_recursive, c_classical, p_poly, s_poly
from rsgen.fixtures import TABLES, parse_expr, split_marked
from rsgen.mordell import g_derivatives, g_rational_derivatives, psi_derivatives, upsilon
from rsgen.polyalg import I, BiPoly, GaussRational, i_power
from rsgen.precision import PrecisionConfig
from rsgen.rsformula import EvalPoint, hardy_z, hardy_z_exact, remainder_exact, rs_general
from rsgen.studies import afe_decay, order_decay, theta_decay

CFG = PrecisionConfig(40)
HALF = F(1, 2)


@pytest.fixture
def criterion(request):
    @contextmanager
    def run(number, title, budget):
        start = time.perf_counter()
        status = "FAIL"
        try:
            yield
            elapsed = time.perf_counter() - start
            assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            line = f"[{status}] criterion {number:2d}: {title} ({elapsed:.1f}s)"
            request.config.stash[ACCEPTANCE_KEY].append((number, line))
    return run


def table_point(fx):
    ctx = CFG.ctx
    s = ctx.mpc(parse_expr(fx.sigma, ctx), parse_expr(fx.t, ctx))
    return EvalPoint(s, parse_expr(fx.alpha, ctx), parse_expr(fx.beta, ctx), CFG)


def rel_digits(value, ref):
    ctx = CFG.ctx
    return float(-ctx.log10(abs(value - ref) / abs(ref)))


def test_criterion_01_table_1(criterion):
    with criterion(1, "Table 1, Hardy Z(2 pi) for N = 0, 1, 3, 6 and exact", 10):
        ctx = CFG.ctx
        t = 2 * ctx.pi
        for row in TABLES[1].rows:
            got = hardy_z_exact(t, CFG).real if row.N is None else hardy_z(t, row.N, CFG)
            assert abs(got - ctx.mpf(row.re)) <= 5e-7, row


REMAINDER_CASES = [
    (2, "Table 2, sigma = 1/2, t = 600, alpha/beta = 3", 60),
    (3, "Table 3, sigma = -2, t = 600, alpha/beta = 3", 60),
    (4, "Table 4, sigma = 3/4, t = 400, alpha/beta = 2", 60),
    (5, "Table 5, sigma = 1/2, t = 256, alpha = 32", 60),
    (6, "Table 6, sigma = 1, t = 600, alpha/beta = 5/3", 60),
    (7, "Table 7, sigma = 1/2, t = 800, alpha/beta = 4", 300),
]


# Table 5 has lambda about 5, beyond t^(1/6); the published run uses it anyway
@pytest.mark.filterwarnings("ignore::rsgen.rsformula.RegimeWarning")
@pytest.mark.parametrize("table_id,title,budget", REMAINDER_CASES, ids=[f"table_{c[0]}" for c in REMAINDER_CASES])
def test_criteria_02_to_07_tables(criterion, table_id, title, budget):
    with criterion(table_id, title, budget):
        fx = TABLES[table_id]
        ctx = CFG.ctx
        pt = table_point(fx)
        R = remainder_exact(pt)
        ref = fx.rows[-1]
        re, dre = split_marked(ref.re)
        im, dim = split_marked(ref.im)
        # half a unit in the last printed decimal
        assert abs(R.real - ctx.mpf(re)) <= 0.5 * 10.0**-dre
        assert abs(R.imag - ctx.mpf(im)) <= 0.5 * 10.0**-dim
        approx = rs_general(pt, fx.expansion_N).value
        assert rel_digits(approx, R) >= fx.expansion_digits


def _top_coefficients(n, k):
    c = BiPoly.sigma() - HALF
    sign = (-1) ** n
    out = {k: BiPoly.const(i_power(k) * F(sign * comb(3 * n, k), 3**n * factorial(n)))}
    if n >= 1 and k >= 2:
        out[k - 2] = c * i_power(k - 1) * F(sign * comb(3 * n - 2, k - 2), 3 ** (n - 1) * factorial(n - 1))
    if n >= 2 and k >= 4:
        w = F(sign * comb(3 * n - 4, k - 4), 3 ** (n - 2) * factorial(n - 2))
        out[k - 4] = (c**2 * F(-1, 2) + F(3 * n - 1, 20)) * i_power(k) * w
    if n >= 2 and k >= 6:
        w = F(sign * comb(3 * n - 6, k - 6), 3 ** (n - 2) * factorial(n - 2))
        out[k - 6] = c * (c**2 * F(-(n - 2), 2) + F(9 * n * n - 20 * n + 9, 20)) * i_power(k - 1) * w
    if n >= 3 and k >= 8:
        w = F(sign * comb(3 * n - 8, k - 8), 3 ** (n - 3) * factorial(n - 3))
        bracket = (F((63 * n * n - 141 * n + 31) * (3 * n - 5), 5600)
                   - c**2 * F(9 * n * n - 28 * n + 23, 40) + c**4 * F(n - 3, 8))
        out[k - 8] = bracket * i_power(k) * w
    return out


def _xpoly(terms):
    x = BiPoly.x()
    out = BiPoly()
    for k, c in terms.items():
        out = out + x**k * c
    return out


def test_criterion_08_exact_coefficients(criterion):
    with criterion(8, "exact coefficient suite (lists, identities, leading terms, positivity)", 30):
        x, s = BiPoly.x(), BiPoly.sigma()
        i3 = GaussRational(0, F(1, 3))
        assert [p_poly(1, k) for k in range(4)] == [
            BiPoly.const(F(-1, 3)), -x * I, x**2 - (s - HALF) * I, x**3 * i3 + (s - HALF) * x]
        at_half = [{0: F(1, 18)}, {1: i3}, {2: F(-5, 6)}, {3: GaussRational(0, F(-10, 9))},
                   {4: F(5, 6), 0: F(1, 4)}, {5: i3, 1: GaussRational(0, HALF)}, {6: F(-1, 18), 2: F(-1, 4)}]
        at_one = [{0: F(1, 18)}, {1: i3}, {2: F(-5, 6), 0: GaussRational(0, F(1, 6))},
                  {3: GaussRational(0, F(-10, 9)), 1: F(-2, 3)}, {4: F(5, 6), 2: -I, 0: F(1, 8)},
                  {5: i3, 3: F(2, 3), 1: GaussRational(0, F(1, 4))},
                  {6: F(-1, 18), 4: GaussRational(0, F(1, 6)), 2: F(-1, 8), 0: GaussRational(0, F(1, 8))}]
        for k in range(7):
            assert p_poly(2, k).specialize(sigma=HALF) == _xpoly(at_half[k])
            assert p_poly(2, k).specialize(sigma=1) == _xpoly(at_one[k])
        assert p_poly(6, 18).specialize(sigma=HALF) == _xpoly(
            {18: F(-1, 524880), 14: F(-17, 38880), 10: F(-18889, 907200), 6: F(-367, 1920), 2: F(-5, 32)})

        for n in range(7):
            for k in range(3 * n + 1):
                p = p_poly(n, k)
                assert p.negate_x().reflect_sigma().conjugate() == p
                for j, want in _top_coefficients(n, k).items():
                    assert p.x_coeff(j) == want
            for m in range(3 * n // 2 + 1):
                q = s_poly(n, m)
                assert q - q.reflect_sigma() * (-1) ** m == BiPoly()

        for n in range(21):
            for k in range(3 * n + 1):
                scale = i_power(k) * (-1) ** n
                for _, c in p_poly(n, k).specialize(sigma=HALF).items():
                    q = c / scale
                    assert q.im == 0 and q.re > 0


def test_criterion_09_classical_coefficients(criterion):
    with criterion(9, "C_m(a) against the closed forms, m <= 3, ten values of a", 60):
        ctx = CFG.ctx
        tp = 2 * ctx.pi
        c_funcs = [c_classical(m, CFG) for m in range(4)]
        worst = ctx.mpf(0)
        for j in range(10):
            a = ctx.mpf(2 * j + 1) / 20
            psi = psi_derivatives(2 * a, 9, CFG)
            closed = [
                psi[0],
                -psi[3] / 3 * tp ** ctx.mpf(-1.5),
                psi[6] / 18 * tp**-3 + psi[2] / 4 / tp,
                -psi[9] / 162 * tp ** ctx.mpf(-4.5) - psi[5] * 2 / 15 * tp ** ctx.mpf(-2.5)
                - psi[1] / 8 * tp ** ctx.mpf(-0.5),
            ]
            for m in range(4):
                worst = max(worst, abs(c_funcs[m](a) - closed[m]))
        assert worst <= ctx.mpf(10) ** -20


def test_criterion_10_a_k_two_routes(criterion):
    with criterion(10, "a_k from Bell polynomials equals the recursion, k <= 12", 30):
        for k in range(13):
            assert a_k_bell(k) == a_k_recursive(k)
        ctx = CFG.ctx
        s = ctx.mpc(0.5, 100)
        sigma, t = s.real, s.imag
        # the three-term recursion run numerically from a_0 = 1
        seq = [ctx.mpc(0), ctx.mpc(0), ctx.mpc(1)]
        for k in range(12):
            nxt = (-(k + 1 - sigma) * seq[-1] + ctx.mpc(0, 1) * seq[-3]) / ((k + 1) * ctx.sqrt(t))
            seq.append(nxt)
        for k in range(13):
            assert abs(a_k_eval(k, s, CFG) - seq[k + 2]) <= ctx.mpf(10) ** -30


def test_criterion_11_mordell_identities(criterion):
    with criterion(11, "Mordell integral shifts, symmetry and rational closed forms", 120):
        cfg = CFG
        ctx = cfg.ctx
        target = 1e-25
        tol = 10 * ctx.mpf(target)

        def rel(a, b):
            return abs(a - b) / max(1, abs(b))

        i = ctx.mpc(0, 1)
        for tau in ("0.7", "1", "2.5"):
            tau = ctx.mpf(tau)
            for u in (0, "0.2", ctx.mpc("0.5", "0.1"), "1.7", "3.2"):
                u = ctx.mpc(u)
                up = lambda v: upsilon(v, tau, 0, cfg, target, reduce=False)
                base = up(u)
                assert rel(up(u + 1), base + ctx.exp(ctx.pi * i * (u * u / tau + ctx.mpf(3) / 4)) / ctx.sqrt(tau)) < tol
                assert rel(up(u + tau), ctx.exp(ctx.pi * i * (tau + 2 * u)) * (base - 1)) < tol
                s = sum(ctx.exp(ctx.pi * i * (j + u) ** 2 / tau) for j in range(2))
                assert rel(up(u + 2), base + ctx.expjpi(ctx.mpf(3) / 4) * s / ctx.sqrt(tau)) < tol
                s = sum(ctx.exp(-ctx.pi * i * (j * tau + u) ** 2 / tau) for j in range(2))
                want = ctx.exp(ctx.pi * i * 2 * (2 * tau + 2 * u)) * base - ctx.exp(ctx.pi * i * (2 * tau + u) ** 2 / tau) * s
                assert rel(up(u + 2 * tau), want) < tol

        for u, tau in (("0.4", "2"), ("0.1", "3"), ("0.9", "1.7")):
            u, tau = ctx.mpf(u), ctx.mpf(tau)
            small = g_derivatives(u, 1 / tau, 4, cfg, "quadrature", target)
            big = g_derivatives(u, tau, 4, cfg, "quadrature", target)
            for a, b in zip(small, big):
                assert rel(a, ctx.conj(b)) < tol

        for m, n in ((1, 1), (2, 1), (3, 1), (1, 2), (5, 3)):
            tau = ctx.mpf(m) / n
            for u in ("0.13", "0.37", "0.62", "0.88", ctx.mpc("0.3", "0.05")):
                closed = g_rational_derivatives(ctx.mpc(u), m, n, 4, cfg)
                quad = g_derivatives(ctx.mpc(u), tau, 4, cfg, "quadrature", target)
                for a, b in zip(closed, quad):
                    assert rel(a, b) < tol


def test_criterion_12_decay_rates(criterion):
    with criterion(12, "log-log decay slopes for theta, the bare sums and the expansion", 300):
        for N in range(1, 5):
            assert theta_decay(N, prec=CFG).slope == pytest.approx(-N, abs=0.3)
        assert afe_decay(prec=CFG).slope == pytest.approx(-0.25, abs=0.1)
        for N in (1, 2):
            assert order_decay(N, prec=CFG).slope == pytest.approx(-N / 2 - 0.25, abs=0.2)


def test_criterion_13_zeros_on_diagonals(criterion):
    with criterion(13, "roots of P_{6,18}(x, 1/2) lie on the diagonals", 5):
        mp = mpmath.mp.clone()
        mp.dps = 50
        poly = p_poly(6, 18).specialize(sigma=HALF)
        coeffs = [poly.coeff(k, 0).re for k in range(18, -1, -1)]
        roots = mp.polyroots([mp.mpf(c.numerator) / c.denominator for c in coeffs], maxsteps=300, extraprec=300)
        assert len(roots) == 18
        for r in roots:
            assert abs(abs(r.real) - abs(r.imag)) <= 1e-10
