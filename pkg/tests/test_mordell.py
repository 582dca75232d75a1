import pytest

from rsgen.mordell import (NearSingularityError, g_derivatives, g_rational, g_rational_derivatives, g_value,
                           psi_classical, psi_derivatives, theta_k, upsilon, upsilon_derivatives, upsilon_reduced)
from rsgen.numkernel import DomainError, QuadratureSpec, integrate_real_line
from rsgen.precision import PrecisionConfig

CFG = PrecisionConfig(30)
ctx = CFG.ctx
TOL = ctx.mpf(10) ** -26  # about 10 * target relative error at 30 digits


def rel(a, b):
    return abs(a - b) / max(1, abs(b))


def psi_oracle(u):
    return ctx.cos(ctx.pi * (u * u / 2 - u - ctx.mpf(1) / 8)) / ctx.cos(ctx.pi * u)


def g2_oracle(u):
    th = theta_k(2, u, ctx)
    i = ctx.mpc(0, 1)
    r4 = ctx.root(2, 4)
    bracket = r4 * ctx.exp(-ctx.pi * i * th) - ctx.exp(ctx.pi * i * th) * (1 + i * ctx.exp(ctx.sqrt(2) * ctx.pi * i * u)) / r4
    return -bracket / (2 * i * ctx.sin(ctx.sqrt(2) * ctx.pi * u))


def g3_oracle(u):
    th = theta_k(3, u, ctx)
    i = ctx.mpc(0, 1)
    r4 = ctx.root(3, 4)
    s3 = ctx.sqrt(3)
    tail = 1 + ctx.expjpi(2 * u / s3 + ctx.mpf(1) / 3) + ctx.expjpi(4 * u / s3 + ctx.mpf(4) / 3)
    bracket = r4 * ctx.exp(-ctx.pi * i * th) - ctx.exp(ctx.pi * i * th) * tail / r4
    return -bracket / (2 * i * ctx.cos(s3 * ctx.pi * u))


class TestPsi:
    def test_values(self):
        assert rel(psi_classical(0, 0, CFG), ctx.cos(ctx.pi / 8)) < TOL
        assert rel(g_value(1, 1, 0, CFG), ctx.cos(3 * ctx.pi / 8)) < TOL
        assert rel(g_value(0, 1, 0, CFG), ctx.cos(ctx.pi / 8)) < TOL

    @pytest.mark.parametrize("u", ["0.6", "0.2", "1.3", "-0.7"])
    def test_derivatives_against_numeric_diff(self, u):
        u = ctx.mpf(u)
        got = psi_derivatives(u, 6, CFG)
        for k in range(7):
            assert rel(got[k], ctx.diff(psi_oracle, u, k)) < ctx.mpf(10) ** -20

    def test_removable_points_continuous(self):
        # Psi is entire: values at 1/2 agree with nearby points along the Taylor series
        at = psi_derivatives(ctx.mpf(1) / 2, 8, CFG)
        h = ctx.mpf("1e-3")
        near = psi_derivatives(ctx.mpf(1) / 2 + h, 0, CFG)[0]
        taylor = sum(at[k] * h**k / ctx.factorial(k) for k in range(9))
        assert rel(near, taylor) < ctx.mpf(10) ** -25
        assert rel(psi_derivatives(ctx.mpf("0.4999"), 0, CFG)[0], psi_oracle(ctx.mpf("0.4999"))) < ctx.mpf(10) ** -20


class TestShiftRelations:
    TAUS = ["0.7", "1", "2.5"]
    US = [0, "0.2", ctx.mpc("0.5", "0.1"), "1.7", "3.2"]

    @pytest.mark.parametrize("tau", TAUS)
    def test_unit_and_tau_shift(self, tau):
        tau = ctx.mpf(tau)
        i = ctx.mpc(0, 1)
        for u in self.US:
            u = ctx.mpc(u)
            base = upsilon(u, tau, 0, CFG, reduce=False)
            # one step in each direction
            one = upsilon(u + 1, tau, 0, CFG, reduce=False)
            assert rel(one, base + ctx.exp(ctx.pi * i * (u * u / tau + ctx.mpf(3) / 4)) / ctx.sqrt(tau)) < TOL
            step = upsilon(u + tau, tau, 0, CFG, reduce=False)
            assert rel(step, ctx.exp(ctx.pi * i * (tau + 2 * u)) * (base - 1)) < TOL
            # m and n steps at once
            m = n = 2
            many = upsilon(u + m, tau, 0, CFG, reduce=False)
            s = sum(ctx.exp(ctx.pi * i * (j + u) ** 2 / tau) for j in range(m))
            assert rel(many, base + ctx.expjpi(ctx.mpf(3) / 4) * s / ctx.sqrt(tau)) < TOL
            jumps = upsilon(u + n * tau, tau, 0, CFG, reduce=False)
            s = sum(ctx.exp(-ctx.pi * i * (j * tau + u) ** 2 / tau) for j in range(n))
            want = ctx.exp(ctx.pi * i * n * (n * tau + 2 * u)) * base - ctx.exp(ctx.pi * i * (n * tau + u) ** 2 / tau) * s
            assert rel(jumps, want) < TOL

    def test_reduction_matches_direct(self):
        for u, tau in [("5.2", "1"), (ctx.mpf("0.2") + 4, "2"), ("-2.3", "1.5")]:
            u, tau = ctx.mpc(u), ctx.mpf(tau)
            direct = upsilon_derivatives(u, tau, 3, CFG, reduce=False)
            reduced = upsilon_derivatives(u, tau, 3, CFG)
            for a, b in zip(reduced, direct):
                assert rel(a, b) < TOL

    def test_explicit_shifts(self):
        u, tau = ctx.mpc("5.2"), ctx.mpf(1)
        ref = upsilon_reduced(u, tau, 2, CFG, shifts=(0, 0))
        for shifts in [(0, 5), (0, 6), (2, 3), (-1, 6)]:
            got = upsilon_reduced(u, tau, 2, CFG, shifts=shifts)
            for a, b in zip(got, ref):
                assert rel(a, b) < TOL

    def test_identity_when_already_reduced(self):
        u, tau = ctx.mpc("0.4"), ctx.mpf(1)
        assert upsilon_reduced(u, tau, 1, CFG) == upsilon_reduced(u, tau, 1, CFG, shifts=(0, 0))

    def test_domain(self):
        with pytest.raises(DomainError):
            upsilon(0, ctx.mpc(-1, 1), 0, CFG)
        with pytest.raises(DomainError):
            g_value(0, 0, 0, CFG)


class TestG:
    @pytest.mark.parametrize("k", range(5))
    def test_symmetry(self, k):
        for u, tau in [("0.4", "2"), ("0.1", "3"), ("0.9", "1.7")]:
            u, tau = ctx.mpf(u), ctx.mpf(tau)
            small = g_derivatives(u, 1 / tau, k, CFG, method="quadrature")[k]
            big = g_derivatives(u, tau, k, CFG, method="quadrature")[k]
            assert rel(small, ctx.conj(big)) < TOL

    def test_auto_uses_symmetry_consistently(self):
        u, tau = ctx.mpf("0.4"), ctx.mpf("0.5")
        a = g_derivatives(u, tau, 3, CFG)
        b = g_derivatives(u, tau, 3, CFG, method="quadrature")
        for x, y in zip(a, b):
            assert rel(x, y) < TOL

    def test_tau_one_is_psi(self):
        for u in ["0", "0.3", "0.7"]:
            u = ctx.mpf(u)
            q = g_derivatives(u, 1, 4, CFG, method="quadrature")
            p = psi_derivatives(u, 4, CFG)
            for a, b in zip(q, p):
                assert rel(a, b) < TOL

    def test_closed_forms_two_and_three(self):
        for u in ["0.17", "0.41", "0.9"]:
            u = ctx.mpf(u)
            assert rel(g_rational(u, 2, 1, 0, CFG), g2_oracle(u)) < TOL
            assert rel(g_rational(u, 3, 1, 0, CFG), g3_oracle(u)) < TOL
            assert rel(g_value(u, 2, 0, CFG, method="quadrature"), g2_oracle(u)) < TOL

    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (3, 1), (1, 2), (5, 3)])
    def test_rational_against_quadrature(self, m, n):
        tau = ctx.mpf(m) / n
        for u in ["0.13", "0.37", "0.62", "0.88", ctx.mpc("0.3", "0.05")]:
            u = ctx.mpc(u)
            closed = g_rational_derivatives(u, m, n, 4, CFG)
            quad = g_derivatives(u, tau, 4, CFG, method="quadrature")
            for a, b in zip(closed, quad):
                assert rel(a, b) < ctx.mpf(10) ** -24

    def test_near_singularity(self):
        with pytest.raises(NearSingularityError):
            g_rational(ctx.mpf(1) / 2, 1, 1, 0, CFG)
        # sqrt(2) u is an integer at u = 1/sqrt(2)
        with pytest.raises(NearSingularityError):
            g_rational(1 / ctx.sqrt(2) + ctx.mpf("1e-5"), 2, 1, 0, CFG)

    def test_growth_is_bounded(self):
        for lam in ["0.25", "0.5", "1", "2", "4"]:
            lam = ctx.mpf(lam)
            for a, b in [(0, 0), (1, 1), ("0.3", "0.8")]:
                u = ctx.mpf(a) / lam + ctx.mpf(b) * lam
                derivs = g_derivatives(u, lam * lam, 6, CFG)
                for k, v in enumerate(derivs):
                    scale = lam ** (k + ctx.mpf(1) / 2) + lam ** (-k - ctx.mpf(1) / 2)
                    assert abs(v) / scale < 1e3

    def test_step_halving_invariance(self):
        u, tau = ctx.mpc("0.3"), ctx.mpc("1.4")
        ref = upsilon(u, tau, 0, CFG)
        eps = ctx.expjpi(ctx.mpf(3) / 4)
        i = ctx.mpc(0, 1)
        f = lambda x: ctx.exp(-ctx.pi * tau * x * x + ctx.pi * i * eps * (2 * u - tau) * x) / (ctx.exp(2 * ctx.pi * i * eps * x) + 1)
        front = -eps * ctx.exp(ctx.pi * i * (u - tau / 4))
        for step in (0.2, 0.1):
            val = front * integrate_real_line(f, QuadratureSpec(step=step, half_width=6, target_rel_err=1e-28), CFG)
            assert rel(val, ref) < TOL
