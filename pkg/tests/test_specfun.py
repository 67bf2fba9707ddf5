import math

import mpmath
import pytest

from numeric_core import DomainError, SectorError
from specfun import (FoxIParams, WrightParams, asymptotic_accuracy_map, asymptotic_sector, fox_I, fox_I_asymptotic,
                     fox_I_fast, is_resonant, pole_separation, small_z_exponent, wright_bessel)
from specfun.wright import cancellation_bits


def relative(a, b):
    return abs(a - b) / abs(b)


class TestWrightBessel:

    @pytest.mark.parametrize("a1", [0.5, 1, 2.75])
    def test_origin(self, ctx, a1):
        with ctx.workprec():
            assert relative(wright_bessel(WrightParams(a1, 1.3), 0, ctx), mpmath.rgamma(a1)) <= ctx.rel_tol

    def test_bessel_j0(self, ctx256):
        with ctx256.workprec():
            value = wright_bessel(WrightParams(1, 1), 1, ctx256)
            assert abs(value - mpmath.besselj(0, 2)) <= mpmath.mpf("1e-20")
        assert mpmath.nstr(value.real, 11) == "0.22389077914"

    def test_bessel_j1(self, ctx):
        with ctx.workprec():
            value = wright_bessel(WrightParams(2, 1), 4, ctx)
            with mpmath.workprec(2 * ctx.mantissa_bits):
                oracle = mpmath.fsum((-4) ** j / (mpmath.factorial(j) * mpmath.factorial(j + 1)) for j in range(200))
            assert relative(value, oracle) <= 10 * ctx.rel_tol
            assert relative(value, mpmath.besselj(1, 4) / 2) <= 10 * ctx.rel_tol

    def test_cancellation_is_compensated(self, ctx):
        # J_0(40) from an alternating series whose largest term is about e^40
        assert cancellation_bits(WrightParams(1, 1), 400, ctx) > 100
        with ctx.workprec():
            value = wright_bessel(WrightParams(1, 1), 400, ctx)
            assert relative(value, mpmath.besselj(0, 40)) <= 10 * ctx.rel_tol

    def test_modified_bessel_on_negative_axis(self, ctx):
        with ctx.workprec():
            value = wright_bessel(WrightParams(1, 1), -9, ctx)
            assert relative(value, mpmath.besseli(0, 6)) <= 10 * ctx.rel_tol

    @pytest.mark.parametrize("x", [mpmath.mpc(1.2, 0.8), mpmath.mpc(-3, 2.5), mpmath.mpc(15, -4)])
    def test_conjugation(self, ctx, x):
        p = WrightParams(mpmath.mpf(0.7), 1 / mpmath.sqrt(2))
        with ctx.workprec():
            value = wright_bessel(p, x, ctx)
            mirrored = wright_bessel(p, mpmath.conj(x), ctx)
            assert abs(mirrored - mpmath.conj(value)) <= 10 * ctx.rel_tol * max(1, abs(value))

    def test_rejects_nonpositive_a2(self):
        with pytest.raises(DomainError):
            WrightParams(1, 0)


class TestFoxI:

    def test_kind_one_representations_agree(self, ctx):
        p = FoxIParams(mpmath.sqrt(2), 0.1)
        z = 1.3 * mpmath.expj(0.2)
        with ctx.workprec():
            loop = fox_I(1, p, z, ctx)
            series = fox_I(1, p, z, ctx, method="wright")
            assert relative(loop, series) <= 100 * ctx.rel_tol

    def test_kind_three_is_dual_kind_one(self, ctx):
        p = FoxIParams(mpmath.sqrt(2), 0.1)
        z = 1.3 * mpmath.expj(0.2)
        with ctx.workprec():
            third = fox_I(3, p, z, ctx)
            first = fox_I(1, p.dual(), z, ctx)
            assert relative(third, first) <= 100 * ctx.rel_tol

    def test_kind_two_exponential_decay(self, ctx):
        theta, a = 2, mpmath.mpf(0.3)
        with ctx.workprec():
            value = fox_I(2, FoxIParams(theta, a), 40, ctx)
            normalized = theta ** a / mpmath.sqrt(2 * mpmath.pi * (theta + 1)) * value * mpmath.exp(40)
        assert abs(normalized - 1) <= mpmath.mpf(5) / 40

    def test_split_relation(self, ctx):
        theta, a = mpmath.mpf(1.5), mpmath.mpf(0.2)
        p = FoxIParams(theta, a)
        z = mpmath.mpf(0.7)
        with ctx.workprec():
            rotation = mpmath.expjpi(1 / (theta + 1))
            lhs = (mpmath.expjpi(-(a - mpmath.mpf(0.5))) * fox_I(2, p, z * rotation, ctx)
                   + mpmath.expjpi(a - mpmath.mpf(0.5)) * fox_I(2, p, z / rotation, ctx))
            rhs = 2 * mpmath.pi * fox_I(1, p, z, ctx)
            assert abs(lhs - rhs) <= 100 * ctx.rel_tol * max(1, abs(rhs))

    @pytest.mark.parametrize("theta", [mpmath.sqrt(2), mpmath.mpf(1.5), mpmath.mpf(3)])
    @pytest.mark.parametrize("a", [mpmath.mpf(-0.2), mpmath.mpf(0.1), mpmath.mpf(0.35)])
    @pytest.mark.parametrize("kind", [1, 3])
    def test_split_relation_grid(self, ctx, theta, a, kind):
        # kind 3 is the same relation at the dual parameters
        p = FoxIParams(theta, a) if kind == 1 else FoxIParams(theta, a).dual()
        half = mpmath.mpf(0.5)
        with ctx.workprec():
            rotation = mpmath.expjpi(1 / (p.theta + 1))
            opening = mpmath.pi * p.theta / (p.theta + 1)
            for radius in (mpmath.mpf(0.3), 1, 3):
                for step in range(-7, 8, 2):
                    z = radius * mpmath.expj(opening * step / 8)
                    upper = mpmath.expjpi(-(p.a - half)) * fox_I_fast(2, p, z * rotation, ctx)
                    lower = mpmath.expjpi(p.a - half) * fox_I_fast(2, p, z / rotation, ctx)
                    rhs = 2 * mpmath.pi * fox_I_fast(kind, FoxIParams(theta, a), z, ctx)
                    scale = max(1, abs(upper), abs(lower), abs(rhs))
                    assert abs(upper + lower - rhs) <= 10 * ctx.rel_tol * scale, (radius, step)

    @pytest.mark.parametrize("z", [mpmath.mpc(0.7, 0.4), mpmath.mpc(2.5, -1.1), mpmath.mpc(-0.3, 0.9)])
    def test_kind_two_conjugation(self, ctx, z):
        p = FoxIParams(mpmath.sqrt(2), 0.3)
        with ctx.workprec():
            above = fox_I(2, p, z, ctx)
            below = fox_I(2, p, mpmath.conj(z), ctx)
            assert abs(below - mpmath.conj(above)) <= 100 * ctx.rel_tol * abs(above)

    def test_residue_series_off_resonance(self, ctx):
        p = FoxIParams(mpmath.sqrt(2), 0.3)
        assert not is_resonant(p)
        z = 0.9 * mpmath.expj(-0.4)
        with ctx.workprec():
            assert relative(fox_I(2, p, z, ctx, method="residue"), fox_I(2, p, z, ctx)) <= 100 * ctx.rel_tol
            assert relative(fox_I_fast(2, p, z, ctx), fox_I(2, p, z, ctx)) <= 100 * ctx.rel_tol

    def test_resonant_parameters_refuse_residues(self, ctx):
        p = FoxIParams(1, 0.25)
        assert pole_separation(p) < 1e-12
        assert is_resonant(p)
        with pytest.raises(DomainError):
            fox_I(2, p, 0.5, ctx, method="residue")

    @pytest.mark.parametrize("z", [0, -1, mpmath.mpf(-0.5)])
    def test_cut(self, ctx, z):
        with pytest.raises(DomainError):
            fox_I(1, FoxIParams(1, 0), z, ctx)

    @pytest.mark.parametrize("kind, method", [(2, "wright"), (1, "residue"), (4, "mellin_barnes"),
                                              (1, "quadrature")])
    def test_unsupported_requests(self, ctx, kind, method):
        with pytest.raises(DomainError):
            fox_I(kind, FoxIParams(1, 0), 1, ctx, method=method)


class TestAsymptotics:

    def test_kind_two_leading_term(self, ctx):
        with ctx.workprec():
            value = fox_I_asymptotic(2, FoxIParams(1, 0), 100, ctx)
            assert relative(value, mpmath.sqrt(4 * mpmath.pi) * mpmath.exp(-100)) <= ctx.rel_tol

    def test_sector(self, ctx):
        sectors = asymptotic_sector(1, 2)
        assert len(sectors) == 2
        assert float(sectors[0][1]) == pytest.approx(2 * math.pi / 3)
        with pytest.raises(SectorError):
            fox_I_asymptotic(1, FoxIParams(2, 0), 80, ctx)

    def test_accuracy_map_at_large_radius(self, ctx):
        p = FoxIParams(1, 0.2)
        angles = [-2.0, -1.0, -0.3, 0.3, 1.0, 2.0]
        with ctx.workprec():
            rows = asymptotic_accuracy_map(2, p, 60, angles, ctx)
        assert len(rows) == len(angles)
        assert all(error <= mpmath.mpf(10) / 60 for _, error in rows)


def test_small_z_exponent_of_power():
    assert small_z_exponent(lambda z: 3 * z ** 2.5, 0.4, [1e-4, 1e-3, 1e-2]) == pytest.approx(2.5, abs=1e-9)


def test_params_validation():
    with pytest.raises(DomainError):
        FoxIParams(0, 0.1)
    assert float(FoxIParams(2, 0.1).dual().theta) == pytest.approx(0.5)
