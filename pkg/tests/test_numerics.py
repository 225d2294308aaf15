import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circsym import (
    DomainError,
    NotPsdError,
    QuadratureRule,
    RngStream,
    bessel_i0_scaled,
    gauss_legendre,
    psd_factor,
)
from circsym.numerics import rng_uniform_angles

from oracles import i0e_reference


class TestBesselI0Scaled:
    def test_zero(self):
        assert bessel_i0_scaled(0.0) == 1.0

    def test_series_value(self):
        # brute-force series at t=2, summed to machine convergence
        t = 2.0
        term, total = 1.0, 1.0
        for k in range(1, 60):
            term *= (t * t / 4.0) / (k * k)
            total += term
        assert bessel_i0_scaled(t) == pytest.approx(np.exp(-t) * total, abs=1e-12)

    def test_large_argument_no_overflow(self):
        # asymptotic series sum_k ((2k-1)!!)^2 / (k! (8t)^k) over sqrt(2 pi t)
        t = 700.0
        term, total = 1.0, 1.0
        for k in range(1, 6):
            term *= (2 * k - 1) ** 2 / (8.0 * t * k)
            total += term
        v = bessel_i0_scaled(t)
        assert np.isfinite(v)
        assert v == pytest.approx(total / np.sqrt(2.0 * np.pi * t), rel=1e-6)

    def test_against_reference_grid(self):
        # dense log grid spanning both branches and the crossover
        t = np.concatenate(
            [
                [0.0, 1e-12, 1e-8],
                np.logspace(-4, 4, 120),
                np.linspace(14.0, 16.0, 41),
            ]
        )
        got = bessel_i0_scaled(t)
        want = i0e_reference(t)
        assert np.max(np.abs(got - want)) <= 1e-12

    def test_monotone_and_bounded(self):
        t = np.linspace(0.0, 1e4, 20001)
        v = bessel_i0_scaled(t)
        assert np.all(v > 0.0)
        assert np.all(v <= 1.0)
        assert np.all(np.diff(v) <= 1e-15)

    @given(st.floats(min_value=0.0, max_value=1e6, allow_nan=False))
    @settings(deadline=None)
    def test_range_property(self, t):
        v = bessel_i0_scaled(t)
        assert 0.0 < v <= 1.0

    def test_scalar_in_float_out(self):
        assert isinstance(bessel_i0_scaled(1.0), float)
        out = bessel_i0_scaled(np.array([1.0, 2.0]))
        assert out.shape == (2,)

    @pytest.mark.parametrize("bad", [-1.0, np.nan, np.inf, -1e-9])
    def test_rejects_bad_input(self, bad):
        with pytest.raises(DomainError):
            bessel_i0_scaled(bad)
        with pytest.raises(DomainError):
            bessel_i0_scaled(np.array([0.5, bad]))


class TestGaussLegendre:
    def test_order_one_is_midpoint(self):
        rule = gauss_legendre(1)
        assert rule.nodes == pytest.approx([0.0])
        assert rule.weights == pytest.approx([2.0])

    def test_cos_over_half_period(self):
        t, w = gauss_legendre(5).mapped(0.0, np.pi)
        assert float(w @ np.cos(t)) == pytest.approx(0.0, abs=1e-12)

    def test_circular_exponential_identity(self):
        # int_0^{2pi} e^{cos t} dt = 2 pi I0(1)
        t, w = gauss_legendre(64).mapped(0.0, 2.0 * np.pi)
        got = float(w @ np.exp(np.cos(t)))
        want = 2.0 * np.pi * float(i0e_reference(1.0)) * np.e
        assert got == pytest.approx(want, abs=1e-10)

    @pytest.mark.parametrize("order", range(1, 21))
    def test_polynomial_exactness(self, order):
        rule = gauss_legendre(order)
        x = np.asarray(rule.nodes)
        w = np.asarray(rule.weights)
        for j in range(2 * order):
            exact = 0.0 if j % 2 else 2.0 / (j + 1)
            assert float(w @ x**j) == pytest.approx(exact, abs=1e-10)

    def test_rule_invariants(self):
        rule = gauss_legendre(32)
        assert rule.order == 32
        assert np.all(np.diff(rule.nodes) > 0)
        assert np.all(np.asarray(rule.weights) > 0)
        assert float(np.sum(rule.weights)) == pytest.approx(2.0, abs=1e-12)

    def test_cached_and_readonly(self):
        a = gauss_legendre(16)
        b = gauss_legendre(16)
        assert a is b
        with pytest.raises(ValueError):
            np.asarray(a.nodes)[0] = 0.0

    def test_mapped_interval(self):
        t, w = gauss_legendre(8).mapped(1.0, 3.0)
        assert float(np.sum(w)) == pytest.approx(2.0, abs=1e-12)
        assert float(w @ t**2) == pytest.approx((27.0 - 1.0) / 3.0, abs=1e-10)

    @pytest.mark.parametrize("bad", [0, -1])
    def test_rejects_bad_order(self, bad):
        with pytest.raises(DomainError):
            gauss_legendre(bad)


class TestPsdFactor:
    def test_identity(self):
        fac = psd_factor(np.eye(3))
        assert fac.clipped == 0
        np.testing.assert_allclose(fac.factor @ fac.factor.T, np.eye(3), atol=1e-12)

    def test_rank_one_all_ones(self):
        m = np.ones((3, 3))
        fac = psd_factor(m)
        np.testing.assert_allclose(fac.factor @ fac.factor.T, m, atol=1e-10)

    def test_indefinite_rejected(self):
        with pytest.raises(NotPsdError) as err:
            psd_factor(np.diag([1.0, -1.0]))
        assert err.value.eigenvalue == pytest.approx(-1.0, abs=1e-12)

    def test_clip_within_tolerance(self):
        m = np.diag([1.0, -1e-12])
        fac = psd_factor(m, tol=1e-10)
        assert fac.clipped == 1
        np.testing.assert_allclose(
            fac.factor @ fac.factor.T, np.diag([1.0, 0.0]), atol=1e-12
        )

    def test_infinite_tolerance_projects(self):
        m = np.diag([2.0, -1.0])
        fac = psd_factor(m, tol=np.inf)
        assert fac.clipped == 1
        assert fac.min_eigenvalue == pytest.approx(-1.0)
        np.testing.assert_allclose(
            fac.factor @ fac.factor.T, np.diag([2.0, 0.0]), atol=1e-12
        )

    @given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=2**32))
    @settings(deadline=None, max_examples=40)
    def test_random_psd_roundtrip(self, dim, seed):
        b = np.random.default_rng(seed).standard_normal((dim, dim))
        m = b @ b.T
        fac = psd_factor(m)
        err = np.max(np.abs(fac.factor @ fac.factor.T - m))
        assert err <= 1e-8 * max(1.0, np.max(np.abs(m)))

    def test_rejects_asymmetric(self):
        with pytest.raises(DomainError):
            psd_factor(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(DomainError):
            psd_factor(np.ones((2, 3)))

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            psd_factor(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestRngStream:
    def test_reproducible(self):
        a = RngStream(7, 3).generator().standard_normal(100)
        b = RngStream(7, 3).generator().standard_normal(100)
        np.testing.assert_array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = RngStream(7, 3).generator().standard_normal(100)
        b = RngStream(7, 4).generator().standard_normal(100)
        assert not np.array_equal(a, b)

    def test_child_deterministic(self):
        s = RngStream(1, 0)
        assert s.child(5) == s.child(5)
        assert s.child(5) != s.child(6)
        assert s.child(5).seed == s.seed

    def test_as_seed_stable(self):
        s = RngStream(11, 2)
        assert s.as_seed() == s.as_seed()
        assert s.as_seed() != RngStream(11, 3).as_seed()
        assert 0 <= s.as_seed() < 2**64

    def test_stream_decorrelation(self):
        base = RngStream(99, 0)
        x = base.child(0).generator().standard_normal(100_000)
        y = base.child(1).generator().standard_normal(100_000)
        r = np.corrcoef(x, y)[0, 1]
        assert abs(r) < 0.01

    def test_rejects_non_integer(self):
        with pytest.raises(DomainError):
            RngStream(1.5, 0)
        with pytest.raises(DomainError):
            RngStream(1, 0).child(-1)


class TestRngUniformAngles:
    def test_empty(self):
        assert rng_uniform_angles(RngStream(0, 0), 0).shape == (0,)

    def test_deterministic(self):
        a = rng_uniform_angles(RngStream(5, 1), 16)
        b = rng_uniform_angles(RngStream(5, 1), 16)
        np.testing.assert_array_equal(a, b)

    def test_range_and_moment(self):
        n = 100_000
        angles = rng_uniform_angles(RngStream(2, 0), n)
        assert np.all(angles >= -np.pi)
        assert np.all(angles < np.pi)
        assert abs(np.mean(np.cos(angles))) < 3.0 * np.sqrt(0.5 / n)


def test_quadrature_rule_type():
    rule = gauss_legendre(4)
    assert isinstance(rule, QuadratureRule)
