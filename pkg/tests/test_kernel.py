import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circsym import (
    GAUSSIAN,
    STABLE,
    DomainError,
    KernelSpec,
    SummaryError,
    angular_integral,
    psi,
)
from circsym.kernel import angular_integral_quad

from oracles import i0e_reference


def valid_pair(draw_like):
    """Map four unit floats to a valid (nj, nk, c, s) tuple."""
    a, b, t, phase = draw_like
    nj = 4.0 * a + 1e-3
    nk = 4.0 * b + 1e-3
    r = t * np.sqrt(nj * nk)
    return nj, nk, r * np.cos(2 * np.pi * phase), r * np.sin(2 * np.pi * phase)


unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
pair_strategy = st.tuples(unit, unit, unit, unit).map(valid_pair)


class TestKernelSpec:
    def test_constructors(self):
        k = KernelSpec.gaussian(0.5)
        assert (k.family, k.lam, k.mu) == (GAUSSIAN, 0.5, 2.0)
        k = KernelSpec.stable(2.0, 1.0)
        assert (k.family, k.lam, k.mu) == (STABLE, 2.0, 1.0)

    @pytest.mark.parametrize("lam", [0.0, -1.0, np.nan, np.inf])
    def test_rejects_bad_lam(self, lam):
        with pytest.raises(DomainError):
            KernelSpec.gaussian(lam)

    @pytest.mark.parametrize("mu", [0.0, -0.5, 2.5, np.nan])
    def test_rejects_bad_mu(self, mu):
        with pytest.raises(DomainError):
            KernelSpec.stable(1.0, mu)

    def test_family_mu_consistency(self):
        with pytest.raises(DomainError):
            KernelSpec(family=STABLE, lam=1.0, mu=2.0)
        with pytest.raises(DomainError):
            KernelSpec(family=GAUSSIAN, lam=1.0, mu=1.0)
        with pytest.raises(DomainError):
            KernelSpec(family="cauchy", lam=1.0)


class TestPsi:
    def test_hand_values(self):
        assert psi(KernelSpec.gaussian(1.0), 0.0) == 1.0
        assert psi(KernelSpec.gaussian(1.0), 1.0) == pytest.approx(np.exp(-1.0))
        assert psi(KernelSpec.stable(2.0, 1.0), 3.0) == pytest.approx(np.exp(-6.0))

    def test_vectorized(self):
        xi = np.array([0.0, 0.5, 2.0])
        out = psi(KernelSpec.gaussian(0.3), xi)
        np.testing.assert_allclose(out, np.exp(-0.3 * xi**2))

    @given(
        st.floats(min_value=0.01, max_value=10.0),
        st.floats(min_value=0.1, max_value=2.0),
        st.floats(min_value=0.0, max_value=50.0),
    )
    @settings(deadline=None)
    def test_range_and_monotonicity(self, lam, mu, xi):
        k = KernelSpec.gaussian(lam) if mu == 2.0 else KernelSpec.stable(lam, mu)
        v = psi(k, xi)
        assert 0.0 <= v <= 1.0
        assert psi(k, xi + 0.1) <= v

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            psi(KernelSpec.gaussian(1.0), -0.1)
        with pytest.raises(DomainError):
            psi(KernelSpec.gaussian(1.0), np.array([0.1, np.nan]))


def quad_oracle(k, nj, nk, c, s, m=200_000):
    """Midpoint-rule evaluation of the angular integral, integrand as written."""
    theta = -np.pi + (np.arange(m) + 0.5) * (2.0 * np.pi / m)
    dsq = nj + nk - 2.0 * (c * np.cos(theta) + s * np.sin(theta))
    xi = np.sqrt(np.maximum(dsq, 0.0))
    return float(np.sum(np.exp(-k.lam * xi**k.mu))) * (2.0 * np.pi / m)


class TestAngularIntegral:
    def test_degenerate_zero(self):
        k = KernelSpec.gaussian(1.0)
        assert angular_integral(k, 0.0, 0.0, 0.0, 0.0) == pytest.approx(2.0 * np.pi)

    def test_equal_unit_vectors(self):
        # W_j = W_k with norm 1: integrand exp(-(2 - 2 cos theta))
        k = KernelSpec.gaussian(1.0)
        got = angular_integral(k, 1.0, 1.0, 1.0, 0.0)
        want = 2.0 * np.pi * np.exp(-2.0) * np.exp(2.0) * i0e_reference(2.0)
        assert got == pytest.approx(want, rel=1e-12)
        assert got == pytest.approx(quad_oracle(k, 1.0, 1.0, 1.0, 0.0), rel=1e-10)

    @given(pair_strategy, st.sampled_from([0.01, 0.1, 1.0]))
    @settings(deadline=None, max_examples=150)
    def test_gaussian_closed_form_matches_quadrature(self, pair, lam):
        nj, nk, c, s = pair
        k = KernelSpec.gaussian(lam)
        closed = angular_integral(k, nj, nk, c, s)
        quad = angular_integral_quad(k, nj, nk, c, s)
        assert closed == pytest.approx(quad, rel=1e-10)

    @given(pair_strategy, st.floats(min_value=0.0, max_value=2 * np.pi))
    @settings(deadline=None, max_examples=100)
    def test_phase_invariance(self, pair, delta):
        # depends on (c, s) only through c^2 + s^2
        nj, nk, c, s = pair
        k = KernelSpec.gaussian(0.7)
        c2 = c * np.cos(delta) + s * np.sin(delta)
        s2 = s * np.cos(delta) - c * np.sin(delta)
        a = angular_integral(k, nj, nk, c, s)
        b = angular_integral(k, nj, nk, c2, s2)
        assert a == pytest.approx(b, rel=1e-10)

    @given(pair_strategy)
    @settings(deadline=None, max_examples=100)
    def test_integrand_bounds(self, pair):
        nj, nk, c, s = pair
        k = KernelSpec.gaussian(0.5)
        r = np.hypot(c, s)
        value = angular_integral(k, nj, nk, c, s)
        hi = 2.0 * np.pi * psi(k, np.sqrt(max(nj + nk - 2.0 * r, 0.0)))
        lo = 2.0 * np.pi * psi(k, np.sqrt(nj + nk + 2.0 * r))
        assert lo - 1e-12 <= value <= hi + 1e-12

    def test_stable_matches_midpoint_oracle(self):
        rng = np.random.default_rng(3)
        k = KernelSpec.stable(1.0, 1.0)
        for _ in range(10):
            w = rng.standard_normal(4)
            nj, nk = w[:2] @ w[:2], w[2:] @ w[2:]
            c = w[0] * w[2] + w[1] * w[3]
            s = w[2] * w[1] - w[0] * w[3]
            got = angular_integral(k, nj, nk, c, s)
            assert got == pytest.approx(quad_oracle(k, nj, nk, c, s), rel=1e-8)

    def test_stable_self_convergence(self):
        k = KernelSpec.stable(1.0, 1.5)
        coarse = angular_integral_quad(k, 2.0, 3.0, 1.0, 0.5, initial_order=64)
        fine = angular_integral_quad(k, 2.0, 3.0, 1.0, 0.5, initial_order=128)
        assert coarse == pytest.approx(fine, rel=1e-10)

    def test_result_range(self):
        k = KernelSpec.gaussian(1.0)
        v = angular_integral(k, 1.0, 2.0, 0.5, -0.3)
        assert 0.0 < v <= 2.0 * np.pi + 1e-12

    def test_cauchy_schwarz_guard(self):
        k = KernelSpec.gaussian(1.0)
        with pytest.raises(SummaryError):
            angular_integral(k, 1.0, 1.0, 1.5, 0.0)
        with pytest.raises(DomainError):
            angular_integral(k, -1.0, 1.0, 0.0, 0.0)
        with pytest.raises(DomainError):
            angular_integral(k, np.nan, 1.0, 0.0, 0.0)
