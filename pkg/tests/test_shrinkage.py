import numpy as np
import pytest

from dynnet.errors import DataError
from dynnet.gp_kernel import KernelConfig, build_covariance
from dynnet.net_data import TimeGrid
from dynnet.shrinkage import (
    ShrinkageState,
    coordinate_quad_forms,
    sample_prior,
    update_thetas,
)


def unit_cov(T=1):
    return build_covariance(TimeGrid(np.arange(float(T)) * 100.0), KernelConfig(1.0, jitter=0.0))


class TestPrior:
    def test_degenerate_length(self):
        st = sample_prior(2.0, 2.0, 1, np.random.default_rng(0))
        assert st.H == 1
        assert st.taus[0] == st.thetas[0]

    def test_theta_ratio_mean(self):
        rng = np.random.default_rng(1)
        ratios = np.array(
            [sample_prior(2.0, 2.0, 2, rng).thetas[1] for _ in range(100_000)]
        )
        assert ratios.mean() == pytest.approx(2.0, abs=0.02)

    def test_ten_dimension_configuration(self):
        st = sample_prior(2.0, 2.0, 10, np.random.default_rng(2))
        assert st.H == 10
        assert np.all(st.thetas > 0)

    def test_tau_cumulative_consistency(self):
        st = sample_prior(3.0, 1.5, 6, np.random.default_rng(3))
        assert np.array_equal(st.taus, np.cumprod(st.thetas))

    def test_geometric_growth_of_tau(self):
        # E[tau_h] = a1 * a2^(h-1) for independent gamma factors
        rng = np.random.default_rng(4)
        taus = np.array([sample_prior(2.0, 2.0, 4, rng).taus for _ in range(100_000)])
        expected = 2.0 * 2.0 ** np.arange(4)
        assert np.allclose(taus.mean(axis=0), expected, rtol=0.05)

    def test_invalid_hyperparameters(self):
        with pytest.raises(DataError):
            ShrinkageState(0.0, 2.0, np.array([1.0]))
        with pytest.raises(DataError):
            sample_prior(2.0, 2.0, 0, np.random.default_rng(0))


class TestUpdate:
    def test_shape_matches_step_formula(self):
        # all-zero coordinates: rate is 1, so draws average to the shape
        # a1 + V*T*H/2 = 2 + 15*40*10/2 = 3002
        V, T, H = 15, 40, 10
        cov = unit_cov(T)
        coords = np.zeros((V, H, T))
        rng = np.random.default_rng(5)
        st = sample_prior(2.0, 2.0, H, rng)
        draws = np.array(
            [update_thetas(st, coords, cov, rng).thetas[0] for _ in range(2000)]
        )
        assert draws.mean() == pytest.approx(3002.0, abs=5.0)

    def test_zero_coords_reduces_to_prior_shape(self):
        V, T, H = 3, 4, 2
        cov = unit_cov(T)
        coords = np.zeros((V, H, T))
        rng = np.random.default_rng(6)
        st = sample_prior(2.0, 2.0, H, rng)
        # shape for h=2: a2 + V*T*(H-2+1)/2 = 2 + 6 = 8, rate 1
        draws = np.array(
            [update_thetas(st, coords, cov, rng).thetas[1] for _ in range(20_000)]
        )
        assert draws.mean() == pytest.approx(8.0, rel=0.02)

    def test_hand_evaluated_full_conditional(self):
        # V=1, T=1, H=1, x=2, K=1, a1=2 -> Ga(2.5, 3)
        cov = unit_cov(1)
        coords = np.full((1, 1, 1), 2.0)
        st = ShrinkageState(2.0, 2.0, np.array([1.0]))
        rng = np.random.default_rng(7)
        draws = np.array(
            [update_thetas(st, coords, cov, rng).thetas[0] for _ in range(100_000)]
        )
        assert draws.mean() == pytest.approx(2.5 / 3.0, rel=0.02)
        assert draws.var() == pytest.approx(2.5 / 9.0, rel=0.05)

    def test_taus_consistent_after_update(self):
        rng = np.random.default_rng(8)
        cov = unit_cov(3)
        coords = rng.standard_normal((4, 3, 3))
        st = sample_prior(2.0, 2.0, 3, rng)
        new = update_thetas(st, coords, cov, rng)
        assert np.array_equal(new.taus, np.cumprod(new.thetas))

    def test_literal_rate_flag_changes_distribution(self):
        rng = np.random.default_rng(9)
        cov = unit_cov(2)
        coords = rng.standard_normal((3, 2, 2)) * 2.0
        st = ShrinkageState(2.0, 2.0, np.array([1.0, 1.0]))
        conj = np.array(
            [
                update_thetas(st, coords, cov, np.random.default_rng(s)).thetas[1]
                for s in range(3000)
            ]
        )
        lit = np.array(
            [
                update_thetas(
                    st, coords, cov, np.random.default_rng(s), literal_rate=True
                ).thetas[1]
                for s in range(3000)
            ]
        )
        # literal rate includes the l=1 term too, so theta_2 draws shrink
        assert lit.mean() < conj.mean()

    def test_quad_forms(self):
        rng = np.random.default_rng(10)
        cov = unit_cov(3)
        coords = rng.standard_normal((2, 2, 3))
        q = coordinate_quad_forms(coords, cov)
        expected = [
            sum(coords[i, h] @ np.linalg.inv(cov.matrix) @ coords[i, h] for i in range(2))
            for h in range(2)
        ]
        assert np.allclose(q, expected)

    def test_dimension_mismatch(self):
        st = sample_prior(2.0, 2.0, 3, np.random.default_rng(11))
        with pytest.raises(DataError):
            update_thetas(st, np.zeros((2, 2, 1)), unit_cov(1), np.random.default_rng(0))
