import math

import numpy as np
import pytest
from scipy.stats import ks_2samp

from dynnet import polya_gamma as pg


class TestPgMean:
    def test_limit_at_zero(self):
        assert pg.pg_mean(0.0) == 0.25

    def test_value_at_two(self):
        assert pg.pg_mean(2.0) == pytest.approx(math.tanh(1.0) / 4.0, abs=1e-12)
        assert pg.pg_mean(2.0) == pytest.approx(0.1903985, abs=1e-6)

    def test_even_function(self):
        assert pg.pg_mean(-2.0) == pg.pg_mean(2.0)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            pg.pg_mean(float("nan"))


class TestSampler:
    def test_mean_at_zero(self):
        rng = np.random.default_rng(0)
        draws = pg.sample_pg1(np.zeros(100_000), rng)
        assert draws.mean() == pytest.approx(0.25, abs=0.005)

    def test_mean_at_two(self):
        rng = np.random.default_rng(1)
        draws = pg.sample_pg1(np.full(100_000, 2.0), rng)
        assert draws.mean() == pytest.approx(math.tanh(1.0) / 4.0, abs=0.005)

    def test_sign_invariance(self):
        rng = np.random.default_rng(2)
        a = pg.sample_pg1(np.full(20_000, 1.5), rng)
        b = pg.sample_pg1(np.full(20_000, -1.5), rng)
        assert ks_2samp(a, b).pvalue > 0.001

    def test_all_positive(self):
        rng = np.random.default_rng(3)
        draws = pg.sample_pg1(np.linspace(-10, 10, 50_000), rng)
        assert (draws > 0).all()

    def test_deterministic_under_seed(self):
        a = pg.sample_pg1(np.full(1000, 0.7), np.random.default_rng(42))
        b = pg.sample_pg1(np.full(1000, 0.7), np.random.default_rng(42))
        assert np.array_equal(a, b)

    def test_scalar_input(self):
        rng = np.random.default_rng(4)
        val = pg.sample_pg1(1.0, rng)
        assert isinstance(val, float) and val > 0

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            pg.sample_pg1(np.array([np.inf]), np.random.default_rng(0))

    @pytest.mark.parametrize("c", [0.0, 0.5, 1.0, 2.0, 5.0, 10.0])
    def test_moments_match_series_oracle(self, c):
        n = 20_000
        draws = pg.sample_pg1(np.full(n, c), np.random.default_rng(int(c * 10)))
        oracle = pg.series_oracle_draws(c, n, np.random.default_rng(int(c * 10) + 1))
        se_mean = math.hypot(draws.std() / math.sqrt(n), oracle.std() / math.sqrt(n))
        assert abs(draws.mean() - oracle.mean()) < 4 * se_mean


class TestBackends:
    def test_python_backend_always_available(self):
        assert "python" in pg.available_backends()

    @pytest.mark.skipif(
        "compiled" not in pg.available_backends(),
        reason="compiled extension not built",
    )
    def test_backends_bit_identical(self):
        c = np.concatenate([np.linspace(-8, 8, 2000), np.zeros(100)])
        a = pg.sample_pg1(c, np.random.default_rng(7), backend="compiled")
        b = pg.sample_pg1(c, np.random.default_rng(7), backend="python")
        assert np.array_equal(a, b)
