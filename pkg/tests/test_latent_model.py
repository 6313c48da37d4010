import numpy as np
import pytest
from scipy.stats import ortho_group

from dynnet.errors import DataError
from dynnet.latent_model import (
    LatentState,
    edge_probability,
    exact_factorization,
    log_likelihood,
    node_design_matrix,
    pair_products,
    similarity,
)
from dynnet.net_data import DynamicNetwork, TimeGrid, n_pairs, pair_arrays
from dynnet.shrinkage import ShrinkageState


def random_state(V, H, T, rng):
    shrink = ShrinkageState(2.0, 2.0, np.abs(rng.standard_normal(H)) + 0.5) if H else None
    return LatentState(
        mu=rng.standard_normal(T),
        coords=rng.standard_normal((V, H, T)),
        shrink=shrink,
        omega=np.abs(rng.standard_normal((n_pairs(V), T))) + 0.1,
    )


def full_network(V, T):
    grid = TimeGrid(np.arange(1.0, T + 1.0))
    P = n_pairs(V)
    return DynamicNetwork(V, grid, np.zeros((P, T), np.int8), np.ones((P, T), bool))


class TestSimilarity:
    def test_zero_coords_gives_baseline(self):
        st = random_state(4, 2, 3, np.random.default_rng(0))
        st.coords[:] = 0.0
        s = similarity(st, 1)
        assert np.allclose(s, st.mu[1])

    def test_direct_evaluation(self):
        st = random_state(2, 2, 1, np.random.default_rng(1))
        st.mu[:] = 1.0
        st.coords[0, :, 0] = [1.0, 0.0]
        st.coords[1, :, 0] = [1.0, 0.0]
        assert similarity(st, 0)[0] == pytest.approx(2.0)

    def test_matches_dense_matrix_oracle(self):
        rng = np.random.default_rng(2)
        st = random_state(6, 3, 4, rng)
        i_idx, j_idx = pair_arrays(6)
        for k in range(4):
            X = st.coords[:, :, k]
            S = st.mu[k] * np.ones((6, 6)) + X @ X.T
            assert np.allclose(similarity(st, k), S[i_idx, j_idx], atol=1e-12)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(3)
        st = random_state(5, 3, 2, rng)
        s_before = similarity(st)
        Q = ortho_group.rvs(3, random_state=4)
        for k in range(2):
            st.coords[:, :, k] = st.coords[:, :, k] @ Q
        assert np.linalg.norm(similarity(st) - s_before) < 1e-10


class TestEdgeProbability:
    def test_symmetry_point(self):
        assert edge_probability(0.0) == 0.5

    def test_direct_value(self):
        assert edge_probability(2.0) == pytest.approx(0.880797, abs=1e-6)

    def test_no_underflow_in_tail(self):
        p = edge_probability(-40.0)
        assert 0.0 < p < 1e-17

    def test_strictly_increasing(self):
        s = np.linspace(-30, 30, 500)
        assert np.all(np.diff(edge_probability(s)) > 0)

    def test_complement_identity(self):
        s = np.linspace(-20, 20, 101)
        assert np.allclose(edge_probability(s) + edge_probability(-s), 1.0, atol=1e-15)


class TestLogLikelihood:
    def test_empty_mask_is_zero(self):
        st = random_state(3, 2, 2, np.random.default_rng(5))
        grid = TimeGrid(np.array([1.0, 2.0]))
        net = DynamicNetwork(
            3, grid, np.zeros((3, 2), np.int8), np.zeros((3, 2), bool)
        )
        assert log_likelihood(st, net) == 0.0

    def test_single_slot_half(self):
        st = random_state(2, 1, 1, np.random.default_rng(6))
        st.mu[:] = 0.0
        st.coords[:] = 0.0
        net = full_network(2, 1)
        assert log_likelihood(st, net) == pytest.approx(np.log(0.5))

    def test_matches_slotwise_oracle(self):
        rng = np.random.default_rng(7)
        st = random_state(4, 2, 3, rng)
        grid = TimeGrid(np.arange(1.0, 4.0))
        P = n_pairs(4)
        y = rng.integers(0, 2, (P, 3)).astype(np.int8)
        observed = rng.random((P, 3)) > 0.3
        y[~observed] = 0
        net = DynamicNetwork(4, grid, y, observed)
        s = similarity(st)
        total = 0.0
        for p in range(P):
            for k in range(3):
                if observed[p, k]:
                    pi = 1.0 / (1.0 + np.exp(-s[p, k]))
                    total += y[p, k] * np.log(pi) + (1 - y[p, k]) * np.log(1 - pi)
        assert log_likelihood(st, net) == pytest.approx(total, abs=1e-12)


class TestExactFactorization:
    def test_identity(self):
        X = exact_factorization(np.eye(2), 2)
        assert np.allclose(X @ X.T, np.eye(2), atol=1e-12)

    def test_random_psd(self):
        rng = np.random.default_rng(8)
        A = rng.standard_normal((6, 6))
        S = A @ A.T
        X = exact_factorization(S, 8)
        assert np.linalg.norm(X @ X.T - S) < 1e-10 * np.linalg.norm(S) + 1e-10

    def test_indefinite_rejected(self):
        with pytest.raises(DataError):
            exact_factorization(np.array([[1.0, 2.0], [2.0, 1.0]]), 2)

    def test_h_too_small(self):
        with pytest.raises(DataError):
            exact_factorization(np.eye(3), 2)

    def test_zero_padding(self):
        X = exact_factorization(np.eye(2), 5)
        assert X.shape == (2, 5)
        assert np.allclose(X @ X.T, np.eye(2), atol=1e-12)


class TestNodeDesignMatrix:
    def test_minimal_case(self):
        st = random_state(3, 1, 1, np.random.default_rng(9))
        net = full_network(3, 1)
        design = node_design_matrix(st, net, 0, y=net.y.astype(float))
        assert design.X.shape == (2, 1)
        assert design.X[0, 0] == st.coords[1, 0, 0]
        assert design.X[1, 0] == st.coords[2, 0, 0]

    def test_reproduces_linear_predictor(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            V, H, T = 5, 3, 4
            st = random_state(V, H, T, rng)
            net = full_network(V, T)
            for v in range(V):
                design = node_design_matrix(st, net, v, y=net.y.astype(float))
                beta = st.coords[v].reshape(H * T)
                pred = design.X @ beta
                row = 0
                for j in [u for u in range(V) if u != v]:
                    prod = (st.coords[v] * st.coords[j]).sum(axis=0)
                    for k in range(T):
                        s_direct = st.mu[k] + prod[k]
                        assert abs(st.mu[k] + pred[row] - s_direct) < 1e-12
                        row += 1

    def test_missing_rows_excluded(self):
        rng = np.random.default_rng(11)
        V, H, T = 4, 2, 3
        st = random_state(V, H, T, rng)
        grid = TimeGrid(np.arange(1.0, T + 1.0))
        P = n_pairs(V)
        y = rng.integers(0, 2, (P, T)).astype(np.int8)
        observed = rng.random((P, T)) > 0.4
        y[~observed] = 0
        net = DynamicNetwork(V, grid, y, observed)
        design = node_design_matrix(st, net, 1)
        from dynnet.net_data import pair_index

        n_obs = sum(
            int(observed[pair_index(1, j, V), k])
            for j in range(V)
            if j != 1
            for k in range(T)
        )
        assert design.X.shape == (n_obs, H * T)
        assert len(design.slots) == n_obs

    def test_zero_partner_coords(self):
        st = random_state(3, 2, 2, np.random.default_rng(12))
        st.coords[1] = 0.0
        st.coords[2] = 0.0
        net = full_network(3, 2)
        design = node_design_matrix(st, net, 0, y=net.y.astype(float))
        assert not design.X.any()

    def test_response_uses_omega_scaled_offset(self):
        st = random_state(3, 1, 2, np.random.default_rng(13))
        net = full_network(3, 2)
        y = net.y.astype(float)
        design = node_design_matrix(st, net, 0, y=y)
        row = 0
        for j in (1, 2):
            p = j * (j - 1) // 2 + 0
            for k in range(2):
                expected = y[p, k] - 0.5 - st.omega[p, k] * st.mu[k]
                assert design.response[row] == pytest.approx(expected)
                row += 1
