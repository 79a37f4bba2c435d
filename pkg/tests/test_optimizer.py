import json
import math

import numpy as np
import pytest

from swarmcut import Graph, SwarmConfig, adam_fipso_optimize
from swarmcut.optimizer import (
    adam_update,
    approx_ratio,
    finite_diff_grad,
    make_objective,
    minimize,
    objective,
    random_params,
    swarm_influence_grad,
)

P2 = Graph(2, ((0, 1),))
BOX_2D = [(-math.pi, math.pi), (-math.pi, math.pi)]

OPTIMUM_P2 = [math.pi / 2, math.pi / 8]  # expectation exactly 1


def sphere(theta):
    return float(np.sum(np.square(theta)))


class _OnesRng:
    """Stand-in rng whose uniform draws are all 1."""

    def random(self, size=None):
        return np.ones(size) if size is not None else 1.0


class TestObjective:
    def test_zero_when_target_met(self):
        assert objective(OPTIMUM_P2, P2, c_target=1.0, lambda_=3.7) < 1e-12

    def test_combines_mse_and_ar_penalty(self):
        # expectation at the P2 optimum is exactly 1: loss = (1-2)^2 + l*(1-0.5)^2
        assert abs(objective(OPTIMUM_P2, P2, 2.0, 1.0) - 1.25) < 1e-9
        assert abs(objective(OPTIMUM_P2, P2, 2.0, 0.0) - 1.0) < 1e-9

    def test_zero_target_uses_zero_ratio(self):
        # AR falls back to 0, so the penalty term is lambda * 1
        value = objective(OPTIMUM_P2, P2, 0.0, 2.0)
        assert abs(value - (1.0 + 2.0)) < 1e-9

    def test_negative_target_rejected(self):
        with pytest.raises(ValueError):
            objective(OPTIMUM_P2, P2, -1.0, 1.0)

    def test_non_negative_everywhere(self):
        rng = np.random.default_rng(0)
        loss = make_objective(P2, 1, c_target=1.0, lambda_=1.0)
        for _ in range(50):
            assert loss(rng.uniform(-np.pi, np.pi, 2)) >= 0.0


class TestApproxRatio:
    def test_exact(self):
        assert approx_ratio(2.0, 2.0) == 1.0

    def test_zero_target(self):
        assert approx_ratio(123.0, 0.0) == 0.0

    def test_half(self):
        assert approx_ratio(0.9, 1.8) == 0.5


class TestFiniteDiffGrad:
    def test_quadratic(self):
        grad = finite_diff_grad(lambda t: float(t[0] ** 2), np.array([1.0]), 1e-3)
        assert abs(grad[0] - 2.0) < 1e-6

    def test_constant(self):
        grad = finite_diff_grad(lambda t: 5.0, np.zeros(3), 1e-3)
        np.testing.assert_array_equal(grad, np.zeros(3))

    def test_linear_is_exact(self):
        grad = finite_diff_grad(lambda t: 3 * t[0] + 5 * t[1], np.zeros(2), 1e-3)
        np.testing.assert_allclose(grad, [3.0, 5.0], atol=1e-9)

    def test_non_finite_surfaces(self):
        with pytest.raises(ArithmeticError):
            finite_diff_grad(lambda t: math.inf, np.zeros(1), 1e-3)

    def test_bad_step(self):
        with pytest.raises(ValueError):
            finite_diff_grad(sphere, np.zeros(2), 0.0)

    def test_evaluation_count(self):
        calls = []
        finite_diff_grad(lambda t: calls.append(1) or 0.0, np.zeros(4), 1e-3)
        assert len(calls) == 8


class TestSwarmInfluenceGrad:
    def test_zero_when_all_pbests_equal_position(self):
        theta = np.array([0.4, -0.2])
        pbest = np.tile(theta, (5, 1))
        grad = swarm_influence_grad(theta, pbest, c=2.0, rng=np.random.default_rng(0))
        np.testing.assert_array_equal(grad, np.zeros(2))

    def test_single_particle_at_own_best(self):
        theta = np.array([1.0])
        grad = swarm_influence_grad(theta, theta.reshape(1, 1), c=2.0,
                                    rng=np.random.default_rng(0))
        np.testing.assert_array_equal(grad, np.zeros(1))

    def test_opposite_offsets_cancel(self):
        theta = np.zeros(1)
        pbest = np.array([[1.0], [-1.0]])
        grad = swarm_influence_grad(theta, pbest, c=1.0, rng=_OnesRng())
        np.testing.assert_allclose(grad, [0.0])

    def test_mean_scaling(self):
        theta = np.zeros(2)
        pbest = np.array([[2.0, 0.0], [4.0, 0.0]])
        grad = swarm_influence_grad(theta, pbest, c=1.0, rng=_OnesRng())
        np.testing.assert_allclose(grad, [3.0, 0.0])

    def test_deterministic_given_rng_state(self):
        pbest = np.array([[0.3, 0.1], [-0.7, 0.9]])
        g1 = swarm_influence_grad(np.zeros(2), pbest, 2.0, np.random.default_rng(5))
        g2 = swarm_influence_grad(np.zeros(2), pbest, 2.0, np.random.default_rng(5))
        np.testing.assert_array_equal(g1, g2)


class TestAdamUpdate:
    def test_zero_gradient_zero_step(self):
        step, m, v2 = adam_update(np.zeros(2), np.zeros(2), 1, np.zeros(2),
                                  0.9, 0.999, 0.05, 1e-8)
        np.testing.assert_array_equal(step, np.zeros(2))
        np.testing.assert_array_equal(m, np.zeros(2))

    def test_bias_correction_cancels_decay(self):
        grad = np.array([0.37, -2.5])
        m = np.zeros(2)
        v2 = np.zeros(2)
        for t in range(1, 101):
            _, m, v2 = adam_update(m, v2, t, grad, 0.9, 0.999, 0.05, 1e-8)
            m_hat = m / (1 - 0.9 ** t)
            np.testing.assert_allclose(m_hat, grad, atol=1e-12)

    def test_memoryless_step_is_signed_learning_rate(self):
        step, _, _ = adam_update(np.zeros(1), np.zeros(1), 1, np.array([4.0]),
                                 beta1=0.0, beta2=0.0, eta=1.0, epsilon=1e-15)
        np.testing.assert_allclose(step, [1.0], atol=1e-9)

    def test_second_moment_non_negative(self):
        rng = np.random.default_rng(9)
        m = np.zeros(3)
        v2 = np.zeros(3)
        for t in range(1, 50):
            _, m, v2 = adam_update(m, v2, t, rng.normal(size=3), 0.9, 0.999, 0.05, 1e-8)
            assert (v2 >= 0).all()


class TestRandomParams:
    def test_shape_and_range(self):
        theta = random_params(1, np.random.default_rng(2))
        assert theta.shape == (2,)
        assert (np.abs(theta) <= np.pi).all()

    def test_depth_three(self):
        assert random_params(3, np.random.default_rng(2)).shape == (6,)

    def test_deterministic(self):
        a = random_params(2, np.random.default_rng(6))
        b = random_params(2, np.random.default_rng(6))
        np.testing.assert_array_equal(a, b)

    def test_bad_depth(self):
        with pytest.raises(ValueError):
            random_params(0, np.random.default_rng(0))


class TestMinimize:
    def test_sphere_converges(self):
        cfg = SwarmConfig(swarm_size=10, max_iters=100, seed=0)
        result = minimize(sphere, BOX_2D, cfg)
        assert result.best_loss < 1e-3

    def test_single_iteration_contract(self):
        cfg = SwarmConfig(swarm_size=2, max_iters=1, seed=3)
        result = minimize(sphere, BOX_2D, cfg)
        assert len(result.trace) == 1
        assert (result.best_position >= -math.pi).all()
        assert (result.best_position <= math.pi).all()

    def test_trace_non_increasing(self):
        for seed in range(4):
            cfg = SwarmConfig(swarm_size=5, max_iters=20, seed=seed)
            trace = minimize(sphere, BOX_2D, cfg).trace
            assert all(a >= b for a, b in zip(trace, trace[1:]))

    def test_best_loss_matches_best_position(self):
        cfg = SwarmConfig(swarm_size=5, max_iters=10, seed=1)
        result = minimize(sphere, BOX_2D, cfg)
        assert result.best_loss == sphere(result.best_position)

    @pytest.mark.parametrize("mode,per_update", [
        ("adam_fd", 2 * 2 + 1), ("adam_swarm", 1), ("fipso_plain", 1)])
    def test_evaluation_counts(self, mode, per_update):
        cfg = SwarmConfig(swarm_size=4, max_iters=3, seed=0, mode=mode)
        result = minimize(sphere, BOX_2D, cfg)
        assert result.evaluations == 4 + 3 * 4 * per_update

    def test_all_modes_respect_bounds(self):
        box = [(-1.0, 2.0), (0.5, 3.0)]
        for mode in ("adam_fd", "adam_swarm", "fipso_plain"):
            for seed in range(3):
                cfg = SwarmConfig(swarm_size=4, max_iters=8, seed=seed, mode=mode)
                result = minimize(sphere, box, cfg)
                assert (result.best_position >= [-1.0, 0.5]).all()
                assert (result.best_position <= [2.0, 3.0]).all()

    def test_positions_in_bounds_every_update_fipso(self):
        # in fipso_plain mode every post-init evaluation happens at a clipped
        # particle position, so the recorded points are the trajectory
        box = np.array([(-0.5, 0.5), (-0.5, 0.5)])
        seen = []

        def recording(theta):
            seen.append(theta.copy())
            return sphere(theta)

        cfg = SwarmConfig(swarm_size=6, max_iters=15, seed=2, mode="fipso_plain")
        minimize(recording, box, cfg)
        for theta in seen[6:]:
            assert (theta >= -0.5).all() and (theta <= 0.5).all()

    def test_positions_in_bounds_every_update_adam_fd(self):
        # adam_fd evaluations come in blocks of 2*dim probes plus one call at
        # the clipped position; check that last call of every block
        box = np.array([(-0.5, 0.5), (-0.5, 0.5)])
        seen = []

        def recording(theta):
            seen.append(theta.copy())
            return sphere(theta)

        swarm, iters, dim = 5, 10, 2
        cfg = SwarmConfig(swarm_size=swarm, max_iters=iters, seed=4, mode="adam_fd")
        minimize(recording, box, cfg)
        block = 2 * dim + 1
        updates = seen[swarm:]
        assert len(updates) == iters * swarm * block
        for k in range(iters * swarm):
            theta = updates[k * block + block - 1]
            assert (theta >= -0.5).all() and (theta <= 0.5).all()

    def test_fipso_plain_matches_direct_reference(self):
        """With Adam removed, one particle update is inertia plus the fully
        informed social pull; replay it with an independently coded loop."""
        cfg = SwarmConfig(swarm_size=4, max_iters=12, seed=8, mode="fipso_plain")
        lo = np.array([-math.pi, -math.pi])
        hi = np.array([math.pi, math.pi])

        seen = []

        def recording(theta):
            seen.append(theta.copy())
            return sphere(theta)

        result = minimize(recording, BOX_2D, cfg)
        trajectory = seen[cfg.swarm_size:]

        rng = np.random.default_rng(cfg.seed)
        pos = rng.uniform(lo, hi, size=(cfg.swarm_size, 2))
        vel = np.zeros_like(pos)
        pbest = pos.copy()
        pbest_loss = np.array([sphere(x) for x in pos])
        reference = []
        for t in range(1, cfg.max_iters + 1):
            w = cfg.w_max - (t / cfg.max_iters) * (cfg.w_max - cfg.w_min)
            for i in range(cfg.swarm_size):
                r = rng.random(cfg.swarm_size)
                social = np.zeros(2)
                for j in range(cfg.swarm_size):
                    social += r[j] * (pbest[j] - pos[i])
                vel[i] = w * vel[i] + (cfg.c / cfg.swarm_size) * social
                cand = np.clip(pos[i] + vel[i], lo, hi)
                vel[i] = cand - pos[i]
                pos[i] = cand
                reference.append(cand.copy())
                loss = sphere(cand)
                if loss < pbest_loss[i]:
                    pbest_loss[i] = loss
                    pbest[i] = cand.copy()
        assert len(trajectory) == len(reference)
        np.testing.assert_allclose(trajectory, reference, atol=1e-12)
        assert result.best_loss == pytest.approx(min(pbest_loss), rel=1e-9, abs=1e-15)


class TestAdamFipsoOptimize:
    def test_single_edge_reaches_closed_form_optimum(self):
        result = adam_fipso_optimize(P2, 1, c_target=1.0, cfg=SwarmConfig(seed=0))
        assert result.best_expectation >= 0.999

    def test_best_loss_consistent_with_objective(self):
        cfg = SwarmConfig(swarm_size=6, max_iters=5, seed=2)
        result = adam_fipso_optimize(P2, 1, 1.0, cfg)
        recomputed = objective(result.best_position, P2, 1.0, cfg.lambda_)
        assert abs(result.best_loss - recomputed) < 1e-12

    def test_deterministic_per_seed(self):
        cfg = SwarmConfig(swarm_size=5, max_iters=4, seed=11)
        a = adam_fipso_optimize(P2, 2, 1.0, cfg)
        b = adam_fipso_optimize(P2, 2, 1.0, cfg)
        np.testing.assert_array_equal(a.best_position, b.best_position)
        assert a.best_loss == b.best_loss
        assert a.trace == b.trace

    def test_bad_depth(self):
        with pytest.raises(ValueError):
            adam_fipso_optimize(P2, 0, 1.0, SwarmConfig())


class TestSwarmConfig:
    def test_defaults_valid(self):
        SwarmConfig().validate()

    @pytest.mark.parametrize("kwargs", [
        {"swarm_size": 1}, {"max_iters": 0}, {"w_min": 0.9, "w_max": 0.4},
        {"adam_beta1": 1.0}, {"adam_beta2": 0.0}, {"epsilon": 0.0},
        {"fd_step": -1.0}, {"mode": "bogus"}, {"lambda_": -0.5},
        {"bounds": [(1.0, 1.0)]},
    ])
    def test_invalid_configs(self, kwargs):
        with pytest.raises(ValueError):
            SwarmConfig(**kwargs).validate()

    def test_json_lambda_alias(self):
        cfg = SwarmConfig.from_dict({"lambda": 2.5, "swarm_size": 8})
        assert cfg.lambda_ == 2.5
        assert cfg.swarm_size == 8
        assert cfg.to_dict()["lambda"] == 2.5

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            SwarmConfig.from_dict({"swarmsize": 8})

    def test_json_file_round_trip(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"eta": 0.1, "mode": "fipso_plain", "lambda": 0.5}))
        cfg = SwarmConfig.from_json_file(path)
        assert cfg.eta == 0.1
        assert cfg.mode == "fipso_plain"
        assert cfg.lambda_ == 0.5

    def test_with_seed_copies(self):
        base = SwarmConfig(seed=1)
        other = base.with_seed(99)
        assert other.seed == 99
        assert base.seed == 1
