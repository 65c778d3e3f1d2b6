import numpy as np
import pytest

from cxprecode import (
    NetConfig,
    NetworkWeights,
    Velocity,
    backward,
    cost,
    forward,
    init_weights,
    isgm,
    isgm_prime,
    momentum_step,
    sample_cn,
    split_activation,
    stream_rng,
)
from cxprecode.errors import ShapeMismatch


def fd_gradients(w, x, y, cfg, step=1e-6):
    """Independent oracle: central finite differences of the cost with
    respect to every real and imaginary weight component."""

    def cost_at(w1, w2):
        trace = forward(NetworkWeights(w1=w1, w2=w2), x, cfg)
        return cost(trace.a3, y)

    grads = []
    for name in ("w1", "w2"):
        base = getattr(w, name)
        g = np.zeros_like(base)
        for idx in np.ndindex(base.shape):
            for direction in (1.0, 1.0j):
                wp = {"w1": w.w1.copy(), "w2": w.w2.copy()}
                wm = {"w1": w.w1.copy(), "w2": w.w2.copy()}
                wp[name][idx] += direction * step
                wm[name][idx] -= direction * step
                d = (cost_at(wp["w1"], wp["w2"]) - cost_at(wm["w1"], wm["w2"])) / (
                    2 * step
                )
                g[idx] += direction * d
        grads.append(g)
    return grads


def check_against_fd(cfg, seed, rel_tol=1e-6, abs_floor=1e-9):
    rng = stream_rng(seed, "gradcheck")
    w = init_weights(cfg, rng)
    x = sample_cn(rng, cfg.n_s).ravel()
    y = sample_cn(rng, cfg.n_t).ravel()
    trace = forward(w, x, cfg)
    g = backward(w, trace, x, y, cfg)
    fd1, fd2 = fd_gradients(w, x, y, cfg)
    for analytic, numeric in ((g.g1, fd1), (g.g2, fd2)):
        err = np.abs(analytic - numeric)
        scale = np.maximum(np.abs(numeric), abs_floor / rel_tol)
        assert np.max(err / scale) <= rel_tol


class TestIsgm:
    def test_zero(self):
        assert isgm(0.0) == 0.0

    def test_log3_gives_half(self):
        assert isgm(np.log(3.0)) == pytest.approx(0.5, abs=1e-15)

    def test_matches_explicit_form(self):
        x = stream_rng(1, "pts").uniform(-30, 30, 100)
        explicit = 2.0 / (1.0 + np.exp(-x)) - 1.0
        assert np.max(np.abs(isgm(x) - explicit)) <= 1e-14

    def test_stable_at_extremes(self):
        assert isgm(750.0) == 1.0
        assert isgm(-750.0) == -1.0
        assert np.isfinite(isgm(np.array([-1e6, 1e6]))).all()


class TestIsgmPrime:
    def test_zero_is_half(self):
        assert isgm_prime(0.0) == 0.5

    def test_saturates_to_zero(self):
        assert isgm_prime(40.0) == pytest.approx(0.0, abs=1e-15)
        assert isgm_prime(-40.0) == pytest.approx(0.0, abs=1e-15)

    def test_matches_finite_difference(self):
        x = stream_rng(2, "pts").uniform(-8, 8, 100)
        h = 1e-4
        fd = (isgm(x + h) - isgm(x - h)) / (2 * h)
        assert np.max(np.abs(isgm_prime(x) - fd) / np.abs(fd)) <= 1e-8


class TestSplitActivation:
    def test_zero(self):
        assert split_activation(0.0 + 0.0j, 1.0) == 0.0

    def test_log3_real_part(self):
        assert split_activation(np.log(3.0) + 0j, 1.0) == pytest.approx(0.5 + 0j)

    def test_components_bounded(self):
        z = 10 * sample_cn(stream_rng(3, "z"), 1000, 1)
        out = split_activation(z, 1.3)
        assert np.all(np.abs(out.real) < 1.3)
        assert np.all(np.abs(out.imag) < 1.3)


class TestForward:
    def test_zero_weights_zero_output(self):
        cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=2.0)
        w = NetworkWeights(
            w1=np.zeros((4, 2), dtype=complex), w2=np.zeros((8, 4), dtype=complex)
        )
        trace = forward(w, np.ones(2, dtype=complex), cfg)
        assert np.all(trace.a3 == 0)

    def test_small_signal_linearization(self):
        # near zero the activation is f(z) ~ (r/2) z, so the whole network
        # linearizes to (r/2) W2 ((r/2) W1 x)
        cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=2.0)
        w = NetworkWeights(
            w1=np.ones((4, 2), dtype=complex), w2=np.ones((8, 4), dtype=complex)
        )
        x = 1e-6 * np.array([1.0 + 0.5j, -0.25 + 1j])
        x *= 1e-6 / np.linalg.norm(x) * np.linalg.norm(x)  # keep ||x|| ~ 1e-6
        trace = forward(w, x, cfg)
        r = cfg.r
        linear = (r / 2) * w.w2 @ ((r / 2) * w.w1 @ x)
        rel = np.linalg.norm(trace.a3 - linear) / np.linalg.norm(linear)
        assert rel <= 1e-4

    def test_output_components_bounded(self):
        cfg = NetConfig(n_s=4, n_rf=8, n_t=16, p_max=2.0)
        rng = stream_rng(4, "fw")
        w = init_weights(cfg, rng)
        x = sample_cn(rng, cfg.n_s, 1000)
        trace = forward(w, x, cfg)
        r = cfg.r
        assert np.all(np.abs(trace.a3.real) < r)
        assert np.all(np.abs(trace.a3.imag) < r)
        # total output power per column under the per-component bound
        assert np.all(np.sum(np.abs(trace.a3) ** 2, axis=0) < cfg.n_t * cfg.p_max)

    def test_determinism(self):
        cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=2.0)
        rng = stream_rng(5, "fw")
        w = init_weights(cfg, rng)
        x = sample_cn(rng, 2).ravel()
        a = forward(w, x, cfg).a3
        b = forward(w, x, cfg).a3
        assert np.array_equal(a, b)

    def test_wrong_input_width_rejected(self):
        cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=2.0)
        w = init_weights(cfg, stream_rng(6, "fw"))
        with pytest.raises(ShapeMismatch):
            forward(w, np.ones(3, dtype=complex), cfg)


class TestCost:
    def test_exact_match_is_zero(self):
        y = np.array([1 + 1j, 2.0])
        assert cost(y, y) == 0.0

    def test_unit_residuals(self):
        a3 = np.array([1.0 + 0j, 1j])
        assert cost(a3, np.zeros(2, dtype=complex)) == pytest.approx(1.0)

    def test_quadratic_scaling(self):
        rng = stream_rng(7, "cost")
        a3 = sample_cn(rng, 5).ravel()
        y = sample_cn(rng, 5).ravel()
        base = cost(a3, y)
        assert cost(y + 2 * (a3 - y), y) == pytest.approx(4 * base, rel=1e-12)


class TestBackward:
    def test_zero_residual_zero_gradients(self):
        cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=2.0)
        rng = stream_rng(8, "bw")
        w = init_weights(cfg, rng)
        x = sample_cn(rng, 2).ravel()
        trace = forward(w, x, cfg)
        g = backward(w, trace, x, trace.a3.copy(), cfg)
        assert np.all(g.g1 == 0)
        assert np.all(g.g2 == 0)

    def test_real_problem_has_real_gradients(self):
        cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=2.0)
        rng = stream_rng(9, "bw")
        w = NetworkWeights(
            w1=rng.standard_normal((4, 2)).astype(complex),
            w2=rng.standard_normal((8, 4)).astype(complex),
        )
        x = rng.standard_normal(2).astype(complex)
        y = rng.standard_normal(8).astype(complex)
        trace = forward(w, x, cfg)
        g = backward(w, trace, x, y, cfg)
        assert np.max(np.abs(g.g1.imag)) == 0.0
        assert np.max(np.abs(g.g2.imag)) == 0.0

    @pytest.mark.parametrize("shape", [(1, 2, 3), (2, 4, 8), (4, 8, 16)])
    def test_matches_finite_differences(self, shape):
        n_s, n_rf, n_t = shape
        cfg = NetConfig(n_s=n_s, n_rf=n_rf, n_t=n_t, p_max=2.0)
        for seed in range(10):
            check_against_fd(cfg, seed)

    def test_shape_mismatch_rejected(self):
        cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=2.0)
        rng = stream_rng(10, "bw")
        w = init_weights(cfg, rng)
        x = sample_cn(rng, 2).ravel()
        trace = forward(w, x, cfg)
        with pytest.raises(ShapeMismatch):
            backward(w, trace, x, np.zeros(7, dtype=complex), cfg)


class TestMomentumStep:
    def cfg_and_state(self, seed=11):
        cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=2.0)
        rng = stream_rng(seed, "mom")
        w = init_weights(cfg, rng)
        return cfg, rng, w

    def test_zero_gradient_zero_velocity_is_identity(self):
        cfg, _, w = self.cfg_and_state()
        from cxprecode import Gradients

        g = Gradients(
            g1=np.zeros((4, 2), dtype=complex), g2=np.zeros((8, 4), dtype=complex)
        )
        w2, v2 = momentum_step(w, g, Velocity.zero(cfg), alpha=0.9, mu=0.1)
        assert np.array_equal(w2.w1, w.w1)
        assert np.array_equal(w2.w2, w.w2)
        assert np.all(v2.v1 == 0)

    def test_zero_momentum_is_plain_sgd(self):
        cfg, rng, w = self.cfg_and_state()
        from cxprecode import Gradients

        g = Gradients(g1=sample_cn(rng, 4, 2), g2=sample_cn(rng, 8, 4))
        w2, _ = momentum_step(w, g, Velocity.zero(cfg), alpha=0.0, mu=0.05)
        assert np.allclose(w2.w1, w.w1 - 0.05 * g.g1)

    def test_scalar_update_by_hand(self):
        # w=1, v=0.1, g=0.2, alpha=0.5, mu=0.1 -> step 0.07, new w 0.93
        from cxprecode import Gradients

        cfg = NetConfig(n_s=1, n_rf=1, n_t=2, p_max=2.0)
        w = NetworkWeights(
            w1=np.array([[1.0 + 0j]]), w2=np.full((2, 1), 1.0 + 0j)
        )
        v = Velocity(v1=np.array([[0.1 + 0j]]), v2=np.full((2, 1), 0.1 + 0j))
        g = Gradients(g1=np.array([[0.2 + 0j]]), g2=np.full((2, 1), 0.2 + 0j))
        w2, v2 = momentum_step(w, g, v, alpha=0.5, mu=0.1)
        assert v2.v1[0, 0] == pytest.approx(0.07)
        assert w2.w1[0, 0] == pytest.approx(0.93)

    def test_small_step_descends(self):
        # first-order guarantee: a tiny plain-SGD step should not increase cost
        cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=2.0)
        improved = 0
        for seed in range(100):
            rng = stream_rng(seed, "descent")
            w = init_weights(cfg, rng)
            x = sample_cn(rng, 2).ravel()
            y = sample_cn(rng, 8).ravel()
            trace = forward(w, x, cfg)
            before = cost(trace.a3, y)
            g = backward(w, trace, x, y, cfg)
            w2, _ = momentum_step(w, g, Velocity.zero(cfg), alpha=0.0, mu=1e-3)
            after = cost(forward(w2, x, cfg).a3, y)
            if after <= before:
                improved += 1
        assert improved >= 95

    def test_invalid_hyperparameters(self):
        cfg, rng, w = self.cfg_and_state()
        from cxprecode import Gradients

        g = Gradients(g1=sample_cn(rng, 4, 2), g2=sample_cn(rng, 8, 4))
        with pytest.raises(ValueError):
            momentum_step(w, g, Velocity.zero(cfg), alpha=1.0, mu=0.1)
        with pytest.raises(ValueError):
            momentum_step(w, g, Velocity.zero(cfg), alpha=0.5, mu=0.0)


class TestNetConfig:
    def test_width_ordering_enforced(self):
        with pytest.raises(ValueError):
            NetConfig(n_s=4, n_rf=2, n_t=8, p_max=1.0)
        with pytest.raises(ValueError):
            NetConfig(n_s=2, n_rf=8, n_t=8, p_max=1.0)

    def test_power_factor(self):
        cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=8.0)
        assert cfg.r == pytest.approx(2.0)
