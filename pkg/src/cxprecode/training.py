"""End-to-end training loop with a zero-forcing target.

One run: initialize CN(0,1) weights, compute the full-digital ZF matrix
for the given channel, generate train/test sets (x ~ CN(0,1),
y = B_zf x), then per-sample momentum SGD until the test error drops
below the threshold or the epoch budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelMatrix
from .errors import DivergenceDetected
from .linalg import sample_cn, stream_rng
from .network import (
    NetConfig,
    NetworkWeights,
    Velocity,
    backward,
    cost,
    forward,
    init_weights,
    momentum_step,
)
from .precoding import Precoder, zf_precoder

# Test error beyond this multiple of its starting value aborts the run.
DIVERGENCE_FACTOR = 1e6


@dataclass(frozen=True)
class Dataset:
    """Sample pairs as stacked columns: xs is n_s x n, ys is n_t x n."""

    xs: np.ndarray
    ys: np.ndarray
    precoder: Precoder  # generating target, kept for consistency checks

    def __len__(self) -> int:
        return self.xs.shape[1]


@dataclass(frozen=True)
class TrainConfig:
    max_epochs: int = 200
    error_threshold: float = 1e-8
    n_train: int = 100
    n_test: int = 100
    alpha: float = 0.9
    mu: float = 0.01
    seed: int = 0
    shuffle: bool = False

    def __post_init__(self):
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.error_threshold <= 0:
            raise ValueError("error_threshold must be positive")
        if self.n_train < 1 or self.n_test < 1:
            raise ValueError("dataset sizes must be >= 1")


@dataclass
class TrainHistory:
    """Per-epoch mean costs and why the loop stopped.

    train_cost is the mean of the per-sample costs seen during the
    epoch's SGD pass (each evaluated at the weights current for that
    sample); test_cost is evaluated once after the epoch.
    """

    train_cost: list[float] = field(default_factory=list)
    test_cost: list[float] = field(default_factory=list)
    initial_test_cost: float = float("nan")  # at the starting weights
    stop_reason: str = ""  # "threshold_reached" | "max_epochs"

    @property
    def epochs(self) -> int:
        return len(self.test_cost)


def generate_dataset(b_zf: Precoder, n: int, rng: np.random.Generator) -> Dataset:
    """n samples with x ~ CN(0,1) entrywise and y = B_zf x."""
    if n < 1:
        raise ValueError("n must be >= 1")
    n_s = b_zf.f.shape[1]
    xs = sample_cn(rng, n_s, n)
    ys = b_zf.f @ xs
    return Dataset(xs=xs, ys=ys, precoder=b_zf)


def test_error(w: NetworkWeights, ds: Dataset, cfg: NetConfig) -> float:
    """Mean per-sample cost over the whole dataset (batched forward)."""
    a3 = forward(w, ds.xs, cfg).a3
    return 0.5 * float(np.mean(np.sum(np.abs(a3 - ds.ys) ** 2, axis=0)))


def train(
    cfg: NetConfig,
    tcfg: TrainConfig,
    channel: ChannelMatrix,
    p_max: float | None = None,
    init: NetworkWeights | None = None,
) -> tuple[NetworkWeights, TrainHistory]:
    """Run one training loop against the channel's ZF precoder.

    Passing `init` resumes from existing weights (online adaptation to a
    new channel realization) instead of drawing a fresh CN(0,1) start.

    Raises DivergenceDetected when the test error exceeds 1e6 times its
    value at initialization.
    """
    if p_max is None:
        p_max = cfg.p_max
    elif abs(p_max - cfg.p_max) > 1e-12 * max(1.0, cfg.p_max):
        raise ValueError("p_max disagrees with the network's power budget")

    w_rng = stream_rng(tcfg.seed, "weights")
    data_rng = stream_rng(tcfg.seed, "data")

    w = init if init is not None else init_weights(cfg, w_rng)
    b_zf = zf_precoder(channel, p_max)
    train_ds = generate_dataset(b_zf, tcfg.n_train, data_rng)
    test_ds = generate_dataset(b_zf, tcfg.n_test, data_rng)

    v = Velocity.zero(cfg)
    initial_err = test_error(w, test_ds, cfg)
    history = TrainHistory(initial_test_cost=initial_err)

    for _ in range(tcfg.max_epochs):
        order = np.arange(len(train_ds))
        if tcfg.shuffle:
            order = data_rng.permutation(order)
        epoch_cost = 0.0
        for i in order:
            x = train_ds.xs[:, i]
            y = train_ds.ys[:, i]
            trace = forward(w, x, cfg)
            epoch_cost += cost(trace.a3, y)
            grads = backward(w, trace, x, y, cfg)
            w, v = momentum_step(w, grads, v, tcfg.alpha, tcfg.mu)
        history.train_cost.append(epoch_cost / len(train_ds))

        err = test_error(w, test_ds, cfg)
        history.test_cost.append(err)
        if err > DIVERGENCE_FACTOR * initial_err:
            raise DivergenceDetected(
                f"test error {err:.3e} exceeds {DIVERGENCE_FACTOR:.0e} x "
                f"initial {initial_err:.3e}; lower the learning rate"
            )
        if err < tcfg.error_threshold:
            history.stop_reason = "threshold_reached"
            return w, history

    history.stop_reason = "max_epochs"
    return w, history
