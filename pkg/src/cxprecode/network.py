"""Split-complex two-layer network trained to imitate a precoding matrix.

Widths mirror the transmitter hardware: n_s inputs (data streams), n_rf
hidden neurons (RF chains), n_t outputs (antennas). The activation acts
on real and imaginary parts separately through a sigmoid rescaled to
(-1, 1) and multiplied by r = sqrt(p_max/2), which also bounds the
per-antenna output power.

The cost 0.5*||a3 - y||^2 is real and non-analytic in the complex
weights, so gradients follow the split convention

    grad(w) = d(cost)/d(Re w) + j * d(cost)/d(Im w),

computed in closed form layer by layer. Every update direction here is
checked against central finite differences in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch


@dataclass(frozen=True)
class NetConfig:
    """Layer widths and power budget; r = sqrt(p_max/2) is derived."""

    n_s: int
    n_rf: int
    n_t: int
    p_max: float

    def __post_init__(self):
        if not (self.n_s <= self.n_rf < self.n_t):
            raise ValueError(
                f"widths must satisfy n_s <= n_rf < n_t, got "
                f"({self.n_s}, {self.n_rf}, {self.n_t})"
            )
        if self.p_max <= 0:
            raise ValueError("p_max must be positive")

    @property
    def r(self) -> float:
        """Power limitation factor of the activation."""
        return float(np.sqrt(self.p_max / 2.0))


@dataclass(frozen=True)
class NetworkWeights:
    w1: np.ndarray  # n_rf x n_s
    w2: np.ndarray  # n_t x n_rf


@dataclass(frozen=True)
class ForwardTrace:
    """Activations of one forward pass (kept for the backward pass)."""

    z1: np.ndarray
    a2: np.ndarray
    z2: np.ndarray
    a3: np.ndarray


@dataclass(frozen=True)
class Gradients:
    g1: np.ndarray
    g2: np.ndarray


@dataclass(frozen=True)
class Velocity:
    """Momentum accumulators, one per weight matrix."""

    v1: np.ndarray
    v2: np.ndarray

    @staticmethod
    def zero(cfg: NetConfig) -> "Velocity":
        return Velocity(
            v1=np.zeros((cfg.n_rf, cfg.n_s), dtype=np.complex128),
            v2=np.zeros((cfg.n_t, cfg.n_rf), dtype=np.complex128),
        )


def isgm(x):
    """Sigmoid rescaled to (-1, 1): 2/(1+e^(-x)) - 1, identically tanh(x/2).

    The tanh form is finite for every double, so no overflow guard is
    needed at large |x|.
    """
    return np.tanh(np.asarray(x, dtype=np.float64) / 2.0)


def isgm_prime(x):
    """Derivative of isgm: (1 + isgm(x)) * (1 - isgm(x)) / 2, in (0, 1/2]."""
    s = isgm(x)
    return (1.0 + s) * (1.0 - s) / 2.0


def split_activation(z, r: float):
    """r * (isgm(Re z) + j*isgm(Im z)); both components stay inside (-r, r)."""
    z = np.asarray(z, dtype=np.complex128)
    return r * (isgm(z.real) + 1j * isgm(z.imag))


def init_weights(cfg: NetConfig, rng: np.random.Generator) -> NetworkWeights:
    """CN(0,1) initialization of both layers."""
    from .linalg import sample_cn

    return NetworkWeights(
        w1=sample_cn(rng, cfg.n_rf, cfg.n_s),
        w2=sample_cn(rng, cfg.n_t, cfg.n_rf),
    )


def forward(w: NetworkWeights, x: np.ndarray, cfg: NetConfig) -> ForwardTrace:
    """Two-layer pass: z1 = W1 x, a2 = f(z1), z2 = W2 a2, a3 = f(z2).

    x may be a single n_s vector or an n_s-by-batch matrix; the network
    is applied column-wise either way.
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != cfg.n_s:
        raise ShapeMismatch(f"input has {x.shape[0]} rows, expected {cfg.n_s}")
    r = cfg.r
    z1 = w.w1 @ x
    a2 = split_activation(z1, r)
    z2 = w.w2 @ a2
    a3 = split_activation(z2, r)
    # per-component activation bound; implies sum |a3_n|^2 < n_t * p_max
    assert np.all(np.abs(a3.real) <= r) and np.all(np.abs(a3.imag) <= r)
    return ForwardTrace(z1=z1, a2=a2, z2=z2, a3=a3)


def cost(a3: np.ndarray, y: np.ndarray) -> float:
    """Half squared error 0.5 * ||a3 - y||_F^2."""
    if a3.shape != y.shape:
        raise ShapeMismatch(f"output shape {a3.shape} vs target {y.shape}")
    return 0.5 * float(np.sum(np.abs(a3 - y) ** 2))


def backward(
    w: NetworkWeights,
    trace: ForwardTrace,
    x: np.ndarray,
    y: np.ndarray,
    cfg: NetConfig,
) -> Gradients:
    """Closed-form gradients of cost(a3, y) for one sample.

    Output layer: with the split residual

        delta = r * [(a3_R - y_R) * isgm'(z2_R) + j*(a3_I - y_I) * isgm'(z2_I)]

    the layer-2 gradient is the outer product delta * a2^H. Backpropagating
    through W2 gives eps = W2^H delta at the hidden layer, and

        gamma = r * [Re(eps) * isgm'(z1_R) + j*Im(eps) * isgm'(z1_I)]

    makes the layer-1 gradient gamma * x^H. Expanding these products
    componentwise reproduces the four real partial-derivative formulas
    of the two layers exactly.
    """
    x = np.asarray(x, dtype=np.complex128).ravel()
    y = np.asarray(y, dtype=np.complex128).ravel()
    if x.shape[0] != cfg.n_s or y.shape[0] != cfg.n_t:
        raise ShapeMismatch(
            f"sample shapes ({x.shape[0]}, {y.shape[0]}) vs config "
            f"({cfg.n_s}, {cfg.n_t})"
        )
    r = cfg.r
    resid = trace.a3 - y
    delta = r * (
        resid.real * isgm_prime(trace.z2.real)
        + 1j * resid.imag * isgm_prime(trace.z2.imag)
    )
    g2 = np.outer(delta, trace.a2.conj())

    eps = w.w2.conj().T @ delta
    gamma = r * (
        eps.real * isgm_prime(trace.z1.real)
        + 1j * eps.imag * isgm_prime(trace.z1.imag)
    )
    g1 = np.outer(gamma, x.conj())
    return Gradients(g1=g1, g2=g2)


def momentum_step(
    w: NetworkWeights,
    g: Gradients,
    v: Velocity,
    alpha: float,
    mu: float,
) -> tuple[NetworkWeights, Velocity]:
    """Momentum SGD: step(k) = alpha*step(k-1) + mu*grad; w(k+1) = w(k) - step(k)."""
    if not (0.0 <= alpha < 1.0):
        raise ValueError("momentum factor must lie in [0, 1)")
    if mu <= 0:
        raise ValueError("learning rate must be positive")
    v1 = alpha * v.v1 + mu * g.g1
    v2 = alpha * v.v2 + mu * g.g2
    return (
        NetworkWeights(w1=w.w1 - v1, w2=w.w2 - v2),
        Velocity(v1=v1, v2=v2),
    )
