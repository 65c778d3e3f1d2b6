"""Link-level evaluation: SINR, spectral efficiency, and QPSK bit error rate.

Works on any explicit transmit matrix; a trained network is first probed
with the identity (one basis vector per stream) to recover the effective
matrix it applies, and can alternatively be evaluated by feeding every
symbol vector through the nonlinearity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelMatrix
from .errors import ZeroGain
from .network import NetConfig, NetworkWeights, forward

# Gray-mapped unit-energy QPSK; bit pair (b0, b1) -> index 2*b0 + b1.
# Demapping ties resolve to the lowest index.
QPSK_CONSTELLATION = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2.0)
QPSK_BITS = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.int8)

_BER_CHUNK = 1 << 16  # symbols per Monte-Carlo block (memory bound)


@dataclass(frozen=True)
class EvalConfig:
    noise_power: float = 1.0
    snr_db_list: tuple[float, ...] = (0.0,)
    n_symbols: int = 10**6
    n_channel_trials: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.noise_power <= 0:
            raise ValueError("noise_power must be positive")
        if self.n_symbols < 1 or self.n_channel_trials < 1:
            raise ValueError("counts must be >= 1")


@dataclass(frozen=True)
class EvalResult:
    """Per-user SINRs plus the scalar summaries derived from them."""

    sinr: np.ndarray
    spectral_efficiency: float
    ber_per_user: np.ndarray | None
    ber_avg: float | None
    n_symbols: int
    params: dict = field(default_factory=dict)  # config echo for reproducibility


def probe_effective_precoder(w: NetworkWeights, cfg: NetConfig, k: int) -> np.ndarray:
    """Effective n_t x k matrix of the network: columns are the outputs
    for the k standard basis vectors (identity input, one column per user)."""
    if k != cfg.n_s:
        raise ValueError(f"probe width {k} must equal the input width {cfg.n_s}")
    basis = np.eye(cfg.n_s, dtype=np.complex128)
    return forward(w, basis, cfg).a3


def budget_scaled(f: np.ndarray, p_max: float) -> np.ndarray:
    """Enforce the transmit power budget: scale f down iff ||f||_F^2 > p_max.

    The activation bound keeps each antenna output inside a box but not
    the total radiated power, so a probed network matrix can exceed the
    budget by a few percent; the power amplifier cannot. Under-budget
    matrices pass through unchanged.
    """
    power = float(np.sum(np.abs(f) ** 2))
    if power > p_max:
        return f * np.sqrt(p_max / power)
    return f


def sinr_per_user(channel: ChannelMatrix, f: np.ndarray, noise_power: float) -> np.ndarray:
    """SINR_k = |h_k^H f_k|^2 / (sigma_n^2 + sum_{i != k} |h_k^H f_i|^2)."""
    if noise_power <= 0:
        raise ValueError("noise_power must be positive")
    gains = channel.h.conj().T @ f  # k x k, entry (k, i) = h_k^H f_i
    power = np.abs(gains) ** 2
    signal = np.diag(power)
    interference = power.sum(axis=1) - signal
    return signal / (noise_power + interference)


def spectral_efficiency(sinrs: np.ndarray) -> float:
    """Sum rate sum_k log2(1 + SINR_k) in bits/s/Hz."""
    sinrs = np.asarray(sinrs, dtype=np.float64)
    if np.any(sinrs < 0):
        raise ValueError("SINR values must be nonnegative")
    return float(np.sum(np.log2(1.0 + sinrs)))


def qpsk_map(bits: np.ndarray) -> np.ndarray:
    """Map bit pairs (..., 2) to unit-energy Gray QPSK symbols."""
    bits = np.asarray(bits)
    if bits.shape[-1] != 2:
        raise ValueError("expected bit pairs on the last axis")
    return QPSK_CONSTELLATION[2 * bits[..., 0] + bits[..., 1]]


def qpsk_demap_ml(y: np.ndarray, gain: complex) -> np.ndarray:
    """Per-symbol ML decision: argmin over the constellation of |y - gain*s|^2.

    Returns bit pairs with shape y.shape + (2,). Ties go to the lowest
    constellation index, which keeps decisions deterministic.
    """
    if gain == 0:
        raise ZeroGain("effective gain is zero; symbols are undetectable")
    y = np.atleast_1d(np.asarray(y, dtype=np.complex128))
    dist = np.abs(y[..., None] - gain * QPSK_CONSTELLATION) ** 2
    return QPSK_BITS[np.argmin(dist, axis=-1)]


def ber_sim(
    channel: ChannelMatrix,
    f: np.ndarray,
    noise_power: float,
    n_symbols: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Monte-Carlo per-user QPSK BER through y = H^H F s + n.

    Each user transmits an independent unit-energy stream and detects
    its own scalar observation with gain g_k = (H^H F)_{kk}; other
    users' streams act as noise. noise_power may be 0 for the
    interference-only limit.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    g_eff = channel.h.conj().T @ f  # k x k effective channel
    k = g_eff.shape[0]
    diag = np.diag(g_eff)
    if np.any(diag == 0):
        raise ZeroGain("a user's effective gain is zero")

    errors = np.zeros(k, dtype=np.int64)
    done = 0
    while done < n_symbols:
        block = min(_BER_CHUNK, n_symbols - done)
        bits = rng.integers(0, 2, size=(k, block, 2), dtype=np.int8)
        s = qpsk_map(bits)  # k x block
        noise = np.sqrt(noise_power / 2.0) * (
            rng.standard_normal((k, block)) + 1j * rng.standard_normal((k, block))
        )
        y = g_eff @ s + noise
        for u in range(k):
            decided = qpsk_demap_ml(y[u], diag[u])
            errors[u] += int(np.sum(decided != bits[u]))
        done += block
    return errors / (2.0 * n_symbols)


def ber_sim_network(
    w: NetworkWeights,
    cfg: NetConfig,
    channel: ChannelMatrix,
    noise_power: float,
    n_symbols: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """BER with every symbol vector pushed through the nonlinear network.

    The detection gains are still the probed linear ones, so this
    isolates what the nonlinearity does to symbol superpositions
    compared with the probe-once path.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    probed = probe_effective_precoder(w, cfg, cfg.n_s)
    diag = np.diag(channel.h.conj().T @ probed)
    if np.any(diag == 0):
        raise ZeroGain("a user's effective gain is zero")
    k = cfg.n_s

    errors = np.zeros(k, dtype=np.int64)
    done = 0
    while done < n_symbols:
        block = min(_BER_CHUNK, n_symbols - done)
        bits = rng.integers(0, 2, size=(k, block, 2), dtype=np.int8)
        s = qpsk_map(bits)
        x = forward(w, s, cfg).a3  # n_t x block, nonlinear transmit signal
        noise = np.sqrt(noise_power / 2.0) * (
            rng.standard_normal((k, block)) + 1j * rng.standard_normal((k, block))
        )
        y = channel.h.conj().T @ x + noise
        for u in range(k):
            decided = qpsk_demap_ml(y[u], diag[u])
            errors[u] += int(np.sum(decided != bits[u]))
        done += block
    return errors / (2.0 * n_symbols)


def evaluate_precoder(
    channel: ChannelMatrix,
    f: np.ndarray,
    noise_power: float,
    n_symbols: int | None,
    rng: np.random.Generator | None = None,
    params: dict | None = None,
) -> EvalResult:
    """SINR, spectral efficiency, and (optionally) BER for one matrix."""
    sinr = sinr_per_user(channel, f, noise_power)
    se = spectral_efficiency(sinr)
    ber = None
    ber_avg = None
    if n_symbols:
        if rng is None:
            raise ValueError("BER simulation needs an rng")
        ber = ber_sim(channel, f, noise_power, n_symbols, rng)
        ber_avg = float(np.mean(ber))
    return EvalResult(
        sinr=sinr,
        spectral_efficiency=se,
        ber_per_user=ber,
        ber_avg=ber_avg,
        n_symbols=n_symbols or 0,
        params=dict(params or {}),
    )
