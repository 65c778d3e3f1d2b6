"""Classical baseline precoders: full-digital zero-forcing and phased-ZF.

Zero-forcing is the training target for the network; phased-ZF is the
low-complexity hybrid baseline (analog co-phasing of each user's channel,
then ZF on the small effective channel seen from baseband). Both are
scaled globally so the transmit power equals the budget exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix
from .errors import SingularGram
from .linalg import GRAM_COND_LIMIT, fro_norm, solve_gram


@dataclass(frozen=True)
class Precoder:
    """Explicit transmit matrix f (n_tx x n_users) under a power budget."""

    f: np.ndarray
    p_max: float

    def __post_init__(self):
        if fro_norm(self.f) ** 2 > self.p_max * (1.0 + 1e-9):
            raise ValueError("precoder exceeds its power budget")


@dataclass(frozen=True)
class HybridPrecoder:
    """Analog phase-shifter stage a_rf (constant-modulus entries, 1/sqrt(n_tx))
    followed by a baseband stage d_bb; the radiated matrix is a_rf @ d_bb."""

    a_rf: np.ndarray  # n_tx x n_rf
    d_bb: np.ndarray  # n_rf x n_users
    p_max: float

    def __post_init__(self):
        n_tx = self.a_rf.shape[0]
        if not np.allclose(np.abs(self.a_rf), 1.0 / np.sqrt(n_tx), atol=1e-12):
            raise ValueError("a_rf entries must all have modulus 1/sqrt(n_tx)")
        if fro_norm(self.a_rf @ self.d_bb) ** 2 > self.p_max * (1.0 + 1e-9):
            raise ValueError("hybrid precoder exceeds its power budget")

    @property
    def f(self) -> np.ndarray:
        return self.a_rf @ self.d_bb


def zf_precoder(channel: ChannelMatrix, p_max: float) -> Precoder:
    """Full-digital zero-forcing precoder with exact power p_max.

    F = c * H (H^H H)^{-1} with c > 0 such that ||F||_F^2 = p_max, so
    H^H F = c*I and inter-user interference is exactly zero.
    """
    direction = solve_gram(channel.h)
    c = np.sqrt(p_max) / fro_norm(direction)
    return Precoder(f=c * direction, p_max=p_max)


def pzf_precoder(channel: ChannelMatrix, p_max: float, n_rf: int) -> HybridPrecoder:
    """Phased-ZF: per-user analog co-phasing, then ZF on the effective channel.

    Analog column k (k < n_users) is (1/sqrt(n_tx)) * exp(j*phase(h_k)).
    RF chains beyond n_users stay at zero phase and carry no baseband
    signal. The baseband stage inverts H_eff = H^H A_used and the whole
    product is scaled to power exactly p_max.
    """
    h = channel.h
    n_tx, n_users = h.shape
    if n_rf < n_users:
        raise ValueError(f"n_rf={n_rf} must be >= n_users={n_users}")

    a_rf = np.full((n_tx, n_rf), 1.0 / np.sqrt(n_tx), dtype=np.complex128)
    a_rf[:, :n_users] = np.exp(1j * np.angle(h)) / np.sqrt(n_tx)

    h_eff = h.conj().T @ a_rf[:, :n_users]  # n_users x n_users
    if np.linalg.cond(h_eff) > GRAM_COND_LIMIT:
        raise SingularGram("effective channel of phased-ZF is rank-deficient")
    d_used = np.linalg.inv(h_eff)
    c = np.sqrt(p_max) / fro_norm(a_rf[:, :n_users] @ d_used)

    d_bb = np.zeros((n_rf, n_users), dtype=np.complex128)
    d_bb[:n_users, :] = c * d_used
    return HybridPrecoder(a_rf=a_rf, d_bb=d_bb, p_max=p_max)
