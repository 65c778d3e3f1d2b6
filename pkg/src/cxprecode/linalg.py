"""Complex matrix helpers and seeded random streams.

Matrices are plain numpy complex128 arrays in C (row-major) order; this
module only adds the few operations the rest of the package builds on:
reproducible per-purpose random streams, circularly-symmetric Gaussian
sampling, the Frobenius norm, and the Gram solve behind zero-forcing.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .errors import SingularGram

# Condition number of H^H H above which the user geometry is treated as
# degenerate (double precision keeps ~16 digits; 1e12 leaves headroom).
GRAM_COND_LIMIT = 1e12


def stream_id(name: str) -> int:
    """Stable 63-bit integer label for a named random stream."""
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") & (2**63 - 1)


def stream_rng(seed: int, stream: int | str) -> np.random.Generator:
    """Independent generator for (seed, stream).

    The same (seed, stream) pair always reproduces the same sequence;
    distinct streams are statistically independent. Streams may be named
    ("channel", "weights", "data", "noise", ...) or numbered.
    """
    if isinstance(stream, str):
        stream = stream_id(stream)
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(int(stream),))
    return np.random.default_rng(seq)


def sample_cn(rng: np.random.Generator, n: int, m: int = 1) -> np.ndarray:
    """n-by-m matrix of i.i.d. CN(0, 1) entries.

    Unit total variance: real and imaginary parts are independent
    N(0, 1/2), so E|x|^2 = 1 and E||x||^2 equals the entry count.
    """
    re = rng.standard_normal((n, m))
    im = rng.standard_normal((n, m))
    return (re + 1j * im) / np.sqrt(2.0)


def fro_norm(m: np.ndarray) -> float:
    """Frobenius norm sqrt(sum |entry|^2), for any array shape."""
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def solve_gram(h: np.ndarray) -> np.ndarray:
    """Return H (H^H H)^{-1} for a tall full-column-rank H.

    This is the unnormalized zero-forcing direction matrix: the result X
    satisfies H^H X = I. Solved through the Hermitian normal equations
    with a pivoted LU factorization.

    Raises SingularGram when cond(H^H H) exceeds GRAM_COND_LIMIT.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] < h.shape[1]:
        raise ValueError(f"expected a tall matrix, got shape {h.shape}")
    gram = h.conj().T @ h
    if np.linalg.cond(gram) > GRAM_COND_LIMIT:
        raise SingularGram(
            f"condition of H^H H exceeds {GRAM_COND_LIMIT:.0e}; "
            "channel columns are (near-)dependent"
        )
    # X = H G^{-1}; G is Hermitian, so X^H = G^{-1} H^H.
    return np.linalg.solve(gram, h.conj().T).conj().T
