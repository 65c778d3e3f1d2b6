"""Geometric multipath mmWave downlink channel with a UPA at the base station.

Each single-antenna user k sees

    h_k = sqrt(N_T * beta_k / N_ray) * sum_i rho_i * u(psi_i, theta_i)

with per-ray complex gains rho_i ~ CN(0, sigma_ray^2), uniform departure
angles, and log-normal shadowing on top of distance path loss. Angle and
distance distributions are configurable defaults (uniform azimuth/elevation,
distances uniform on [20, 100] m) since only the array response and the
fading law are pinned down by the model itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import sample_cn


@dataclass(frozen=True)
class ChannelConfig:
    """Geometry and fading parameters of one downlink cell.

    The transmit array is an upa_rows x upa_cols rectangular grid, so
    n_tx = upa_rows * upa_cols. `spacing` defaults to half the wavelength;
    only the ratio spacing/wavelength enters the array response.
    With `normalized` set, large-scale fading is forced to beta_k = 1,
    which removes absolute scale where it is a nuisance (unit tests,
    spectral-efficiency and BER sweeps).
    """

    upa_rows: int = 8
    upa_cols: int = 4
    n_users: int = 4
    n_ray: int = 20
    wavelength: float = 0.0107  # meters (28 GHz carrier)
    spacing: float | None = None  # None -> wavelength / 2
    pathloss_exp: float = 3.0
    dist_range: tuple[float, float] = (20.0, 100.0)
    shadow_var_db: float = 9.2  # variance of the dB-domain Gaussian
    ray_gain_var: float = 1.0
    normalized: bool = False

    def __post_init__(self):
        if self.upa_rows < 1 or self.upa_cols < 1:
            raise ValueError("UPA grid must be at least 1x1")
        if self.n_users < 1:
            raise ValueError("n_users must be >= 1")
        if self.n_ray < 1:
            raise ValueError("n_ray must be >= 1")
        if self.dist_range[0] <= 0 or self.dist_range[1] < self.dist_range[0]:
            raise ValueError("dist_range must satisfy 0 < min <= max")
        if self.spacing is None:
            object.__setattr__(self, "spacing", self.wavelength / 2.0)

    @property
    def n_tx(self) -> int:
        return self.upa_rows * self.upa_cols


@dataclass(frozen=True)
class PathComponent:
    """One multipath ray: complex gain and departure angles in radians."""

    gain: complex
    azimuth: float  # in [0, 2*pi)
    elevation: float  # in [0, pi)


@dataclass(frozen=True)
class ChannelMatrix:
    """Channel realization H (n_tx x n_users) plus everything that built it.

    Columns are reproducible bit-exactly from (paths, beta) through
    `channel_column`, which is also how they were assembled.
    """

    h: np.ndarray
    cfg: ChannelConfig
    beta: np.ndarray  # per-user large-scale coefficient
    paths: tuple[tuple[PathComponent, ...], ...] = field(repr=False)

    @property
    def n_tx(self) -> int:
        return self.h.shape[0]

    @property
    def n_users(self) -> int:
        return self.h.shape[1]


def upa_response(azimuth: float, elevation: float, cfg: ChannelConfig) -> np.ndarray:
    """Unit-norm array response of the upa_rows x upa_cols planar array.

    Flat index n = l * upa_cols + r (row-major over the grid); entry
    (1/sqrt(N_T)) * exp(j * (2*pi/lambda) * d * (l sin(az) sin(el) + r cos(el))).
    """
    l = np.arange(cfg.upa_rows)[:, None]
    r = np.arange(cfg.upa_cols)[None, :]
    phase = (2.0 * np.pi / cfg.wavelength) * cfg.spacing * (
        l * np.sin(azimuth) * np.sin(elevation) + r * np.cos(elevation)
    )
    return np.exp(1j * phase).ravel() / np.sqrt(cfg.n_tx)


def large_scale_fading(dist: float, cfg: ChannelConfig, rng: np.random.Generator) -> float:
    """Large-scale coefficient beta = zeta / dist^gamma.

    zeta is log-normal shadowing: 10*log10(zeta) ~ N(0, shadow_var_db),
    so its median is exactly 1.
    """
    if dist <= 0:
        raise ValueError("distance must be positive")
    shadow_db = rng.normal(0.0, np.sqrt(cfg.shadow_var_db))
    zeta = 10.0 ** (shadow_db / 10.0)
    return float(zeta / dist**cfg.pathloss_exp)


def channel_column(
    paths: tuple[PathComponent, ...], beta: float, cfg: ChannelConfig
) -> np.ndarray:
    """Assemble one user's channel vector from its stored ray components."""
    scale = np.sqrt(cfg.n_tx * beta / len(paths))
    col = np.zeros(cfg.n_tx, dtype=np.complex128)
    for p in paths:
        col += p.gain * upa_response(p.azimuth, p.elevation, cfg)
    return scale * col


def sample_channel(cfg: ChannelConfig, rng: np.random.Generator) -> ChannelMatrix:
    """Draw one channel realization.

    Per user: a distance (unless cfg.normalized), shadowing, then n_ray
    rays with CN(0, ray_gain_var) gains, azimuth ~ U[0, 2pi) and
    elevation ~ U[0, pi).
    """
    h = np.zeros((cfg.n_tx, cfg.n_users), dtype=np.complex128)
    beta = np.ones(cfg.n_users)
    all_paths = []
    for k in range(cfg.n_users):
        if not cfg.normalized:
            dist = rng.uniform(*cfg.dist_range)
            beta[k] = large_scale_fading(dist, cfg, rng)
        gains = np.sqrt(cfg.ray_gain_var) * sample_cn(rng, cfg.n_ray).ravel()
        azimuths = rng.uniform(0.0, 2.0 * np.pi, cfg.n_ray)
        elevations = rng.uniform(0.0, np.pi, cfg.n_ray)
        user_paths = tuple(
            PathComponent(gain=complex(g), azimuth=float(a), elevation=float(e))
            for g, a, e in zip(gains, azimuths, elevations)
        )
        h[:, k] = channel_column(user_paths, beta[k], cfg)
        all_paths.append(user_paths)
    return ChannelMatrix(h=h, cfg=cfg, beta=beta, paths=tuple(all_paths))
