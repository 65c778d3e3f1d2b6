"""Channel model walkthrough: array responses, fading, channel statistics.

Run: python demos/01_channel_geometry.py
"""

import numpy as np

from cxprecode import (
    ChannelConfig,
    channel_column,
    large_scale_fading,
    sample_channel,
    stream_rng,
    upa_response,
)

# An 8x4 planar array (32 antennas) serving 4 single-antenna users.
cfg = ChannelConfig(upa_rows=8, upa_cols=4, n_users=4, n_ray=20)
print(f"array: {cfg.upa_rows}x{cfg.upa_cols} = {cfg.n_tx} antennas, "
      f"spacing = {cfg.spacing / cfg.wavelength:.2f} wavelengths")

# Array responses are unit vectors with constant per-antenna modulus.
u = upa_response(azimuth=0.8, elevation=1.3, cfg=cfg)
print(f"response norm: {np.linalg.norm(u):.15f}")
print(f"entry modulus (all equal): {np.abs(u[0]):.6f} = 1/sqrt({cfg.n_tx})")

# Large-scale fading: log-normal shadowing over distance path loss.
rng = stream_rng(2024, "fading")
for dist in (20.0, 50.0, 100.0):
    beta = np.mean([large_scale_fading(dist, cfg, rng) for _ in range(2000)])
    print(f"mean large-scale gain at {dist:5.1f} m: {beta:.3e}")

# One full channel draw; every column is a weighted sum of ray responses
# and can be rebuilt exactly from its stored components.
ch = sample_channel(cfg, stream_rng(7, "channel"))
print(f"\nchannel: {ch.h.shape[0]}x{ch.h.shape[1]}, "
      f"column energies {[f'{np.linalg.norm(ch.h[:, k])**2:.2e}' for k in range(4)]}")
rebuilt = channel_column(ch.paths[0], ch.beta[0], cfg)
print(f"reconstruction error of column 0: "
      f"{np.max(np.abs(rebuilt - ch.h[:, 0])):.2e}")

# With normalized=True the large-scale coefficients are pinned to 1,
# which keeps sweep results free of absolute-scale nuisance.
norm_cfg = ChannelConfig(upa_rows=8, upa_cols=4, n_users=4, n_ray=20,
                         normalized=True)
norm_ch = sample_channel(norm_cfg, stream_rng(7, "channel"))
energy = np.mean(np.sum(np.abs(norm_ch.h) ** 2, axis=0))
print(f"\nnormalized channel mean column energy: {energy:.1f} "
      f"(antenna count is {cfg.n_tx})")
