"""Zero-forcing and phased-ZF baselines on one channel realization.

Run: python demos/02_baseline_precoders.py
"""

import numpy as np

from cxprecode import (
    ChannelConfig,
    fro_norm,
    pzf_precoder,
    sample_channel,
    sinr_per_user,
    spectral_efficiency,
    stream_rng,
    zf_precoder,
)

cfg = ChannelConfig(upa_rows=8, upa_cols=4, n_users=4, n_ray=20, normalized=True)
channel = sample_channel(cfg, stream_rng(3, "channel"))
p_max = 4.0  # unit power per user
sigma2 = 4.0  # SNR 0 dB under the p_max / sigma^2 convention

# Full-digital ZF: interference nulled exactly, power met exactly.
zf = zf_precoder(channel, p_max)
cross = channel.h.conj().T @ zf.f
print("ZF")
print(f"  power: {fro_norm(zf.f)**2:.15f} (budget {p_max})")
print(f"  max off-diagonal |h_k^H f_i|: "
      f"{np.max(np.abs(cross - np.diag(np.diag(cross)))):.2e}")

# Phased-ZF: analog co-phasing per user, then a small digital ZF stage.
pzf = pzf_precoder(channel, p_max, n_rf=8)
print("PZF")
print(f"  analog entry modulus: {np.abs(pzf.a_rf[0, 0]):.6f} "
      f"(= 1/sqrt({cfg.n_tx}))")
print(f"  power: {fro_norm(pzf.f)**2:.15f}")

for name, f in (("zf", zf.f), ("pzf", pzf.f)):
    sinr = sinr_per_user(channel, f, sigma2)
    print(f"{name}: per-user SINR {np.round(sinr, 2)}, "
          f"sum rate {spectral_efficiency(sinr):.3f} bits/s/Hz")
