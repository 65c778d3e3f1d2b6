"""QPSK bit-error-rate simulation against the analytic AWGN curve.

Run: python demos/05_qpsk_ber.py
"""

import math

import numpy as np

from cxprecode import (
    ChannelConfig,
    ber_sim,
    qpsk_demap_ml,
    qpsk_map,
    sample_channel,
    stream_rng,
    zf_precoder,
)
from cxprecode.channel import ChannelMatrix


def q_function(x):
    return 0.5 * math.erfc(x / math.sqrt(2.0))


# Round trip through the Gray constellation.
bits = np.array([[0, 0], [0, 1], [1, 0], [1, 1]])
symbols = qpsk_map(bits)
print("constellation:", np.round(symbols, 3))
print("round trip ok:", np.array_equal(qpsk_demap_ml(2.0 * symbols, 2.0), bits))

# Single-user AWGN: empirical BER vs Q(sqrt(SNR)).
flat_cfg = ChannelConfig(upa_rows=1, upa_cols=1, n_users=1, n_ray=1,
                         normalized=True)
h = ChannelMatrix(h=np.array([[1.0 + 0j]]), cfg=flat_cfg,
                  beta=np.ones(1), paths=((),))
print("\nsingle user, 200k symbols per point:")
print(f"{'SNR dB':>7} {'simulated':>11} {'analytic':>11}")
for snr_db in (0.0, 4.0, 7.0):
    snr = 10 ** (snr_db / 10)
    f = np.array([[np.sqrt(snr) + 0j]])
    ber = ber_sim(h, f, 1.0, 200_000, stream_rng(int(snr_db), "ber"))
    print(f"{snr_db:7.1f} {ber[0]:11.3e} {q_function(math.sqrt(snr)):11.3e}")

# Multiuser: ZF keeps every stream clean, so errors come from noise only.
cfg = ChannelConfig(upa_rows=8, upa_cols=4, n_users=3, n_ray=20, normalized=True)
channel = sample_channel(cfg, stream_rng(5, "channel"))
f = zf_precoder(channel, 3.0).f
for sigma2 in (6.0, 2.4):
    ber = ber_sim(channel, f, sigma2, 100_000, stream_rng(9, "ber"))
    print(f"\n3-user ZF, noise {sigma2}: per-user BER {np.round(ber, 5)}")
