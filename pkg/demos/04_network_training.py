"""Training the network to imitate the ZF precoder of one channel.

Run: python demos/04_network_training.py
"""

from cxprecode import (
    ChannelConfig,
    NetConfig,
    TrainConfig,
    budget_scaled,
    fro_norm,
    probe_effective_precoder,
    sample_channel,
    sinr_per_user,
    spectral_efficiency,
    stream_rng,
    train,
    zf_precoder,
)

ch_cfg = ChannelConfig(upa_rows=8, upa_cols=4, n_users=4, n_ray=20,
                       normalized=True)
channel = sample_channel(ch_cfg, stream_rng(1, "channel"))
net = NetConfig(n_s=4, n_rf=8, n_t=32, p_max=4.0)

weights, history = train(net, TrainConfig(max_epochs=200, seed=1), channel)
print(f"stopped after {history.epochs} epochs ({history.stop_reason})")
print(f"test error: {history.initial_test_cost:.3f} at initialization")
for epoch in (1, 10, 50, 100, 200):
    if epoch <= history.epochs:
        print(f"  epoch {epoch:>3}: {history.test_cost[epoch - 1]:.5f}")

# Probe the trained network with basis inputs to read off its effective
# transmit matrix, then compare against the ZF target.
bzf = zf_precoder(channel, net.p_max).f
probed = probe_effective_precoder(weights, net, net.n_s)
print(f"\nprobe relative error vs ZF target: "
      f"{fro_norm(probed - bzf) / fro_norm(bzf):.3f}")
print(f"probed output power {fro_norm(probed)**2:.3f} vs budget {net.p_max} "
      "(the activation bounds antennas separately, not the total)")

sigma2 = net.p_max  # SNR 0 dB
f_nn = budget_scaled(probed, net.p_max)
for name, f in (("zf", bzf), ("nn", f_nn)):
    se = spectral_efficiency(sinr_per_user(channel, f, sigma2))
    print(f"{name}: sum rate {se:.3f} bits/s/Hz")

# Online adaptation: reuse the weights as the starting point for a new
# channel draw instead of re-initializing.
fresh = sample_channel(ch_cfg, stream_rng(2, "channel"))
_, resumed = train(net, TrainConfig(max_epochs=50, seed=2), fresh, init=weights)
print(f"\nwarm restart on a new channel: {resumed.initial_test_cost:.3f} "
      f"-> {resumed.test_cost[-1]:.5f} in {resumed.epochs} epochs")
