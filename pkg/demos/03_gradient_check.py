"""Verifying the hand-derived complex gradients with finite differences.

The cost is a real function of complex weights, so each gradient entry
packs d(cost)/d(Re w) + j*d(cost)/d(Im w). Central differences over every
real and imaginary component give an independent reference.

Run: python demos/03_gradient_check.py
"""

import numpy as np

from cxprecode import (
    NetConfig,
    NetworkWeights,
    backward,
    cost,
    forward,
    init_weights,
    sample_cn,
    stream_rng,
)

cfg = NetConfig(n_s=2, n_rf=4, n_t=8, p_max=2.0)
rng = stream_rng(99, "demo")
w = init_weights(cfg, rng)
x = sample_cn(rng, cfg.n_s).ravel()
y = sample_cn(rng, cfg.n_t).ravel()

trace = forward(w, x, cfg)
grads = backward(w, trace, x, y, cfg)

step = 1e-6


def numeric_entry(name, idx, direction):
    def perturbed(sign):
        w1, w2 = w.w1.copy(), w.w2.copy()
        target = w1 if name == "w1" else w2
        target[idx] += sign * direction * step
        out = forward(NetworkWeights(w1=w1, w2=w2), x, cfg)
        return cost(out.a3, y)

    return (perturbed(+1) - perturbed(-1)) / (2 * step)


worst = 0.0
for name, analytic in (("w1", grads.g1), ("w2", grads.g2)):
    for idx in np.ndindex(analytic.shape):
        numeric = numeric_entry(name, idx, 1.0) + 1j * numeric_entry(name, idx, 1.0j)
        err = abs(analytic[idx] - numeric) / max(abs(numeric), 1e-12)
        worst = max(worst, err)
print(f"max relative gradient error vs finite differences: {worst:.2e}")
print("entries checked:", grads.g1.size + grads.g2.size,
      "(real + imaginary directions each)")
