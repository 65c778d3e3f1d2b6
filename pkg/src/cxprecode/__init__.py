"""Neural-network hybrid precoding testbench for mmWave multiuser MIMO.

Library layout:

- linalg: complex matrix helpers and seeded random streams
- channel: geometric multipath channel with a planar transmit array
- precoding: zero-forcing and phased-ZF baselines
- network: split-complex two-layer network, gradients, momentum SGD
- training: ZF-target training loop
- evaluate: SINR / spectral efficiency / QPSK BER
- cli: batch experiments (train, sweeps, eval) writing JSON + CSV
"""

from .channel import (
    ChannelConfig,
    ChannelMatrix,
    PathComponent,
    channel_column,
    large_scale_fading,
    sample_channel,
    upa_response,
)
from .errors import (
    ConfigError,
    DivergenceDetected,
    ShapeMismatch,
    SingularGram,
    ZeroGain,
)
from .evaluate import (
    EvalConfig,
    EvalResult,
    ber_sim,
    budget_scaled,
    ber_sim_network,
    evaluate_precoder,
    probe_effective_precoder,
    qpsk_demap_ml,
    qpsk_map,
    sinr_per_user,
    spectral_efficiency,
)
from .linalg import fro_norm, sample_cn, solve_gram, stream_rng
from .network import (
    ForwardTrace,
    Gradients,
    NetConfig,
    NetworkWeights,
    Velocity,
    backward,
    cost,
    forward,
    init_weights,
    isgm,
    isgm_prime,
    momentum_step,
    split_activation,
)
from .precoding import HybridPrecoder, Precoder, pzf_precoder, zf_precoder
from .training import (
    Dataset,
    TrainConfig,
    TrainHistory,
    generate_dataset,
    test_error,
    train,
)

__version__ = "0.1.0"
