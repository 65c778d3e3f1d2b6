"""Exception types shared across the package."""


class SingularGram(Exception):
    """Gram matrix of the channel is numerically singular.

    Raised when the condition estimate of H^H H (or of an effective
    channel) exceeds the safety threshold, which signals degenerate user
    geometry such as duplicated channel columns.
    """


class ShapeMismatch(ValueError):
    """Array dimensions are inconsistent with the network configuration."""


class DivergenceDetected(Exception):
    """Test error blew up during training (bad learning rate)."""


class ZeroGain(ValueError):
    """ML demapping requested with a zero effective channel gain."""


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""
