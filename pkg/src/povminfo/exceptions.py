"""Exception types raised by povminfo."""


class PovminfoError(Exception):
    """Base class for all povminfo errors."""


class DimensionError(PovminfoError, ValueError):
    """Operand shapes or declared subsystem dimensions do not agree."""


class ValidationError(PovminfoError, ValueError):
    """An operator fails the invariants of the type it is meant to be."""


class ZeroProbabilityError(PovminfoError):
    """Conditioning on a measurement outcome that (numerically) never occurs."""

    def __init__(self, probability):
        super().__init__(f"outcome probability {probability:.3e} is below the 1e-12 cutoff")
        self.probability = probability


class ConfigError(PovminfoError, ValueError):
    """Invalid optimizer or sweep configuration."""
