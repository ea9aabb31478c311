"""Exception types shared across the package."""


class OAMError(Exception):
    """Base class for all package errors."""


class AlphabetError(OAMError, ValueError):
    """A topological charge fell outside the logical encoding alphabet."""


class WiringError(OAMError):
    """A gate setup produced a signal charge that does not decode to a bit."""

    def __init__(self, message, gate=None):
        if gate is not None:
            message = f"{gate} gate: {message}"
        super().__init__(message)
        self.gate = gate


class ConfigError(OAMError, ValueError):
    """Malformed or invalid run configuration."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
