"""Exception types shared across the package."""


class TopoCtrlError(Exception):
    """Base class for all errors raised by topoctrl."""


class ConfigError(TopoCtrlError, ValueError):
    """Invalid generation or experiment configuration."""


class UnconnectableNetwork(TopoCtrlError):
    pass


class DegenerateGeometry(TopoCtrlError):
    """Two nodes could not be separated after the resampling cap."""


class AssumptionViolation(TopoCtrlError):
    """An algorithm was run on a network that breaks its model assumptions."""


class DisconnectedInput(TopoCtrlError):
    pass


class DisconnectedCover(TopoCtrlError):
    """A cover graph lost connectivity; signals an algorithm bug."""


class NoPath(TopoCtrlError):
    pass


class NetworkFormatError(TopoCtrlError, ValueError):
    """A serialized network failed validation on load."""


class TrialError(TopoCtrlError):
    """Wraps a failure inside one Monte-Carlo trial with its provenance."""

    def __init__(self, message, seed, index):
        super().__init__(f"{message} (seed={seed}, trial={index})")
        self.seed = seed
        self.index = index
