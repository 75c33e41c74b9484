"""Exception types shared across the package."""


class CongestLabError(Exception):
    """Base class for all package errors."""


class SameLayerPair(CongestLabError):
    """A pair query involved two vertices of the same layer."""


class OutOfRange(CongestLabError):
    """A vertex index exceeds the layer size."""


class RoundOutOfRange(CongestLabError):
    """A round index outside [1, r] was requested."""


class InfeasibleParams(CongestLabError):
    """A parameter schedule cannot support the requested sampling step."""


class ZeroProbabilityCondition(CongestLabError):
    """Rejection sampling exhausted its attempt cap without an acceptance."""


class EmptyOrRareSupport(CongestLabError):
    """A conditional sampler found no consistent completion within its cap."""

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class SupportTooLarge(CongestLabError):
    """An exact enumeration would exceed the configured outcome cap."""


class CapExceeded(CongestLabError):
    """A brute-force search space exceeds the configured cap."""


class BandwidthViolation(CongestLabError):
    """A protocol emitted a message longer than its bandwidth."""


class ChannelViolation(CongestLabError):
    """A protocol addressed a pair with no channel available this round."""


class RegimeMismatch(CongestLabError):
    """Protocol round count does not match the graph's round regime."""


class InvalidDistribution(CongestLabError):
    """Probabilities are negative or do not sum to one."""


class InvalidCoordinate(CongestLabError):
    """A joint-table coordinate name does not exist."""


class PremiseViolated(CongestLabError):
    """A generated test table fails its declared independence premise."""
