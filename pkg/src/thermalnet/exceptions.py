"""Exception hierarchy shared by every thermalnet module."""


class ThermalNetworkError(Exception):
    """Base class for all errors raised by thermalnet."""


class ParameterError(ThermalNetworkError, ValueError):
    """A numeric argument is outside its allowed range."""


class ConfigurationError(ThermalNetworkError):
    """A packet parameter required by the operation is absent."""


class NodeOverflowError(ThermalNetworkError):
    """Heating would push a node past its critical temperature."""

    def __init__(self, node_id, count, capacity):
        self.node_id = node_id
        self.count = count
        self.capacity = capacity
        super().__init__(
            f"node {node_id!r} can admit {capacity} packet(s), asked for {count}"
        )


class NetworkStructureError(ThermalNetworkError, ValueError):
    """The graph violates a structural invariant (dangling edge, self-loop...)."""


class UnboundedFlowError(ThermalNetworkError):
    """Some s-t path avoids every capacitated node, so flow has no limit."""


class SizeBoundError(ThermalNetworkError):
    """An exponential oracle was asked to run above its node bound."""

    def __init__(self, size, bound):
        self.size = size
        self.bound = bound
        super().__init__(f"{size} internal nodes exceeds oracle bound {bound}")


class IndeterminateOnsetError(ThermalNetworkError):
    """Two cuts tie for minimum cardinality, so no steady cut is defined."""

    def __init__(self, cuts):
        self.cuts = cuts
        super().__init__(
            "minimum-cardinality cut is not unique: "
            + ", ".join("{" + ",".join(c) + "}" for c in cuts)
        )


class UnreachableTargetError(ThermalNetworkError):
    """A target node lies on no s-t walk of the functional network."""

    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__(f"node {node_id!r} lies on no s-t walk")


class InsufficientBudgetError(ThermalNetworkError):
    """The cooling capacity beta is below what the plan needs."""

    def __init__(self, beta, required):
        self.beta = beta
        self.required = required
        super().__init__(f"beta={beta} is below the required minimum {required}")


class PlanVerificationError(ThermalNetworkError):
    """An executed cooling plan did not restore the original max flow."""

    def __init__(self, restored, expected, plan=None):
        self.restored = restored
        self.expected = expected
        self.plan = plan
        super().__init__(f"plan restored flow {restored}, expected {expected}")


class ParseError(ThermalNetworkError, ValueError):
    """Malformed or semantically invalid network file."""

    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
