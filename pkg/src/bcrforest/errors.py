"""Exception types shared across the package."""


class BcrError(Exception):
    """Base class for all package-specific errors."""


class FormatError(BcrError):
    """A text artifact (instance, solution, certificate, forest) failed to parse."""


class InstanceError(BcrError):
    """An instance violates a structural requirement (unknown vertex, bad cost, ...)."""


class InfeasibleInput(BcrError):
    """An operation that requires a feasible solution was handed an infeasible one."""


class LimitInfeasible(BcrError):
    """A flow of the requested value does not exist in the network."""


class NoSupport(BcrError):
    """The solution carries no mass anywhere, so no densest subgraph exists."""


class NotHalfIntegral(BcrError):
    """An operation that requires a half-integral solution was handed something else."""


class TooSmall(BcrError):
    """A vertex set below the minimum size for the requested quantity."""


class TooLarge(BcrError):
    """An exhaustive operation was handed more support than it enumerates."""


class NotSteinerTree(BcrError):
    """The demand graph needs exactly one nontrivial component and has none or several."""


class FlowShortfall(BcrError):
    """The reorientation flow demanded by the tree transform could not be routed."""


class RatioExceeded(BcrError):
    """A rounded forest exceeded the guaranteed cost ratio on a half-integral input."""


class SizeExceeded(BcrError):
    """The LP instance exceeds the configured variable cap."""


class GenerationFailed(BcrError):
    """A random generator exhausted its bounded retries."""


class UnknownEdge(BcrError):
    """An edge set refers to an edge the instance does not have."""


class IterationCapExceeded(BcrError):
    """The cutting-plane loop hit its round cap; carries value and solution."""

    def __init__(self, message: str, value=None, solution=None) -> None:
        super().__init__(message)
        self.value = value
        self.solution = solution


class SolverError(BcrError):
    """Internal solver invariant failed (should not happen on valid inputs)."""
