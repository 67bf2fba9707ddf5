"""
Exception hierarchy shared by every package of the laboratory.

All errors derive from HardEdgeError, itself a ValueError, so callers that only
care about "bad input or failed numerics" can keep catching ValueError.
"""

import inspect
from typing import Any, Optional


def error_message(owner: Any, detail: str, function_name: Optional[str] = None) -> str:
    """
    Format an error message naming the owning class (or module) and the calling function.

    :param owner: Class, instance or plain string naming where the error was generated.
    :param detail: Human readable description of what went wrong.
    :param function_name: Overrides the caller name read from the stack.
    :return: The formatted message.
    """
    if isinstance(owner, str):
        owner_name = owner
    elif inspect.isclass(owner):
        owner_name = owner.__name__
    else:
        owner_name = type(owner).__name__

    if function_name is None:
        frame = inspect.currentframe()
        caller = frame.f_back if frame is not None else None
        function_name = caller.f_code.co_name if caller is not None else "<unknown>"

    return f"[Error] Error generated in {owner_name}.{function_name}. Message: {detail}"


class HardEdgeError(ValueError):
    pass


class PoleError(HardEdgeError):
    pass


class NonConvergence(HardEdgeError):
    pass


class ContourNonConvergence(NonConvergence):
    pass


class EndpointSingularity(HardEdgeError):
    pass


class DomainError(HardEdgeError):
    pass


class AxisError(DomainError):
    pass


class BranchCutError(DomainError):
    pass


class CutError(DomainError):
    pass


class SectorError(HardEdgeError):
    pass


class RayError(HardEdgeError):
    pass


class NotOneCut(HardEdgeError):
    pass


class FitFailure(HardEdgeError):
    pass


class SingularMoment(HardEdgeError):
    pass


class DegreeTooLow(HardEdgeError):
    pass


class PrecisionLoss(HardEdgeError):
    pass


class ConfigError(HardEdgeError):
    pass


class IllConditioned(UserWarning):
    """Moment matrix minors span more than half of the working mantissa."""
