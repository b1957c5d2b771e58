"""Exception hierarchy and the violation record used by all checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Violation:
    """A failed law together with the binding that witnesses the failure.

    ``law`` is a short identifier such as ``"I6"``, ``"PF2"`` or
    ``"BrokenCoherence"``; ``witness`` maps variable names to the offending
    values; ``detail`` is a human readable one-liner.
    """

    law: str
    witness: dict[str, Any] = field(default_factory=dict)
    detail: str = ""

    def __str__(self) -> str:
        bind = ", ".join(f"{k}={v}" for k, v in self.witness.items())
        text = f"{self.law}({bind})" if bind else self.law
        return f"{text}: {self.detail}" if self.detail else text


class IBSLError(Exception):
    """Base class for every error raised by the package."""


class ElementOutOfRange(IBSLError, ValueError):
    pass


class IndexOutOfRange(IBSLError, ValueError):
    pass


class CapacityExceeded(IBSLError):
    pass


class HomMismatch(IBSLError, ValueError):
    pass


class NotAHomomorphism(IBSLError, ValueError):
    def __init__(self, violation: Violation):
        super().__init__(str(violation))
        self.violation = violation


class InvalidMeasure(IBSLError, ValueError):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


class InvalidSemilattice(IBSLError, ValueError):
    def __init__(self, violation: Violation):
        super().__init__(str(violation))
        self.violation = violation


class InvalidSystem(IBSLError, ValueError):
    def __init__(self, violation: Violation):
        super().__init__(str(violation))
        self.violation = violation


class MalformedElement(IBSLError, ValueError):
    pass


class NotIBSL(IBSLError, ValueError):
    def __init__(self, violation: Violation):
        super().__init__(f"not an involutive bisemilattice: {violation}")
        self.violation = violation


class InternalInconsistency(IBSLError, AssertionError):
    """Two independent routes disagreed; never expected on valid input."""


class TrivialComponent(IBSLError):
    pass


class HypothesesUnmet(IBSLError):
    pass


class BadChooser(IBSLError, ValueError):
    pass


class BadRange(IBSLError, ValueError):
    pass


class DocumentError(IBSLError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"{line}:{column}: " if line else ""
        super().__init__(f"{where}{message}")
        self.line = line
        self.column = column
        self.message = message


class DocumentSyntaxError(DocumentError):
    pass


class UnresolvedReference(DocumentError):
    pass


class DuplicateName(DocumentError):
    pass


class InvalidState(IBSLError, ValueError):
    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid state")
