"""Exception types shared across the package."""

from __future__ import annotations


class ActivePUError(Exception):
    """Base class for every error raised by this package."""


class EmptyVersionSpace(ActivePUError):
    """A version-space operation produced (or was handed) an empty set."""


class RejectionBudgetExceeded(ActivePUError):
    """Rejection sampling hit its proposal cap before collecting enough draws."""

    def __init__(self, proposals: int, accepted: int = 0, needed: int = 0):
        self.proposals = proposals
        self.accepted = accepted
        self.needed = needed
        super().__init__(
            f"rejection sampling gave up after {proposals} proposals "
            f"({accepted}/{needed} accepted)"
        )


class CapExceeded(ActivePUError):
    """A per-trial resource cap was reached; reported as a failure row."""

    def __init__(self, kind: str, limit: float, used: float):
        self.kind = kind
        self.limit = limit
        self.used = used
        super().__init__(f"{kind} cap exceeded: used {used} of {limit}")


class NoConsistentHypothesis(ActivePUError):
    """No hypothesis of the class predicts 1 on every given positive."""


class UnboundedCoefficient(ActivePUError):
    """Grid estimate of the disagreement coefficient exceeds the ceiling."""

    def __init__(self, estimate: float, ceiling: float):
        self.estimate = estimate
        self.ceiling = ceiling
        super().__init__(
            f"disagreement coefficient estimate {estimate:.4g} exceeds ceiling {ceiling:.4g}"
        )


class DivisionByEmptyP(ActivePUError):
    """EstRate exited with an empty guaranteed-positive set."""


class ConfigError(ActivePUError):
    """Raised by the config loader; carries every problem found, not just one."""

    def __init__(self, errors: list):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


class ParseError(ActivePUError):
    def __init__(self, line: int | None, message: str):
        self.line = line
        self.message = message
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ValidationError(ActivePUError):
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")
