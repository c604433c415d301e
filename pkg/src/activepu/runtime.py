"""Constants modes, resource caps and run traces shared by the learners."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

from .errors import CapExceeded


@dataclass(frozen=True)
class Constants:
    """The unspecified constants of the sample-size formulas plus scale knobs.

    ``practical`` mode sets M1 = M2 = M3 = 1.  ``theory`` mode uses whatever
    values the caller supplies; there are no defaults to fall back on.
    """

    mode: str = "practical"
    M1: float = 1.0
    M2: float = 1.0
    M3: float = 1.0
    k_scale: float = 1.0
    sample_scale: float = 1.0
    lambda_scale: float = 1.0

    def __post_init__(self):
        if self.mode not in ("practical", "theory"):
            raise ValueError(f"unknown constants mode {self.mode!r}")
        for name in ("M1", "M2", "M3", "k_scale", "sample_scale", "lambda_scale"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Caps:
    unlabeled_draws: int = 10_000_000
    label_requests: int = 1_000_000
    wall_seconds: float | None = 60.0


class Budget:
    """Counts unlabeled draws (rejection proposals included) against the caps."""

    def __init__(self, caps: Caps):
        self.caps = caps
        self.unlabeled = 0
        self.started = time.monotonic()

    def remaining_draws(self) -> int:
        return max(self.caps.unlabeled_draws - self.unlabeled, 0)

    def draw(self, n: int) -> None:
        if self.unlabeled + n > self.caps.unlabeled_draws:
            used = self.unlabeled + n
            self.unlabeled = min(used, self.caps.unlabeled_draws)
            raise CapExceeded("unlabeled-draws", self.caps.unlabeled_draws, used)
        self.unlabeled += n
        self.check_time()

    def check_time(self) -> None:
        if self.caps.wall_seconds is None:
            return
        spent = time.monotonic() - self.started
        if spent > self.caps.wall_seconds:
            raise CapExceeded("wall-time", self.caps.wall_seconds, round(spent, 3))


@dataclass
class TraceEvent:
    kind: str
    t: int
    data: dict = field(default_factory=dict)


@dataclass
class RunTrace:
    events: list = field(default_factory=list)

    def add(self, kind: str, t: int, **data) -> None:
        self.events.append(TraceEvent(kind, t, data))

    def of(self, kind: str) -> list:
        return [e for e in self.events if e.kind == kind]

    def __len__(self):
        return len(self.events)


@dataclass
class RunResult:
    """Outcome of one learner run, successful or not."""

    algorithm: str
    hypothesis: object
    ledger: object
    trace: RunTrace
    unlabeled_draws: int = 0
    outcome: str = "ok"
    violations: list = field(default_factory=list)
    if_branches: int | None = None
    else_branches: int | None = None
    estrate_value: float | None = None
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.outcome == "ok"

    def flag(self, name: str) -> None:
        if name not in self.violations:
            self.violations.append(name)


def failure_name(exc) -> str:
    if isinstance(exc, CapExceeded):
        return f"failure(cap:{exc.kind})"
    return f"failure({type(exc).__name__})"


def growth_term(vc_dim: int, n: int) -> float:
    """``d ln(2n/d)``, taken as its limit 0 when ``d = 0``."""
    return vc_dim * math.log(2 * n / vc_dim) if vc_dim > 0 else 0.0
