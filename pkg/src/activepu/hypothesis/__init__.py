"""Hypothesis classes with exact version-space algebra."""

from __future__ import annotations

import re

from .base import (
    ZERO,
    Box,
    ClosedInterval,
    Constraint,
    LabeledSample,
    Threshold,
    VersionSpace,
    max_count_within,
    rho_sample,
)
from .coefficient import ThetaResult, disagreement_coefficient
from .finite import FiniteClass, FiniteSpace
from .interval import IntervalClass, IntervalSpace
from .threshold import ThresholdClass, ThresholdSpace

_SPEC = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$")


def parse_kwargs(body: str | None) -> dict[str, str]:
    out: dict[str, str] = {}
    if not body or not body.strip():
        return out
    for part in body.split(","):
        if "=" not in part:
            raise ValueError(f"expected key=value, got {part.strip()!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_class(spec: str):
    """Build a class from ``threshold``, ``interval(w_min=0.1)`` or ``finite(file=path)``."""
    m = _SPEC.match(spec)
    if not m:
        raise ValueError(f"cannot parse class spec {spec!r}")
    name, kw = m.group(1), parse_kwargs(m.group(2))
    try:
        if name == "threshold":
            _only(kw, {"lo", "hi"})
            return ThresholdClass(**{k: float(v) for k, v in kw.items()})
        if name == "interval":
            _only(kw, {"w_min", "lo", "hi"})
            if "w_min" not in kw:
                raise ValueError("interval class needs w_min")
            return IntervalClass(**{k: float(v) for k, v in kw.items()})
        if name == "finite":
            _only(kw, {"file"})
            if "file" not in kw:
                raise ValueError("finite class needs file=path")
            return FiniteClass.from_file(kw["file"])
    except TypeError as exc:
        raise ValueError(str(exc)) from None
    raise ValueError(f"unknown class kind {name!r}")


def parse_hypothesis(hclass, text: str):
    """Target rule inside ``hclass``: ``a`` / ``a, b`` / ``#index`` for finite classes."""
    text = text.strip()
    if isinstance(hclass, FiniteClass):
        if not text.startswith("#"):
            raise ValueError("finite-class targets are given as #index")
        idx = int(text[1:])
        if not 0 <= idx < len(hclass):
            raise ValueError(f"index {idx} outside class of size {len(hclass)}")
        return hclass.members[idx]
    vals = [float(v) for v in text.replace("(", " ").replace(")", " ").replace(",", " ").split()]
    if isinstance(hclass, ThresholdClass) and len(vals) == 1:
        return hclass.hypothesis(vals[0])
    if isinstance(hclass, IntervalClass) and len(vals) == 2:
        return hclass.hypothesis(*vals)
    raise ValueError(f"cannot read target {text!r} for {hclass}")


def _only(kw, allowed):
    extra = set(kw) - allowed
    if extra:
        raise ValueError(f"unknown parameter(s) {sorted(extra)}")


__all__ = [
    "ZERO", "Box", "ClosedInterval", "Constraint", "LabeledSample", "Threshold",
    "VersionSpace", "max_count_within", "rho_sample", "ThetaResult",
    "disagreement_coefficient", "FiniteClass", "FiniteSpace", "IntervalClass",
    "IntervalSpace", "ThresholdClass", "ThresholdSpace", "parse_class", "parse_hypothesis",
]
