"""Disagreement coefficient: analytic where known, otherwise a grid sup."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UnboundedCoefficient
from .finite import FiniteClass, theta_exact

DEFAULT_CEILING = 1e3


@dataclass(frozen=True)
class ThetaResult:
    value: float  # max(raw, 1), what the algorithms use
    raw: float
    mode: str  # "analytic", "grid" or "exact"
    resolution: int | None = None
    target_centered: float | None = None

    def describe(self) -> str:
        grid = f", grid={self.resolution}x{self.resolution}" if self.resolution else ""
        s = f"theta={self.value:.6g} (raw {self.raw:.6g}, {self.mode}{grid})"
        if self.target_centered is not None:
            s += f"; centered at target: {self.target_centered:.6g}"
        return s


def disagreement_coefficient(c, d, mode: str = "analytic", resolution: int = 100,
                             ceiling: float = DEFAULT_CEILING, target=None) -> ThetaResult:
    """sup over h in the class and r in (0, 1] of Delta(B(h, r)) / r.

    ``mode="analytic"`` falls back to the grid when no closed form is known
    for the (class, distribution) pair.  Finite classes are always computed
    exactly over all critical radii.  With ``target`` given, the sup
    restricted to balls centered at the target is reported alongside.
    """
    if mode not in ("analytic", "grid"):
        raise ValueError(f"unknown theta mode {mode!r}")
    if resolution < 100:
        raise ValueError("grid resolution must be at least 100")
    centered = None
    if isinstance(c, FiniteClass):
        raw, used, res = theta_exact(c, d), "exact", None
        if target is not None:
            centered = _finite_centered(c, d, target)
    else:
        raw = c.theta_analytic(d) if mode == "analytic" else None
        used, res = "analytic", None
        if raw is None:
            raw, used, res = c.theta_grid(d, resolution), "grid", resolution
        if target is not None:
            centered = c.theta_grid(d, resolution, centers=[target])
    if raw > ceiling:
        raise UnboundedCoefficient(raw, ceiling)
    return ThetaResult(max(raw, 1.0), raw, used, res, centered)


def _finite_centered(c, d, target):
    import numpy as np

    from ..scenario import region_mass
    from .finite import FiniteSpace, pairwise_rho

    i = c.index_of(target)
    rho = pairwise_rho(c, d)[i]
    best = 0.0
    for r in np.unique(rho[rho > 0]):
        mass = region_mass(d, FiniteSpace(c, rho <= r).dis_region()).value
        best = max(best, mass / r)
    return best
