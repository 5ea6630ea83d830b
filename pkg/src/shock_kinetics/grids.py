"""Uniform one-dimensional grids and boundary treatments.

A grid stores its endpoints and node count; the spacing is always the
derived value ``(x_max - x_min) / (n - 1)`` so that node coordinates and
spacing can never drift apart.  Periodic grids treat ``x_max`` as the last
stored node, so the period is ``n * h`` (one extra spacing closes the loop).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

#: Widest supported stencil half-width; grids must hold at least one full stencil.
MAX_HALF_WIDTH = 5


class BoundaryTreatment(enum.Enum):
    """How stencils see data beyond the grid ends."""

    PERIODIC = "periodic"
    CONSTANT_EXTRAPOLATION = "constant_extrapolation"


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [x_min, x_max] with n nodes."""

    x_min: float
    x_max: float
    n: int
    h: float = field(init=False)

    def __post_init__(self):
        if self.n < 2 * MAX_HALF_WIDTH + 1:
            raise ConfigurationError(
                f"grid needs at least {2 * MAX_HALF_WIDTH + 1} nodes, got {self.n}")
        if not (self.x_max > self.x_min):
            raise ConfigurationError(
                f"grid endpoints must satisfy x_max > x_min, got [{self.x_min}, {self.x_max}]")
        object.__setattr__(self, "h", (self.x_max - self.x_min) / (self.n - 1))

    @classmethod
    def from_spacing(cls, x_min: float, h: float, n: int) -> "Grid1D":
        """Build a grid from its left endpoint, spacing, and node count."""
        if h <= 0:
            raise ConfigurationError(f"grid spacing must be positive, got {h}")
        return cls(x_min, x_min + h * (n - 1), n)

    def nodes(self) -> np.ndarray:
        """Node coordinates as a float array of length n."""
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def period(self) -> float:
        """Spatial period when the grid is used with periodic boundaries."""
        return self.n * self.h

    @property
    def length(self) -> float:
        """Distance between the first and last node."""
        return self.x_max - self.x_min
