"""Central finite-difference stencils of order 4 to 10 for d/dx, d2/dx2, d3/dx3.

Coefficients are stored as exact rationals and converted to floats only when a
stencil is applied.  A stencil for derivative ``d`` built from ``2w + 1`` points
approximates ``u^(d)(x_i) ~ h**-d * sum_k c_k u_{i+k}``.  First- and
second-derivative stencils with label q are accurate to order q; the
third-derivative stencils on the same point count are accurate to order q - 2.
Every stencil differentiates monomials exactly up to degree
``accuracy_order + d - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.ndimage import correlate1d

from .errors import ConfigurationError
from .grids import BoundaryTreatment

ORDERS = (4, 6, 8, 10)
DERIVATIVES = (1, 2, 3)

_F = Fraction

# Coefficients c_{-w} ... c_{+w}, keyed by (order label q, derivative d).
_TABLES: dict[tuple[int, int], tuple[Fraction, ...]] = {
    (4, 1): (_F(1, 12), _F(-2, 3), _F(0), _F(2, 3), _F(-1, 12)),
    (4, 2): (_F(-1, 12), _F(4, 3), _F(-5, 2), _F(4, 3), _F(-1, 12)),
    (4, 3): (_F(-1, 2), _F(1), _F(0), _F(-1), _F(1, 2)),
    (6, 1): (_F(-1, 60), _F(3, 20), _F(-3, 4), _F(0), _F(3, 4), _F(-3, 20), _F(1, 60)),
    (6, 2): (_F(1, 90), _F(-3, 20), _F(3, 2), _F(-49, 18), _F(3, 2), _F(-3, 20), _F(1, 90)),
    (6, 3): (_F(1, 8), _F(-1), _F(13, 8), _F(0), _F(-13, 8), _F(1), _F(-1, 8)),
    (8, 1): (_F(1, 280), _F(-4, 105), _F(1, 5), _F(-4, 5), _F(0),
             _F(4, 5), _F(-1, 5), _F(4, 105), _F(-1, 280)),
    (8, 2): (_F(-1, 560), _F(8, 315), _F(-1, 5), _F(8, 5), _F(-205, 72),
             _F(8, 5), _F(-1, 5), _F(8, 315), _F(-1, 560)),
    (8, 3): (_F(-7, 240), _F(3, 10), _F(-169, 120), _F(61, 30), _F(0),
             _F(-61, 30), _F(169, 120), _F(-3, 10), _F(7, 240)),
    (10, 1): (_F(-1, 1260), _F(5, 504), _F(-5, 84), _F(5, 21), _F(-5, 6), _F(0),
              _F(5, 6), _F(-5, 21), _F(5, 84), _F(-5, 504), _F(1, 1260)),
    (10, 2): (_F(1, 3150), _F(-5, 1008), _F(5, 126), _F(-5, 21), _F(5, 3), _F(-5269, 1800),
              _F(5, 3), _F(-5, 21), _F(5, 126), _F(-5, 1008), _F(1, 3150)),
    (10, 3): (_F(41, 6048), _F(-1261, 15120), _F(541, 1120), _F(-4369, 2520), _F(1669, 720),
              _F(0), _F(-1669, 720), _F(4369, 2520), _F(-541, 1120), _F(1261, 15120),
              _F(-41, 6048)),
}

_BOUNDARY_MODES = {
    BoundaryTreatment.PERIODIC: "wrap",
    BoundaryTreatment.CONSTANT_EXTRAPOLATION: "nearest",
}


@dataclass(frozen=True)
class StencilCoefficients:
    """One central difference rule with exact rational coefficients."""

    order: int          # scheme label q
    derivative: int     # d
    half_width: int     # w = q // 2
    accuracy_order: int  # q for d in {1, 2}; q - 2 for d = 3
    coeffs: tuple[Fraction, ...]

    @property
    def exact_degree(self) -> int:
        """Highest monomial degree differentiated exactly."""
        return self.accuracy_order + self.derivative - 1

    @property
    def offsets(self) -> range:
        return range(-self.half_width, self.half_width + 1)

    def weights(self) -> np.ndarray:
        """Coefficients as floats, in offset order c_{-w} .. c_{+w}."""
        return np.array([float(c) for c in self.coeffs])


def make_stencil(order: int, derivative: int) -> StencilCoefficients:
    """Look up the (order, derivative) stencil.

    Raises ConfigurationError for unsupported combinations.
    """
    key = (order, derivative)
    if key not in _TABLES:
        raise ConfigurationError(
            f"no stencil for order={order}, derivative={derivative}; "
            f"supported orders {ORDERS} and derivatives {DERIVATIVES}")
    coeffs = _TABLES[key]
    accuracy = order if derivative < 3 else order - 2
    return StencilCoefficients(
        order=order,
        derivative=derivative,
        half_width=order // 2,
        accuracy_order=accuracy,
        coeffs=coeffs,
    )


def apply_stencil(field: np.ndarray, stencil: StencilCoefficients, h: float,
                  boundary: BoundaryTreatment) -> np.ndarray:
    """Evaluate the derivative approximation at every node.

    Periodic boundaries wrap the field; constant extrapolation repeats the
    edge values, so derivatives decay to zero in constant far fields.
    """
    if h <= 0:
        raise ConfigurationError(f"spacing must be positive, got {h}")
    field = np.asarray(field, dtype=float)
    if field.ndim != 1:
        raise ConfigurationError("apply_stencil expects a one-dimensional field")
    if field.size < 2 * stencil.half_width + 1:
        raise ConfigurationError(
            f"field of {field.size} nodes is narrower than the stencil "
            f"({2 * stencil.half_width + 1} points)")
    mode = _BOUNDARY_MODES[boundary]
    out = correlate1d(field, stencil.weights(), mode=mode)
    out /= h ** stencil.derivative
    return out


def validate_stencils(rel_tol: float = 1e-9) -> list[str]:
    """Check every stencil against exact monomial derivatives.

    Returns a list of human-readable failure strings (empty when all pass).
    Used by the CLI ``validate`` subcommand and the acceptance suite.
    """
    failures: list[str] = []
    n, h = 64, 0.05
    x = 1.0 + h * np.arange(n)
    for (q, d) in _TABLES:
        st = make_stencil(q, d)
        w = st.half_width
        interior = slice(w, n - w)
        for m in range(st.exact_degree + 1):
            exact = _monomial_derivative(x, m, d)
            approx = apply_stencil(x ** m, st, h, BoundaryTreatment.CONSTANT_EXTRAPOLATION)
            scale = np.maximum(1.0, np.abs(exact[interior]))
            err = np.max(np.abs(approx[interior] - exact[interior]) / scale)
            if err > rel_tol:
                failures.append(
                    f"stencil (q={q}, d={d}) misses x^{m}: relative error {err:.3e}")
    return failures


def _monomial_derivative(x: np.ndarray, m: int, d: int) -> np.ndarray:
    """d-th derivative of x**m, elementwise."""
    if m < d:
        return np.zeros_like(x)
    coeff = 1.0
    for j in range(d):
        coeff *= (m - j)
    return coeff * x ** (m - d)
