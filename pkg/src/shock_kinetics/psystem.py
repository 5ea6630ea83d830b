"""Isothermal-elasticity / van der Waals system in Lagrangian coordinates.

State is a (2, n) array: row 0 the specific volume tau, row 1 the velocity u.
The regularized system reads

    tau_t = u_x
    u_t   = -p(tau)_x + eps u_xx - alpha eps^2 tau_xxx

with a nonmonotone pressure p whose inflection points bound the region where
nonclassical waves can occur.  Three pressure laws are built in: a van der
Waals law at fixed temperature, a van der Waals-like law with polytropic
exponent, and a continuous piecewise-linear law with alternating slopes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .errors import ConfigurationError, DomainError
from .grids import BoundaryTreatment, Grid1D
from .stencils import make_stencil

_MODES = {
    BoundaryTreatment.PERIODIC: "wrap",
    BoundaryTreatment.CONSTANT_EXTRAPOLATION: "nearest",
}

# continuous piecewise-linear law: slope/intercept per piece on (0, 1], (1, 2], (2, 4]
# and beyond; values 3, 7, 2 at tau = 1, 2, 4.
_PIECE_BREAKS = (1.0, 2.0, 4.0)
_PIECE_SLOPES = (-7.0, 4.0, -2.5, -0.2)
_PIECE_INTERCEPTS = (10.0, -1.0, 12.0, 2.8)


@dataclass(frozen=True)
class PressureLaw:
    """A pressure-volume relation p(tau) with derivative, tagged by kind.

    kind 'vdw_rt'     : R T / (tau - 1/3) - 3 / tau^2 with R = 8/3
    kind 'vdw_zeta'   : (3 tau - 1)^(-(1 + 1/zeta)) - 3 / tau^2
    kind 'piecewise_linear' : the continuous 4-piece law above
    """

    kind: str
    temperature: float = 1.005
    zeta: float = 1.0

    def __post_init__(self):
        if self.kind not in ("vdw_rt", "vdw_zeta", "piecewise_linear"):
            raise ConfigurationError(f"unknown pressure law kind {self.kind!r}")
        if self.kind == "vdw_rt" and self.temperature <= 0.0:
            raise ConfigurationError(
                f"temperature must be positive, got {self.temperature}")
        if self.kind == "vdw_zeta" and self.zeta <= 0.0:
            raise ConfigurationError(f"zeta must be positive, got {self.zeta}")

    @property
    def tau_min(self) -> float:
        """Left edge of the law's domain of validity."""
        if self.kind == "piecewise_linear":
            return 0.0
        return 1.0 / 3.0

    def __call__(self, tau):
        return self.value(tau)

    def value(self, tau):
        tau = np.asarray(tau, dtype=float)
        self._check_domain(tau)
        if self.kind == "vdw_rt":
            r = 8.0 / 3.0
            return r * self.temperature / (tau - 1.0 / 3.0) - 3.0 / tau ** 2
        if self.kind == "vdw_zeta":
            expo = -(1.0 + 1.0 / self.zeta)
            return (3.0 * tau - 1.0) ** expo - 3.0 / tau ** 2
        return self._piecewise(tau, _PIECE_SLOPES, _PIECE_INTERCEPTS)

    def derivative(self, tau):
        tau = np.asarray(tau, dtype=float)
        self._check_domain(tau)
        if self.kind == "vdw_rt":
            r = 8.0 / 3.0
            return -r * self.temperature / (tau - 1.0 / 3.0) ** 2 + 6.0 / tau ** 3
        if self.kind == "vdw_zeta":
            expo = -(1.0 + 1.0 / self.zeta)
            return 3.0 * expo * (3.0 * tau - 1.0) ** (expo - 1.0) + 6.0 / tau ** 3
        # slope of the active piece: zero "slope" and the piece slopes as
        # "intercepts" makes _piecewise return the constant slope per piece
        return self._piecewise(tau, (0.0,) * len(_PIECE_SLOPES), _PIECE_SLOPES)

    def second_derivative(self, tau):
        tau = np.asarray(tau, dtype=float)
        self._check_domain(tau)
        if self.kind == "vdw_rt":
            r = 8.0 / 3.0
            return 2.0 * r * self.temperature / (tau - 1.0 / 3.0) ** 3 - 18.0 / tau ** 4
        if self.kind == "vdw_zeta":
            expo = -(1.0 + 1.0 / self.zeta)
            return 9.0 * expo * (expo - 1.0) * (3.0 * tau - 1.0) ** (expo - 2.0) \
                - 18.0 / tau ** 4
        return np.zeros_like(tau)

    def _check_domain(self, tau: np.ndarray) -> None:
        lo = self.tau_min
        if np.any(tau <= lo):
            bad = float(np.min(tau))
            raise DomainError(
                f"pressure law {self.kind!r} needs tau > {lo:.6g}, got min tau = {bad:.6g}")

    @staticmethod
    def _piecewise(tau: np.ndarray, slopes, intercepts) -> np.ndarray:
        idx = np.searchsorted(np.asarray(_PIECE_BREAKS), tau, side="left")
        s = np.asarray(slopes)[idx]
        b = np.asarray(intercepts)[idx]
        return s * tau + b


def validate_piecewise_continuity(law: PressureLaw, tol: float = 1e-12) -> None:
    """Assert the piecewise-linear law is continuous at its breakpoints."""
    if law.kind != "piecewise_linear":
        return
    for i, t in enumerate(_PIECE_BREAKS):
        left = _PIECE_SLOPES[i] * t + _PIECE_INTERCEPTS[i]
        right = _PIECE_SLOPES[i + 1] * t + _PIECE_INTERCEPTS[i + 1]
        if abs(left - right) > tol:
            raise ConfigurationError(
                f"piecewise law discontinuous at tau = {t}: {left} vs {right}")


def find_inflection_points(law: PressureLaw, tau_lo: float = 0.4,
                           tau_hi: float = 10.0, samples: int = 4001,
                           tol: float = 1e-8) -> list[float]:
    """Locate where the pressure law changes convexity.

    Smooth laws: bracket sign changes of p'' on a fine grid and bisect each to
    the requested tolerance.  The piecewise-linear law has no curvature inside
    pieces, so its convexity changes are exactly the breakpoints where the
    slope sign flips.
    """
    if law.kind == "piecewise_linear":
        out = []
        for i, t in enumerate(_PIECE_BREAKS[:-1]):
            if _PIECE_SLOPES[i] * _PIECE_SLOPES[i + 1] < 0.0:
                out.append(t)
        # the final breakpoint joins two decreasing pieces, flagged only if
        # slopes disagree in sign there as well
        t = _PIECE_BREAKS[-1]
        if _PIECE_SLOPES[-2] * _PIECE_SLOPES[-1] < 0.0:
            out.append(t)
        return out

    lo = max(tau_lo, law.tau_min + 1e-6)
    taus = np.linspace(lo, tau_hi, samples)
    vals = law.second_derivative(taus)
    roots = []
    for a, b, fa, fb in zip(taus[:-1], taus[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(float(a))
            continue
        if fa * fb < 0.0:
            x0, x1, f0 = float(a), float(b), float(fa)
            while x1 - x0 > tol:
                xm = 0.5 * (x0 + x1)
                fm = float(law.second_derivative(xm))
                if fm == 0.0:
                    x0 = x1 = xm
                    break
                if f0 * fm < 0.0:
                    x1 = xm
                else:
                    x0, f0 = xm, fm
            roots.append(0.5 * (x0 + x1))
    if vals[-1] == 0.0:
        roots.append(float(taus[-1]))
    return roots


@dataclass(frozen=True)
class PSystemModel:
    """Two-field elasticity system with viscosity and capillarity."""

    law: PressureLaw
    eps: float
    alpha: float = 0.0

    name = "p_system"

    def __post_init__(self):
        if self.eps < 0.0:
            raise ConfigurationError(f"eps must be >= 0, got {self.eps}")
        if self.alpha < 0.0:
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha}")

    def make_rhs(self, grid: Grid1D, q: int, boundary: BoundaryTreatment):
        st1 = make_stencil(q, 1)
        w1 = st1.weights()
        mode = _MODES[boundary]
        h = grid.h
        eps = self.eps
        disp = self.alpha * self.eps * self.eps
        if eps > 0.0:
            w2 = make_stencil(q, 2).weights()
        if disp > 0.0:
            w3 = make_stencil(q, 3).weights()
        law = self.law

        def d(f, w, power):
            out = correlate1d(f, w, mode=mode)
            out /= h ** power
            return out

        def rhs(state: np.ndarray) -> np.ndarray:
            tau, u = state[0], state[1]
            out = np.empty_like(state)
            out[0] = d(u, w1, 1)
            out[1] = -d(law.value(tau), w1, 1)
            if eps > 0.0:
                out[1] += eps * d(u, w2, 2)
            if disp > 0.0:
                out[1] -= disp * d(tau, w3, 3)
            return out

        return rhs

    def dt_bounds(self, state: np.ndarray, h: float) -> list[float]:
        tau = state[0]
        bounds = []
        c2 = float(np.max(np.maximum(-self.law.derivative(tau), 0.0)))
        if c2 > 0.0:
            bounds.append(h / np.sqrt(c2))
        if self.eps > 0.0:
            bounds.append(h * h / (2.0 * self.eps))
        disp = self.alpha * self.eps * self.eps
        if disp > 0.0:
            bounds.append(h ** 3 / (6.0 * disp))
        return bounds
