"""Pressure laws and the two-field elasticity system with viscosity and
capillarity."""

import numpy as np
import pytest

from shock_kinetics import (BoundaryTreatment, ConfigurationError, DomainError,
                            Grid1D, PressureLaw, PSystemModel,
                            find_inflection_points,
                            validate_piecewise_continuity)

PERIODIC = BoundaryTreatment.PERIODIC


# ---------------------------------------------------------------------------
# law construction and domains


def test_unknown_kind_rejected():
    with pytest.raises(ConfigurationError):
        PressureLaw(kind="polytropic")


def test_parameter_validation():
    with pytest.raises(ConfigurationError):
        PressureLaw(kind="vdw_rt", temperature=0.0)
    with pytest.raises(ConfigurationError):
        PressureLaw(kind="vdw_zeta", zeta=-1.0)


def test_domain_guard():
    vdw = PressureLaw(kind="vdw_rt")
    with pytest.raises(DomainError):
        vdw.value(0.3)  # at/below the covolume 1/3
    with pytest.raises(DomainError):
        vdw.value(np.array([0.5, 1.0, 0.2]))
    pw = PressureLaw(kind="piecewise_linear")
    with pytest.raises(DomainError):
        pw.value(-0.5)
    assert pw.tau_min == 0.0
    assert vdw.tau_min == pytest.approx(1.0 / 3.0)


def test_piecewise_law_is_continuous():
    validate_piecewise_continuity(PressureLaw(kind="piecewise_linear"))


# ---------------------------------------------------------------------------
# derivative consistency (central differences as the oracle)


@pytest.mark.parametrize("law", [
    PressureLaw(kind="vdw_rt", temperature=1.005),
    PressureLaw(kind="vdw_rt", temperature=0.9),
    PressureLaw(kind="vdw_zeta", zeta=1.0),
    PressureLaw(kind="vdw_zeta", zeta=2.5),
])
def test_smooth_law_derivatives_match_finite_differences(law):
    tau = np.linspace(0.6, 4.0, 40)
    d1, d2 = 1e-6, 1e-4  # wider step for the second difference (roundoff)
    fd1 = (law.value(tau + d1) - law.value(tau - d1)) / (2 * d1)
    fd2 = (law.value(tau + d2) - 2 * law.value(tau) + law.value(tau - d2)) / d2 ** 2
    assert np.max(np.abs(law.derivative(tau) - fd1) / (1 + np.abs(fd1))) < 1e-7
    assert np.max(np.abs(law.second_derivative(tau) - fd2) / (1 + np.abs(fd2))) < 1e-5


def test_piecewise_derivative_is_the_piece_slope():
    law = PressureLaw(kind="piecewise_linear")
    probes = {0.5: -7.0, 1.5: 4.0, 3.0: -2.5, 5.0: -0.2}
    for tau, slope in probes.items():
        assert law.derivative(tau) == pytest.approx(slope)
    assert np.all(law.second_derivative(np.array([0.5, 1.5, 3.0])) == 0.0)


def test_inflection_points_bracket_sign_change():
    law = PressureLaw(kind="vdw_rt", temperature=1.005)
    roots = find_inflection_points(law)
    assert len(roots) == 2
    lo, hi = roots
    assert lo == pytest.approx(1.0102602, abs=1e-5)
    assert hi == pytest.approx(1.8511403, abs=1e-5)
    d = 1e-3
    assert law.second_derivative(lo - d) * law.second_derivative(lo + d) < 0
    assert law.second_derivative(hi - d) * law.second_derivative(hi + d) < 0


# ---------------------------------------------------------------------------
# system model


def test_psystem_rejects_negative_coefficients():
    law = PressureLaw(kind="piecewise_linear")
    with pytest.raises(ConfigurationError):
        PSystemModel(law=law, eps=-0.1)
    with pytest.raises(ConfigurationError):
        PSystemModel(law=law, eps=0.1, alpha=-1.0)


def make_state(grid, tau_fn, u_fn):
    x = grid.nodes()
    state = np.empty((2, grid.n))
    state[0] = tau_fn(x)
    state[1] = u_fn(x)
    return state


def test_rhs_zero_on_constant_state():
    grid = Grid1D.from_spacing(0.0, 0.01, 128)
    model = PSystemModel(law=PressureLaw(kind="piecewise_linear"), eps=0.02,
                         alpha=1.0)
    rhs = model.make_rhs(grid, q=6, boundary=PERIODIC)
    state = make_state(grid, lambda x: np.full_like(x, 0.7),
                       lambda x: np.full_like(x, 1.3))
    assert np.max(np.abs(rhs(state))) < 1e-12


def test_rhs_components_on_analytic_fields():
    """tau_t = u_x and u_t = -p(tau)_x + eps u_xx - alpha eps^2 tau_xxx,
    checked against exact derivatives of sine data."""
    n = 256
    h = 2.0 * np.pi / n
    grid = Grid1D.from_spacing(0.0, h, n)
    x = grid.nodes()
    law = PressureLaw(kind="vdw_rt", temperature=1.005)
    eps, alpha = 0.05, 2.0
    model = PSystemModel(law=law, eps=eps, alpha=alpha)
    rhs = model.make_rhs(grid, q=8, boundary=PERIODIC)

    tau = 1.5 + 0.2 * np.sin(x)
    u = 0.3 * np.cos(x)
    state = np.stack([tau, u])
    out = rhs(state)

    du = -0.3 * np.sin(x)
    assert np.max(np.abs(out[0] - du)) < 1e-8

    dp = law.derivative(tau) * 0.2 * np.cos(x)
    d2u = -0.3 * np.cos(x)
    d3tau = -0.2 * np.cos(x)
    expected = -dp + eps * d2u - alpha * eps ** 2 * d3tau
    assert np.max(np.abs(out[1] - expected)) < 1e-6


def test_rhs_invariant_under_velocity_shift():
    """Adding a constant to the velocity leaves the right-hand side
    unchanged (the equations only see velocity gradients)."""
    grid = Grid1D.from_spacing(0.0, 0.005, 200)
    law = PressureLaw(kind="piecewise_linear")
    model = PSystemModel(law=law, eps=0.01, alpha=1.0)
    rhs = model.make_rhs(grid, q=6, boundary=BoundaryTreatment.CONSTANT_EXTRAPOLATION)
    rng = np.random.default_rng(17)
    state = np.stack([1.5 + 0.3 * rng.random(200), rng.normal(size=200)])
    shifted = state.copy()
    shifted[1] += 3.7
    a, b = rhs(state), rhs(shifted)
    scale = max(1.0, float(np.max(np.abs(a))))
    assert np.max(np.abs(a - b)) < 1e-14 * scale


def test_dt_bounds_hyperbolic_and_elliptic():
    law = PressureLaw(kind="piecewise_linear")
    h = 0.01
    # steepest falling piece: sound speed sqrt(7)
    state = np.stack([np.full(50, 0.5), np.zeros(50)])
    model = PSystemModel(law=law, eps=0.0, alpha=0.0)
    bounds = model.dt_bounds(state, h)
    assert min(bounds) == pytest.approx(h / np.sqrt(7.0))
    # rising piece: p' > 0, no real sound speed -> no convective bound
    elliptic = np.stack([np.full(50, 1.5), np.zeros(50)])
    assert model.dt_bounds(elliptic, h) == []
    # viscosity and capillarity add their own restrictions
    model2 = PSystemModel(law=law, eps=0.02, alpha=1.0)
    b2 = model2.dt_bounds(elliptic, h)
    assert h * h / (2 * 0.02) in b2
    assert h ** 3 / (6 * 0.02 ** 2) in b2


def test_constant_state_is_a_fixed_point_of_integration():
    from shock_kinetics import builtin_tableau, integrate
    grid = Grid1D.from_spacing(0.0, 0.01, 64)
    model = PSystemModel(law=PressureLaw(kind="vdw_rt"), eps=0.01, alpha=0.5)
    rhs = model.make_rhs(grid, q=6, boundary=PERIODIC)
    state = np.stack([np.full(64, 2.0), np.full(64, -0.4)])
    snaps = integrate(state, rhs, builtin_tableau("rk4"), dt=1e-4, t_end=0.01)
    assert np.max(np.abs(snaps[-1][1] - state)) < 1e-12
