"""Central-difference stencil construction and application."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shock_kinetics import (BoundaryTreatment, ConfigurationError,
                            apply_stencil, make_stencil, validate_stencils)
from shock_kinetics.stencils import DERIVATIVES, ORDERS


@pytest.mark.parametrize("q", ORDERS)
@pytest.mark.parametrize("d", DERIVATIVES)
def test_monomial_exactness_at_design_degree(q, d):
    st_ = make_stencil(q, d)
    n, h = 48, 0.1
    x = 2.0 + h * np.arange(n)
    w = st_.half_width
    interior = slice(w, n - w)
    for m in range(st_.exact_degree + 1):
        exact = np.zeros_like(x)
        if m >= d:
            coeff = math.factorial(m) / math.factorial(m - d)
            exact = coeff * x ** (m - d)
        approx = apply_stencil(x ** m, st_, h,
                               BoundaryTreatment.CONSTANT_EXTRAPOLATION)
        scale = np.maximum(1.0, np.abs(exact[interior]))
        assert np.max(np.abs(approx[interior] - exact[interior]) / scale) < 1e-9


@pytest.mark.parametrize("q", ORDERS)
@pytest.mark.parametrize("d", DERIVATIVES)
def test_one_degree_past_design_is_inexact(q, d):
    """The stencil must not be accidentally more accurate than designed.

    Central symmetry gives one parity degree for free, so the first missed
    monomial is exact_degree + 2.
    """
    st_ = make_stencil(q, d)
    # large spacing relative to |x| so the truncation term dominates even
    # for the tenth-order rules
    n, h = 48, 0.5
    x = 1.0 + h * np.arange(n)
    m = st_.exact_degree + 2
    exact = (math.factorial(m) / math.factorial(m - d)) * x ** (m - d)
    approx = apply_stencil(x ** m, st_, h,
                           BoundaryTreatment.CONSTANT_EXTRAPOLATION)
    w = st_.half_width
    interior = slice(w, n - w)
    rel = np.max(np.abs(approx[interior] - exact[interior])
                 / np.abs(exact[interior]))
    assert rel > 1e-9


def test_validate_stencils_reports_no_failures():
    assert validate_stencils() == []


def test_unsupported_combination_raises():
    with pytest.raises(ConfigurationError):
        make_stencil(5, 1)
    with pytest.raises(ConfigurationError):
        make_stencil(6, 4)


def test_apply_stencil_rejects_bad_inputs():
    st_ = make_stencil(4, 1)
    with pytest.raises(ConfigurationError):
        apply_stencil(np.ones(16), st_, -0.1,
                      BoundaryTreatment.CONSTANT_EXTRAPOLATION)
    with pytest.raises(ConfigurationError):
        apply_stencil(np.ones(3), st_, 0.1,
                      BoundaryTreatment.CONSTANT_EXTRAPOLATION)
    with pytest.raises(ConfigurationError):
        apply_stencil(np.ones((4, 4)), st_, 0.1,
                      BoundaryTreatment.CONSTANT_EXTRAPOLATION)


def test_periodic_wrap_matches_manual_roll():
    st_ = make_stencil(6, 1)
    rng = np.random.default_rng(3)
    u = rng.normal(size=40)
    h = 0.2
    out = apply_stencil(u, st_, h, BoundaryTreatment.PERIODIC)
    w = st_.half_width
    manual = sum(float(c) * np.roll(u, -k)
                 for k, c in zip(range(-w, w + 1), st_.weights())) / h
    # correlate1d with wrap and manual rolls agree everywhere
    assert np.allclose(out, manual, atol=1e-12)


def test_constant_field_has_zero_derivative_everywhere():
    for q in ORDERS:
        for d in DERIVATIVES:
            st_ = make_stencil(q, d)
            out = apply_stencil(np.full(32, 7.5), st_, 0.3,
                                BoundaryTreatment.CONSTANT_EXTRAPOLATION)
            assert np.max(np.abs(out)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(q=st.sampled_from(ORDERS), d=st.sampled_from(DERIVATIVES),
       coeffs=st.lists(st.floats(-2.0, 2.0), min_size=1, max_size=5),
       h=st.floats(0.05, 1.0))
def test_random_polynomials_differentiate_exactly(q, d, coeffs, h):
    """Any polynomial up to the design degree is differentiated exactly."""
    st_ = make_stencil(q, d)
    degree = min(len(coeffs) - 1, st_.exact_degree)
    coeffs = coeffs[:degree + 1]
    n = 40
    x = 1.0 + h * np.arange(n)
    poly = np.polynomial.Polynomial(coeffs)
    u = poly(x)
    exact = poly.deriv(d)(x)
    approx = apply_stencil(u, st_, h, BoundaryTreatment.CONSTANT_EXTRAPOLATION)
    w = st_.half_width
    interior = slice(w, n - w)
    scale = np.maximum(1.0, np.abs(exact[interior]))
    assert np.max(np.abs(approx[interior] - exact[interior]) / scale) < 1e-8


@settings(max_examples=30, deadline=None)
@given(q=st.sampled_from(ORDERS), shift=st.integers(-10, 10))
def test_periodic_translation_equivariance(q, shift):
    """Differentiating a rolled field equals rolling the derivative."""
    st_ = make_stencil(q, 1)
    rng = np.random.default_rng(11)
    u = rng.normal(size=37)
    a = apply_stencil(np.roll(u, shift), st_, 0.1, BoundaryTreatment.PERIODIC)
    b = np.roll(apply_stencil(u, st_, 0.1, BoundaryTreatment.PERIODIC), shift)
    assert np.allclose(a, b, atol=1e-12)
