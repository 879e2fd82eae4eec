"""Hermite quartic reconstruction with nonlinear weighting: reproduction,
smoothness indicators, weights, trace evaluation, characteristic mode."""

import numpy as np
import pytest

from aderfv.equations import MODELS
from aderfv.reconstruction import (
    GAUSS3_NODES,
    GAUSS3_WEIGHTS,
    LINEAR_WEIGHTS,
    XI_LEFT,
    XI_RIGHT,
    WeightConfig,
    cell_average,
    eval_derivs,
    eval_derivs_ref,
    face_traces_1d,
    hermite_quartic,
    linear_pair,
    nonlinear_weights,
    shweno_coeffs,
    shweno_coeffs_ref,
    smoothness_beta,
    transverse_line_values,
)

RNG = np.random.default_rng(3)


def poly_cell_data(coeffs, dx, cells):
    """Cell averages of a polynomial (coefficients in xi = x/dx) and the
    matching derivative-function averages, on unit-spaced cells."""
    p = np.polynomial.Polynomial(coeffs)
    P = p.integ()
    w = np.array([(P(c + 0.5) - P(c - 0.5)) for c in cells])
    dp = p.deriv()
    v = np.array([(p(c + 0.5) - p(c - 0.5)) for c in cells]) / dx  # FTC averages
    return w, v


def test_quartic_reproduction_linear_mode():
    """Degree-4 polynomials are reproduced exactly in linear weight mode."""
    coeffs = RNG.normal(size=5)
    dx = 0.37
    w, v = poly_cell_data(coeffs, dx, np.array([-1.0, 0.0, 1.0]))
    cfg = WeightConfig(linear=True)
    cs, _ = shweno_coeffs(
        np.array([[w[0]]]), np.array([[w[1]]]), np.array([[w[2]]]),
        np.array([[v[0]]]), np.array([[v[2]]]), dx, cfg,
    )
    p = np.polynomial.Polynomial(coeffs)
    for xi in (-0.5, -0.1, 0.0, 0.3, 0.5):
        got = eval_derivs(cs, xi, dx, orders=1)[0][0, 0]
        assert abs(got - p(xi)) < 1e-10
    # derivative traces too (orders 1..4, scaled by dx powers)
    derivs = eval_derivs(cs, 0.5, dx)
    q = p
    for m in range(5):
        assert abs(derivs[m][0, 0] - q(0.5) / dx**m) < 1e-9 / dx**m
        q = q.deriv()


def test_hermite_quartic_interpolation_conditions():
    """The quartic matches the three cell averages and two derivative
    averages that define it."""
    wm, w0, wp, vm, vp = RNG.normal(size=(5, 1, 1))
    dx = 0.5
    c = hermite_quartic(wm, w0, wp, vm, vp, dx)
    p = np.polynomial.Polynomial([c[k][0, 0] for k in range(5)])
    P = p.integ()
    assert abs((P(-0.5) - P(-1.5)) - wm[0, 0]) < 1e-12
    assert abs((P(0.5) - P(-0.5)) - w0[0, 0]) < 1e-12
    assert abs((P(1.5) - P(0.5)) - wp[0, 0]) < 1e-12
    # derivative-function cell averages: (p(b) - p(a)) / dx in physical units
    assert abs((p(-0.5) - p(-1.5)) / dx - vm[0, 0]) < 1e-12
    assert abs((p(1.5) - p(0.5)) / dx - vp[0, 0]) < 1e-12


def test_cell_average_functional():
    c = RNG.normal(size=(5, 1))
    p = np.polynomial.Polynomial(c[:, 0])
    P = p.integ()
    assert abs(cell_average(c)[0] - (P(0.5) - P(-0.5))) < 1e-13


def test_smoothness_beta_properties():
    """Jiang-Shu indicator: zero for constants, scale-invariant quadratic."""
    const = np.zeros((5, 1))
    const[0] = 3.7
    assert smoothness_beta(const)[0] == 0.0
    c = RNG.normal(size=(5, 4))
    c0 = c.copy()
    c0[0] = 0.0
    assert np.allclose(smoothness_beta(c), smoothness_beta(c0), atol=1e-12)
    assert np.allclose(smoothness_beta(2.0 * c), 4.0 * smoothness_beta(c), rtol=1e-13)
    assert (smoothness_beta(c) >= 0.0).all()


def test_nonlinear_weights_smooth_limit():
    """On smooth data the weights approach the linear weights."""
    coeffs = [1.0, 0.3, 0.05, 0.004, 0.0002]
    w, v = poly_cell_data(coeffs, 1.0, np.array([-1.0, 0.0, 1.0]))
    cfg = WeightConfig()
    _, wts = shweno_coeffs(
        np.array([[w[0]]]), np.array([[w[1]]]), np.array([[w[2]]]),
        np.array([[v[0]]]), np.array([[v[2]]]), 1.0, cfg,
    )
    assert np.allclose(wts[:, 0, 0], LINEAR_WEIGHTS, atol=1e-3)
    assert abs(wts.sum() - 1.0) < 1e-13


def test_nonlinear_weights_shun_discontinuous_candidate():
    """At a jump, the smooth one-sided linear candidate dominates."""
    # jump between cells 0 and 1: left stencil data smooth
    wm, w0, wp = 1.0, 1.0, 8.0
    vm, vp = 0.0, 0.0
    cfg = WeightConfig()
    _, wts = shweno_coeffs(
        np.array([[wm]]), np.array([[w0]]), np.array([[wp]]),
        np.array([[vm]]), np.array([[vp]]), 1.0, cfg,
    )
    # candidate order: (hermite, linear-left, linear-right)
    assert wts[1, 0, 0] > 0.99


def test_weights_normalized():
    betas = np.abs(RNG.normal(size=(3, 10))) * 10.0 ** RNG.integers(-8, 8, (3, 10))
    wts = nonlinear_weights(betas, WeightConfig())
    assert np.allclose(wts.sum(axis=0), 1.0, atol=1e-13)
    assert (wts > 0).all()


def test_shweno_kernel_matches_reference():
    n = 257
    wm, w0, wp, vm, vp = RNG.normal(size=(5, 3, n))
    dx = 0.21
    for cfg in (WeightConfig(), WeightConfig(linear=True)):
        a, wa = shweno_coeffs(wm, w0, wp, vm, vp, dx, cfg)
        b, wb = shweno_coeffs_ref(wm, w0, wp, vm, vp, dx, cfg)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-13)
        assert np.allclose(wa, wb, rtol=1e-12, atol=1e-13)
    # shared-weights path (derivative-function reconstruction)
    a, wa = shweno_coeffs(wm, w0, wp, vm, vp, dx, WeightConfig())
    a2, _ = shweno_coeffs(vm, wm, vp, w0, wp, dx, WeightConfig(), weights=wa)
    b2, _ = shweno_coeffs_ref(vm, wm, vp, w0, wp, dx, WeightConfig(), weights=wa)
    assert np.allclose(a2, b2, rtol=1e-12, atol=1e-13)


def test_eval_derivs_matches_reference():
    c = RNG.normal(size=(5, 3, 40))
    for xi in (-0.5, 0.0, 0.31):
        a = eval_derivs(c, xi, 0.13)
        b = eval_derivs_ref(c, xi, 0.13)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_face_traces_smooth_accuracy():
    """Trace error of a smooth profile decays at fifth order.

    The nonlinear weights need moderately fine meshes before the formal
    order shows; the coarse-mesh transient is expected."""
    errs = []
    for N in (160, 320):
        dx = 2.0 / N
        edges = -1.0 + dx * np.arange(N + 5) - 2 * dx
        f = lambda x: np.sin(np.pi * x)
        F = lambda x: -np.cos(np.pi * x) / np.pi
        wbar = ((F(edges[1:]) - F(edges[:-1])) / dx)[None]
        vbar = ((f(edges[1:]) - f(edges[:-1])) / dx)[None]
        dL, dR = face_traces_1d(wbar, vbar, dx, WeightConfig())
        faces = edges[2:-2]
        errs.append(np.abs(dL[0, 0] - f(faces)).max())
    order = np.log2(errs[0] / errs[1])
    assert order > 4.5, (errs, order)


def test_characteristic_mode_matches_component_mode_on_smooth_data():
    """For near-constant states the two projection modes agree closely."""
    model = MODELS["euler1d"]
    N = 16
    x = np.linspace(0.0, 1.0, N + 4)
    rho = 1.0 + 1e-3 * np.sin(2 * np.pi * x)
    u = 0.3 + 1e-3 * np.cos(2 * np.pi * x)
    p = 1.0 + 1e-3 * np.sin(4 * np.pi * x)
    wbar = model.primitive_to_conserved([rho, u, p])
    vbar = np.gradient(wbar, x[1] - x[0], axis=1)
    dx = x[1] - x[0]
    a = face_traces_1d(wbar, vbar, dx, WeightConfig(), model=model, char=False)
    b = face_traces_1d(wbar, vbar, dx, WeightConfig(), model=model, char=True)
    assert np.allclose(a[0][0], b[0][0], atol=1e-6)


def test_characteristic_mode_exact_for_linear_fields():
    """Linear data are reproduced exactly by both modes (quartic contains
    degree 1), so characteristic projection must round-trip."""
    model = MODELS["euler1d"]
    N = 12
    dx = 0.1
    x = dx * np.arange(N + 4)
    wbar = np.stack([1.0 + 0.01 * x, 0.2 + 0.005 * x, 2.0 + 0.02 * x])
    vbar = np.stack(
        [np.full_like(x, 0.01), np.full_like(x, 0.005), np.full_like(x, 0.02)]
    )
    dL, dR = face_traces_1d(wbar, vbar, dx, WeightConfig(), model=model, char=True)
    xf = x[1 : N + 2] + 0.5 * dx  # face positions (cells are centred on x)
    want = np.stack([1.0 + 0.01 * xf, 0.2 + 0.005 * xf, 2.0 + 0.02 * xf])
    assert np.allclose(dL[0], want, atol=1e-10)


def test_transverse_line_values_constant_field():
    """A constant field yields constant line values and zero derivatives."""
    ncomp, NX, NY = 3, 4, 5
    wbar = np.full((ncomp, NX + 4, NY + 4), 1.7)
    zero = np.zeros_like(wbar)
    lineW, lineWx = transverse_line_values(wbar, zero, zero, zero, 0.2, WeightConfig())
    assert np.allclose(lineW[0], 1.7, atol=1e-13)
    assert np.allclose(lineW[1:], 0.0, atol=1e-12)
    assert np.allclose(lineWx, 0.0, atol=1e-13)


def test_gauss3_rule_exactness():
    """The used 3-point rule integrates degree-5 monomials over [-1/2,1/2]."""
    for k in range(6):
        got = (GAUSS3_WEIGHTS * GAUSS3_NODES**k).sum()
        want = 0.0 if k % 2 else 1.0 / ((k + 1) * 2**k)
        assert abs(got - want) < 1e-15


def test_linear_pair_slopes():
    wm, w0, wp = np.array([[1.0]]), np.array([[2.0]]), np.array([[4.0]])
    cL, cR = linear_pair(wm, w0, wp)
    assert np.allclose(cL[1], 1.0) and np.allclose(cR[1], 2.0)
    assert np.allclose(cL[0], 2.0) and np.allclose(cR[0], 2.0)  # averages kept
