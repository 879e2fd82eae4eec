"""Riemann solvers: exact scalar sampling, HLLC, linear characteristic RP."""

import numpy as np
import pytest

from aderfv.equations import MODELS
from aderfv.riemann import godunov_scalar, hllc_sample, linear_char_sample

RNG = np.random.default_rng(11)


# -- scalar Godunov ----------------------------------------------------------


def test_godunov_scalar_consistency():
    w = np.array([-1.3, 0.0, 0.7])
    assert np.array_equal(godunov_scalar(w, w), w)


def test_godunov_scalar_shock_cases():
    # right-moving shock (s > 0): left state; left-moving: right state
    assert godunov_scalar(2.0, 1.0) == 2.0
    assert godunov_scalar(-1.0, -2.0) == -2.0
    # stationary shock s = 0: ties to the left state
    assert godunov_scalar(1.0, -1.0) == 1.0


def test_godunov_scalar_rarefaction_cases():
    assert godunov_scalar(0.5, 1.5) == 0.5        # supersonic right
    assert godunov_scalar(-1.5, -0.5) == -0.5     # supersonic left
    assert godunov_scalar(-1.0, 1.0) == 0.0       # transonic: sonic state


# -- HLLC --------------------------------------------------------------------


def euler_state(model, rho, vel, p):
    return model.primitive_to_conserved(
        [np.atleast_1d(float(rho)), *[np.atleast_1d(float(v)) for v in vel], np.atleast_1d(float(p))]
    )


def test_hllc_consistency_bitwise():
    """Equal inputs return the input state exactly."""
    model = MODELS["euler1d"]
    W = euler_state(model, 1.3, [0.4], 2.1)
    out = hllc_sample(model, W, W)
    assert np.array_equal(out, W)


def test_hllc_supersonic_upwind_bitwise():
    """Fully supersonic data return the upwind state exactly."""
    model = MODELS["euler1d"]
    WL = euler_state(model, 1.0, [5.0], 1.0)   # u - a > 0
    WR = euler_state(model, 0.9, [5.2], 1.1)
    assert np.array_equal(hllc_sample(model, WL, WR), WL)
    WL = euler_state(model, 1.0, [-5.2], 1.0)  # u + a < 0
    WR = euler_state(model, 0.9, [-5.0], 1.1)
    assert np.array_equal(hllc_sample(model, WL, WR), WR)


def test_hllc_isolated_contact_exact():
    """A stationary-pressure contact is resolved without smearing."""
    model = MODELS["euler1d"]
    WL = euler_state(model, 1.0, [0.5], 1.0)
    WR = euler_state(model, 0.3, [0.5], 1.0)
    out = hllc_sample(model, WL, WR)
    assert np.allclose(out, WL, atol=1e-12)  # contact moves right
    flip = np.array([[1.0], [-1.0], [1.0]])
    out = hllc_sample(model, WL * flip, WR * flip)
    assert np.allclose(out, WR * flip, atol=1e-12)  # contact moves left


def test_hllc_sod_sample_bounded_physical():
    """Sod tube: the sampled interface state is physical and bounded by
    the data (HLLC's contact estimate, not the exact star state)."""
    model = MODELS["euler1d"]
    WL = euler_state(model, 1.0, [0.0], 1.0)
    WR = euler_state(model, 0.125, [0.0], 0.1)
    out = hllc_sample(model, WL, WR)
    model.require_physical(out)
    assert 0.125 <= out[0, 0] <= 1.0
    assert 0.0 <= out[1, 0] / out[0, 0] <= 1.2
    assert 0.1 <= model.pressure(out)[0] <= 1.0


def test_hllc_euler2d_transverse_advection():
    """The transverse momentum rides with the contact: sign of S* picks it."""
    model = MODELS["euler2d"]
    WL = euler_state(model, 1.0, [0.3, 2.0], 1.0)
    WR = euler_state(model, 1.0, [0.3, -7.0], 1.0)
    out = hllc_sample(model, WL, WR, axis=0)
    # contact moves right (u = 0.3 > 0): left transverse velocity survives
    assert np.allclose(out[2] / out[0], 2.0, atol=1e-12)


def test_hllc_batch_matches_scalar_calls():
    model = MODELS["euler1d"]
    rho = RNG.uniform(0.2, 2.0, 40)
    u = RNG.uniform(-1.5, 1.5, 40)
    p = RNG.uniform(0.2, 3.0, 40)
    WL = model.primitive_to_conserved([rho, u, p])
    WR = np.roll(WL, 7, axis=1)
    batch = hllc_sample(model, WL, WR)
    for j in range(0, 40, 13):
        one = hllc_sample(model, WL[:, j : j + 1], WR[:, j : j + 1])
        assert np.array_equal(one[:, 0], batch[:, j])


# -- linear characteristic sampling ------------------------------------------


def frozen_eigensystem(n=16):
    model = MODELS["euler1d"]
    rho = RNG.uniform(0.5, 2.0, n)
    u = RNG.uniform(-1.0, 1.0, n)
    p = RNG.uniform(0.5, 2.0, n)
    W = model.primitive_to_conserved([rho, u, p])
    return model.eigensystem(W)


def test_linear_char_linearity():
    """The sampler is linear in (dL, dR) to 1e-13."""
    lam, L, R = frozen_eigensystem()
    dL1, dR1 = RNG.normal(size=(2, 3, 16))
    dL2, dR2 = RNG.normal(size=(2, 3, 16))
    a, b = 0.7, -1.9
    lhs = linear_char_sample(lam, L, R, a * dL1 + b * dL2, a * dR1 + b * dR2)
    rhs = a * linear_char_sample(lam, L, R, dL1, dR1) + b * linear_char_sample(
        lam, L, R, dL2, dR2
    )
    assert np.allclose(lhs, rhs, atol=1e-13)


def test_linear_char_upwind_selection():
    """With all eigenvalues positive, the left data pass through unchanged."""
    model = MODELS["euler1d"]
    W = model.primitive_to_conserved(
        [np.full(4, 1.0), np.full(4, 9.0), np.full(4, 1.0)]
    )  # u >> a: all lam > 0
    lam, L, R = model.eigensystem(W)
    dL = RNG.normal(size=(3, 4))
    dR = RNG.normal(size=(3, 4))
    out = linear_char_sample(lam, L, R, dL, dR)
    assert np.allclose(out, dL, atol=1e-12)


def test_linear_char_zero_wave_mean():
    """Characteristics with |lambda| <= tol average the two sides."""
    lam = np.array([[0.0], [1.0], [-1.0]])
    L = np.eye(3)[:, :, None]
    R = np.eye(3)[:, :, None]
    dL = np.array([[2.0], [3.0], [4.0]])
    dR = np.array([[6.0], [5.0], [8.0]])
    out = linear_char_sample(lam, L, R, dL, dR)
    assert np.allclose(out[:, 0], [4.0, 3.0, 8.0])


def test_linear_char_stacked_matches_loop():
    """The batched multi-order path equals order-by-order resolution."""
    lam, L, R = frozen_eigensystem()
    dLs = RNG.normal(size=(3, 4, 16))  # (ncomp, nstack, npts)
    dRs = RNG.normal(size=(3, 4, 16))
    stacked = linear_char_sample(lam, L, R, dLs, dRs)
    for s in range(4):
        one = linear_char_sample(lam, L, R, dLs[:, s], dRs[:, s])
        assert np.allclose(stacked[:, s], one, atol=1e-13)
