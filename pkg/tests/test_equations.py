"""Model algebra: flux, eigensystems, conversions, physicality checks."""

import numpy as np
import pytest

from aderfv.equations import GAMMA, MODELS, NonPhysicalState
from aderfv.jets import jet_space

RNG = np.random.default_rng(7)


def random_states(model, n=50):
    rho = RNG.uniform(0.1, 3.0, n)
    p = RNG.uniform(0.1, 5.0, n)
    vel = RNG.uniform(-2.0, 2.0, (model.dim, n))
    if model.ncomp == 1:
        return RNG.uniform(-2.0, 2.0, (1, n))
    return model.primitive_to_conserved([rho, *vel, p])


@pytest.mark.parametrize("name", ["euler1d", "euler2d"])
def test_primitive_roundtrip(name):
    model = MODELS[name]
    W = random_states(model)
    V = model.conserved_to_primitive(W)
    assert np.allclose(model.primitive_to_conserved(V), W, atol=1e-13)


@pytest.mark.parametrize("name", ["burgers", "euler1d", "euler2d"])
def test_eigensystem_inverse_pair(name):
    model = MODELS[name]
    W = random_states(model)
    for axis in range(model.dim):
        lam, L, R = model.eigensystem(W, axis=axis)
        prod = np.einsum("pc...,cq...->pq...", L, R)
        eye = np.eye(model.ncomp)[..., None]
        assert np.allclose(prod, eye, atol=1e-11)
        # eigenvalues sorted ascending (u-a, ..., u+a)
        assert np.all(np.diff(lam, axis=0) >= -1e-12)


@pytest.mark.parametrize("name", ["burgers", "euler1d", "euler2d"])
def test_eigensystem_diagonalizes_flux_jacobian(name):
    model = MODELS[name]
    W = random_states(model, n=20)
    eps = 1e-7
    for axis in range(model.dim):
        lam, L, R = model.eigensystem(W, axis=axis)
        # finite-difference Jacobian A = dF/dW, then L A R == diag(lam)
        A = np.empty((model.ncomp, model.ncomp, W.shape[1]))
        for c in range(model.ncomp):
            dW = np.zeros_like(W)
            dW[c] = eps * np.maximum(1.0, np.abs(W[c]))
            A[:, c] = (model.flux(W + dW, axis=axis) - model.flux(W - dW, axis=axis)) / (
                2.0 * dW[c]
            )
        D = np.einsum("pc...,cd...,dq...->pq...", L, A, R)
        for p in range(model.ncomp):
            for q in range(model.ncomp):
                want = lam[p] if p == q else 0.0
                assert np.allclose(D[p, q], want, atol=5e-6)


def test_pressure_and_sound_speed():
    model = MODELS["euler1d"]
    W = model.primitive_to_conserved([np.array([1.0]), np.array([0.5]), np.array([2.0])])
    assert np.allclose(model.pressure(W), 2.0)
    assert np.allclose(model.sound_speed(W), np.sqrt(GAMMA * 2.0))
    assert np.allclose(model.max_wavespeed(W), 0.5 + np.sqrt(GAMMA * 2.0))


def test_require_physical_raises_with_location():
    model = MODELS["euler1d"]
    W = random_states(model, 5)
    W[0, 3] = -1.0
    with pytest.raises(NonPhysicalState, match=r"density"):
        model.require_physical(W)


def test_physical_mask():
    model = MODELS["euler2d"]
    W = random_states(model, 6)
    ok = model.physical_mask(W)
    assert ok.all()
    W[0, 2] = -0.5
    W[3, 4] = -100.0  # energy below kinetic -> negative pressure
    ok = model.physical_mask(W)
    assert not ok[2] and not ok[4]
    assert ok.sum() == 4


def test_swap_xy_involution():
    model = MODELS["euler2d"]
    W = random_states(model)
    assert np.array_equal(model.swap_xy(model.swap_xy(W)), W)
    # swapping exchanges the flux directions
    assert np.allclose(
        model.swap_xy(model.flux(model.swap_xy(W), axis=0)), model.flux(W, axis=1)
    )


@pytest.mark.parametrize("name", ["burgers", "euler1d", "euler2d"])
def test_jet_flux_matches_pointwise_flux_composition(name):
    """Jet flux of constant-in-derivatives data equals the pointwise flux."""
    model = MODELS[name]
    space = jet_space(model.dim)
    n = 11
    W = random_states(model, n)
    w = np.zeros((model.ncomp, space.n, n))
    w[:, 0] = W
    cache = {}
    fluxes = [model.jet_flux(space, w, k, cache) for k in range(space.degree)]
    F0 = fluxes[0]
    for d in range(model.dim):
        assert np.allclose(F0[d][:, 0], model.flux(W, axis=d), atol=1e-12)


@pytest.mark.parametrize("name", ["burgers", "euler1d", "euler2d"])
def test_jet_flux_chain_rule(name):
    """d_x F(W(x)) from the jet flux equals the finite-difference derivative."""
    model = MODELS[name]
    space = jet_space(model.dim)
    W = random_states(model, 1)[:, 0]
    dWdx = 0.1 * RNG.normal(size=model.ncomp)

    # jet with only W and d_x W set
    w = np.zeros((model.ncomp, space.n, 1))
    w[:, 0, 0] = W
    ix = space.index[(1,) + (0,) * (space.nvars - 1)]
    w[:, ix, 0] = dWdx
    cache = {}
    F = model.jet_flux(space, w, 0, cache)[0]

    eps = 1e-6
    fd = (
        model.flux((W + eps * dWdx)[:, None], axis=0)
        - model.flux((W - eps * dWdx)[:, None], axis=0)
    )[:, 0] / (2.0 * eps)
    assert np.allclose(F[:, ix, 0], fd, atol=1e-7)
