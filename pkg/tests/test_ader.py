"""Face-point pipeline: quadrature rule, Taylor evaluation, GRP coefficients,
structural counters."""

import numpy as np
import pytest

from aderfv.ader import (
    PerfCounters,
    default_rule,
    evaluate_taylor,
    grp_time_taylor,
    lobatto4,
    solve_face_points,
    time_average_flux,
)
from aderfv.equations import MODELS, NonPhysicalState
from aderfv.jets import jet_space

RNG = np.random.default_rng(19)


def test_lobatto_rule_moments():
    """Endpoint rule with 4 nodes: exact for polynomial degree <= 5."""
    rule = lobatto4()
    assert rule.nodes[0] == 0.0 and rule.nodes[-1] == 1.0
    for k in range(6):
        got = (rule.weights * rule.nodes**k).sum()
        assert abs(got - 1.0 / (k + 1)) < 1e-14, k
    # degree 6 must NOT be exact (otherwise the rule is mislabeled)
    assert abs((rule.weights * rule.nodes**6).sum() - 1.0 / 7.0) > 1e-6


def test_evaluate_taylor_horner():
    coeffs = RNG.normal(size=(5, 3, 4))
    tau = 0.37
    direct = sum(coeffs[k] * tau**k for k in range(5))
    assert np.allclose(evaluate_taylor(coeffs, tau), direct, atol=1e-13)
    assert np.array_equal(evaluate_taylor(coeffs, 0.0), coeffs[0])


def test_time_average_flux_constant_state():
    model = MODELS["euler1d"]
    W = model.primitive_to_conserved(
        [np.array([1.0]), np.array([0.3]), np.array([2.0])]
    )
    coeffs = np.zeros((5, 3, 1))
    coeffs[0] = W
    flux, states = time_average_flux(model, coeffs, 0.01, default_rule())
    assert np.allclose(flux, model.flux(W), atol=1e-14)
    assert np.array_equal(states[-1], W)


def constant_jets(model, W, npts=6):
    space = jet_space(model.dim)
    nsd = len(space.spatial)
    d = np.zeros((nsd, model.ncomp, npts))
    d[0] = W[:, None]
    return d


@pytest.mark.parametrize("name", ["burgers", "euler1d", "euler2d"])
def test_grp_constant_data_time_coefficients_vanish(name):
    model = MODELS[name]
    if model.ncomp == 1:
        W = np.array([0.8])
    else:
        prim = [1.2, 0.4, 2.0] if model.ncomp == 3 else [1.2, 0.4, -0.3, 2.0]
        W = model.primitive_to_conserved(np.asarray(prim))
    d = constant_jets(model, W)
    coeffs, lead = grp_time_taylor(model, d, d.copy())
    assert np.allclose(lead, W[:, None], atol=1e-13)
    assert np.allclose(coeffs[0], W[:, None], atol=1e-13)
    assert np.allclose(coeffs[1:], 0.0, atol=1e-12)


def test_grp_linear_advection_coefficient():
    """Burgers with constant state w0 and slope s: d_t W = -w0 s exactly."""
    model = MODELS["burgers"]
    d = constant_jets(model, np.array([0.7]), npts=3)
    d[1] = 0.2  # d_x W trace on both sides
    coeffs, _ = grp_time_taylor(model, d, d.copy())
    assert np.allclose(coeffs[1], -0.7 * 0.2, atol=1e-13)


def test_counters_one_eigensystem_per_point():
    model = MODELS["euler1d"]
    W = model.primitive_to_conserved(np.asarray([1.0, 0.2, 1.5]))
    d = constant_jets(model, W, npts=23)
    counters = PerfCounters()
    solve_face_points(model, d, d.copy(), 1e-3, counters=counters)
    assert counters.rp_points == 23
    assert counters.eigen_points == 23


def test_chunking_matches_single_batch():
    """The chunked path used on large grids is bitwise equal to one batch."""
    import aderfv.ader as ader

    model = MODELS["euler1d"]
    n = 300
    rho = RNG.uniform(0.5, 2.0, n)
    u = RNG.uniform(-1.0, 1.0, n)
    p = RNG.uniform(0.5, 2.0, n)
    space = jet_space(1)
    d = np.zeros((5, 3, n))
    d[0] = model.primitive_to_conserved([rho, u, p])
    d[1] = 0.05 * RNG.normal(size=(3, n))
    dR = d.copy()
    dR[0] *= 1.0 + 1e-3
    one = solve_face_points(model, d, dR, 1e-3)
    old = ader.CHUNK_POINTS
    try:
        ader.CHUNK_POINTS = 64
        chunked = solve_face_points(model, d, dR, 1e-3)
    finally:
        ader.CHUNK_POINTS = old
    for a, b in zip(one, chunked):
        assert np.array_equal(a, b)


def test_node_fallback_degrades_to_leading_state():
    """A Taylor polynomial that exits the physical set inside the step is
    clipped to its leading state at the offending nodes only."""
    model = MODELS["euler1d"]
    W = model.primitive_to_conserved(np.asarray([0.83887609, -1.80892173, 0.22696844]))
    d = constant_jets(model, W, npts=2)
    dR = d.copy()
    # mismatched steep slopes drive the quartic time Taylor out of the
    # physical set at the later quadrature nodes of point 0
    d[1, :, 0] = [181.19781802, -142.4228161, 872.18334107]
    dR[1, :, 0] = [727.26023448, 348.85321627, -1213.70225883]
    counters = PerfCounters()
    flux, end, coeffs = solve_face_points(model, d, dR, 1e-3, counters=counters)
    assert counters.node_fallbacks > 0
    model.require_physical(end)
    # the untouched point keeps its constant-data state
    assert np.allclose(end[:, 1], W, atol=1e-10)
