"""ADER face pipeline.

For each face quadrature point: leading Riemann state, one frozen
eigensystem, upwinded derivative states, Lax-Wendroff jet fill, and the
resulting degree-4 time Taylor polynomial of the interface state, from
which time-averaged fluxes and end-of-step interface states are read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import riemann
from .equations import Burgers
from .jets import ck_fill, jet_space


def _lobatto4_nodes():
    # endpoints plus the roots of P3'(2x-1) on [0, 1]
    r = 1.0 / math.sqrt(5.0)
    return np.array([0.0, 0.5 * (1.0 - r), 0.5 * (1.0 + r), 1.0])


def _weights_by_moment_matching(nodes):
    """Quadrature weights on [0,1] from the Vandermonde moment system."""
    n = len(nodes)
    V = np.vander(nodes, n, increasing=True).T
    moments = 1.0 / (1.0 + np.arange(n))
    return np.linalg.solve(V, moments)


@dataclass
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if abs(self.weights.sum() - 1.0) > 1e-14:
            raise ValueError("quadrature weights must sum to 1")
        if not (self.nodes[0] == 0.0 and self.nodes[-1] == 1.0):
            raise ValueError("rule must include both endpoints")


def lobatto4():
    nodes = _lobatto4_nodes()
    return QuadratureRule(nodes, _weights_by_moment_matching(nodes))


_DEFAULT_RULE = None


def default_rule():
    global _DEFAULT_RULE
    if _DEFAULT_RULE is None:
        _DEFAULT_RULE = lobatto4()
    return _DEFAULT_RULE


@dataclass
class PerfCounters:
    """Structural accounting: leading Riemann solves and frozen
    eigendecompositions, counted per face point."""

    rp_points: int = 0
    eigen_points: int = 0
    # robustness fallbacks actually taken (kept in the run metadata)
    trace_fallbacks: int = 0
    node_fallbacks: int = 0

    def reset(self):
        self.rp_points = 0
        self.eigen_points = 0
        self.trace_fallbacks = 0
        self.node_fallbacks = 0


def evaluate_taylor(coeffs, tau):
    """Horner evaluation of W(tau) = sum_k a_k tau^k.

    coeffs: (K+1, ncomp, ...) time-Taylor coefficients a_k = d_t^k W / k!.
    """
    out = coeffs[-1] * np.ones_like(np.asarray(tau, dtype=float))
    for a in coeffs[-2::-1]:
        out = out * tau + a
    return out


def time_average_flux(model, coeffs, dt, rule, axis=0):
    """Time-averaged numerical flux and the per-node states.

    Returns (flux, node_states) with node_states[-1] the end-of-step state
    (the rule contains the endpoint) for reuse by the derivative update.
    """
    node_states = [evaluate_taylor(coeffs, lam * dt) for lam in rule.nodes]
    flux = 0.0
    for w, state in zip(rule.weights, node_states):
        flux = flux + w * model.flux(state, axis=axis)
    return flux, node_states


def grp_time_taylor(model, dL, dR, counters=None):
    """Degree-4 time Taylor coefficients of the interface state.

    dL, dR: spatial derivative traces of shape (nsd, ncomp, ...) ordered by
    the jet space's graded spatial multi-indices (nsd = 5 in 1D, 15 in 2D).
    The normal direction is axis 0 of the (swapped) state.  Returns
    (coeffs, leading) with coeffs of shape (5, ncomp, ...).
    """
    space = jet_space(1 if len(dL) == 5 else 2)
    npts = dL.shape[2:]
    scalar = isinstance(model, Burgers) or model.ncomp == 1

    WL0, WR0 = dL[0], dR[0]
    if scalar:
        lead = riemann.godunov_scalar(WL0[0], WR0[0])[None]
    else:
        lead = riemann.hllc_sample(model, WL0, WR0, axis=0)
    lam, L, R = model.eigensystem(lead, axis=0)
    if counters is not None:
        n = int(np.prod(npts)) if npts else 1
        counters.rp_points += n
        counters.eigen_points += n

    # upwind resolution: normal order >= 1 through the frozen linear RP,
    # purely transverse derivatives by averaging (no normal jump to resolve)
    dstar = np.zeros_like(dL)
    dstar[0] = lead
    normal = [s for s, p in enumerate(space.spatial_multi) if p[0] >= 1]
    transverse = [
        s for s, p in enumerate(space.spatial_multi) if p[0] == 0 and sum(p) >= 1
    ]
    if normal:
        stackL = np.moveaxis(dL[normal], 0, 1)  # (ncomp, nstack, ...)
        stackR = np.moveaxis(dR[normal], 0, 1)
        resolved = riemann.linear_char_sample(lam, L, R, stackL, stackR)
        for pos, s in enumerate(normal):
            dstar[s] = resolved[:, pos]
    for s in transverse:
        dstar[s] = 0.5 * (dL[s] + dR[s])

    w = np.ascontiguousarray(np.moveaxis(space.from_spatial(dstar), 0, 1))
    ck_fill(model, space, w)  # w: (ncomp, space.n, ...)
    coeffs = np.stack([w[:, i] for i in space.pure_t])
    return coeffs, lead


# batch size for the face-point pipeline; keeps the dozen jet work arrays
# ((n_indices, ncomp, chunk) each) cache-resident on large grids
CHUNK_POINTS = 4096


def _solve_chunk(model, dL, dR, dt, rule, counters, where):
    coeffs, lead = grp_time_taylor(model, dL, dR, counters=counters)
    node_states = [evaluate_taylor(coeffs, lam * dt) for lam in rule.nodes]
    # robustness: a Taylor node that leaves the physical set degrades to the
    # leading Riemann state (zeroth order in time) at that point only
    for i in range(1, len(node_states)):
        ok = model.physical_mask(node_states[i])
        if not ok.all():
            node_states[i][:, ~ok] = node_states[0][:, ~ok]
            if counters is not None:
                counters.node_fallbacks += int((~ok).sum())
    for i, state in enumerate(node_states):
        model.require_physical(state, context=f" (quadrature node {i}{where})")
    flux = 0.0
    for w, state in zip(rule.weights, node_states):
        flux = flux + w * model.flux(state, axis=0)
    return flux, node_states[-1], coeffs


def solve_face_points(model, dL, dR, dt, rule=None, counters=None, where=""):
    """Full ADER pipeline for a batch of face points.

    Returns (flux_avg, end_state, taylor coefficients).  Aborts with a
    located diagnostic if any quadrature-node state is non-physical.
    """
    rule = rule or default_rule()
    tail = dL.shape[2:]
    M = int(np.prod(tail)) if tail else 1
    if M <= CHUNK_POINTS or len(tail) != 1:
        return _solve_chunk(model, dL, dR, dt, rule, counters, where)
    nsd, ncomp = dL.shape[:2]
    flux = np.empty((ncomp, M))
    end = np.empty((ncomp, M))
    coeffs = np.empty((5, ncomp, M))
    for lo in range(0, M, CHUNK_POINTS):
        sl = slice(lo, min(lo + CHUNK_POINTS, M))
        f, e, c = _solve_chunk(
            model, np.ascontiguousarray(dL[:, :, sl]), np.ascontiguousarray(dR[:, :, sl]),
            dt, rule, counters, where,
        )
        flux[:, sl] = f
        end[:, sl] = e
        coeffs[:, :, sl] = c
    return flux, end, coeffs
