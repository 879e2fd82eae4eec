"""Interface state solvers.

All solvers return the self-similar solution sampled on the interface ray
x/t = 0 and broadcast over trailing axes.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .equations import SolverError

ZERO_WAVE_TOL = 1e-12


def godunov_scalar(wL, wR):
    """Exact Godunov state for Burgers' flux W^2/2.

    Shock for wL > wR (speed (wL+wR)/2, left state on a stationary shock),
    rarefaction otherwise with sonic state 0.
    """
    wL = np.asarray(wL, dtype=float)
    wR = np.asarray(wR, dtype=float)
    s = 0.5 * (wL + wR)
    shock = np.where(s >= 0.0, wL, wR)
    rare = np.where(wL > 0.0, wL, np.where(wR < 0.0, wR, 0.0))
    return np.where(wL > wR, shock, rare)


def _wave_speed_estimates(model, WL, WR, axis):
    """Pressure-based HLLC wave speeds (Toro's adaptive PVRS/TRRS/TSRS)."""
    g = model.gamma
    rhoL, rhoR = WL[0], WR[0]
    uL, uR = WL[1 + axis] / rhoL, WR[1 + axis] / rhoR
    pL, pR = model.pressure(WL), model.pressure(WR)
    aL, aR = np.sqrt(g * pL / rhoL), np.sqrt(g * pR / rhoR)

    p_pvrs = 0.5 * (pL + pR) - 0.125 * (uR - uL) * (rhoL + rhoR) * (aL + aR)
    p_min = np.minimum(pL, pR)
    p_max = np.maximum(pL, pR)
    use_pvrs = (p_max <= 2.0 * p_min) & (p_min <= p_pvrs) & (p_pvrs <= p_max)

    # Two-rarefaction estimate
    z = (g - 1.0) / (2.0 * g)
    with np.errstate(divide="ignore", invalid="ignore"):
        p_trrs = ((aL + aR - 0.5 * (g - 1.0) * (uR - uL)) / (aL / pL**z + aR / pR**z)) ** (
            1.0 / z
        )
        # Two-shock estimate seeded with the PVRS pressure
        p0 = np.maximum(p_pvrs, 0.0)
        gL = np.sqrt((2.0 / ((g + 1.0) * rhoL)) / (p0 + (g - 1.0) / (g + 1.0) * pL))
        gR = np.sqrt((2.0 / ((g + 1.0) * rhoR)) / (p0 + (g - 1.0) / (g + 1.0) * pR))
        p_tsrs = (gL * pL + gR * pR - (uR - uL)) / (gL + gR)

    p_star = np.where(use_pvrs, p_pvrs, np.where(p_pvrs < p_min, p_trrs, p_tsrs))
    p_star = np.maximum(p_star, ZERO_WAVE_TOL)

    qL = np.where(
        p_star <= pL, 1.0, np.sqrt(1.0 + (g + 1.0) / (2.0 * g) * (p_star / pL - 1.0))
    )
    qR = np.where(
        p_star <= pR, 1.0, np.sqrt(1.0 + (g + 1.0) / (2.0 * g) * (p_star / pR - 1.0))
    )
    SL = uL - aL * qL
    SR = uR + aR * qR
    num = pR - pL + rhoL * uL * (SL - uL) - rhoR * uR * (SR - uR)
    den = rhoL * (SL - uL) - rhoR * (SR - uR)
    Sstar = num / den
    return SL, Sstar, SR


def _hllc_star(model, W, S, Sstar, axis):
    rho = W[0]
    u = W[1 + axis] / rho
    p = model.pressure(W)
    rho_star = rho * (S - u) / (S - Sstar)
    out = np.empty_like(W)
    out[0] = rho_star
    out[1 + axis] = rho_star * Sstar
    if model.ncomp == 4:
        out[2 - axis] = rho_star * (W[2 - axis] / rho)  # transverse momentum advected
    out[-1] = rho_star * (W[-1] / rho + (Sstar - u) * (Sstar + p / (rho * (S - u))))
    return out


def hllc_sample(model, WL, WR, axis=0):
    """HLLC state on the interface ray x/t = 0 for Euler systems."""
    SL, Sstar, SR = _wave_speed_estimates(model, WL, WR, axis)
    if np.any(SL >= SR):
        raise SolverError("degenerate HLLC wave speeds (S_L >= S_R)")
    starL = _hllc_star(model, WL, SL, Sstar, axis)
    starR = _hllc_star(model, WR, SR, Sstar, axis)
    out = np.where(Sstar >= 0.0, starL, starR)
    out = np.where(SL >= 0.0, WL, out)
    out = np.where(SR <= 0.0, WR, out)
    # consistency: identical data pass through exactly
    out = np.where((WL == WR).all(axis=0), WL, out)
    return out


def linear_char_sample(lam, L, R, dL, dR, tol=ZERO_WAVE_TOL):
    """Solve the linearized Riemann problem for derivative states.

    lam, L, R: frozen eigensystem (ncomp,...), (ncomp,ncomp,...); dL, dR:
    left/right data of shape (ncomp, ...) or (ncomp, nstack, ...) to resolve
    several derivative orders with the single eigensystem at once.
    """
    stacked = dL.ndim == lam.ndim + 1
    if stacked and lam.ndim >= 2:
        tail = lam.shape[1:]
        M = int(np.prod(tail))
        nc, ns = dL.shape[0], dL.shape[1]
        c3 = lambda x, shape: np.ascontiguousarray(x, dtype=float).reshape(shape)
        out = np.empty((nc, ns, M))
        _kernels.char_resolve(
            c3(lam, (nc, M)), c3(L, (nc, nc, M)), c3(R, (nc, nc, M)),
            c3(dL, (nc, ns, M)), c3(dR, (nc, ns, M)), tol, out,
        )
        return out.reshape((nc, ns) + tail)
    if stacked:
        aL = np.einsum("pc...,cs...->ps...", L, dL)
        aR = np.einsum("pc...,cs...->ps...", L, dR)
        lamx = lam[:, None]
    else:
        aL = np.einsum("pc...,c...->p...", L, dL)
        aR = np.einsum("pc...,c...->p...", L, dR)
        lamx = lam
    alpha = np.where(lamx > tol, aL, np.where(lamx < -tol, aR, 0.5 * (aL + aR)))
    if stacked:
        return np.einsum("cp...,ps...->cs...", R, alpha)
    return np.einsum("cp...,p...->c...", R, alpha)
