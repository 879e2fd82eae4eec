"""Hermite-WENO (SHWENO) reconstruction.

Per cell, a quartic is built from three cell averages of the state and two
neighboring cell averages of its derivative, then nonlinearly combined with
two linear candidates using one set of weights shared by the value and all
derivative extrapolations.  Everything works in the local coordinate
xi = (x - x_j)/dx, where both the interpolation system and the smoothness
indicators are mesh-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

LINEAR_WEIGHTS = (0.994, 0.003, 0.003)
WENO_EPS = 1e-10

XI_LEFT = -0.5
XI_RIGHT = 0.5

# 3-point Gauss-Legendre on [-1/2, 1/2], weights on the unit cell (sum 1)
GAUSS3_NODES = np.array([-0.5 * math.sqrt(3.0 / 5.0), 0.0, 0.5 * math.sqrt(3.0 / 5.0)])
GAUSS3_WEIGHTS = np.array([5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])


@dataclass
class WeightConfig:
    gammas: tuple = LINEAR_WEIGHTS
    epsilon: float = WENO_EPS
    linear: bool = False

    def __post_init__(self):
        g = np.asarray(self.gammas, dtype=float)
        if not (np.all(g > 0) and abs(g.sum() - 1.0) < 1e-12):
            raise ValueError("linear weights must be positive and sum to 1")


def _moment(k):
    """Integral of xi^k over [-1/2, 1/2]."""
    return 0.0 if k % 2 else 1.0 / ((k + 1) * 2**k)


def _build_interp_matrix():
    """5x5 system for the Hermite quartic: cell averages of p on cells
    -1, 0, 1 and endpoint differences p(l+1/2)-p(l-1/2) on cells -1, 1."""
    M = np.zeros((5, 5))
    for row, l in enumerate((-1, 0, 1)):
        for m in range(5):
            M[row, m] = ((l + 0.5) ** (m + 1) - (l - 0.5) ** (m + 1)) / (m + 1)
    for row, l in zip((3, 4), (-1, 1)):
        for m in range(5):
            M[row, m] = (l + 0.5) ** m - (l - 0.5) ** m
    return M


_HQ_MATRIX = _build_interp_matrix()
_HQ_INV = np.linalg.inv(_HQ_MATRIX)


def _build_beta_form():
    """Quadratic form B with beta = c^T B c, the Jiang-Shu indicator
    sum_l dx^(2l-1) int (d^l p/dx^l)^2 dx written in xi coordinates."""
    B = np.zeros((5, 5))
    for l in range(1, 5):
        for m in range(l, 5):
            dm = math.factorial(m) / math.factorial(m - l)
            for n in range(l, 5):
                dn = math.factorial(n) / math.factorial(n - l)
                B[m, n] += dm * dn * _moment((m - l) + (n - l))
    return B


_BETA_FORM = _build_beta_form()

# factor table m!/(m-k)! for derivative evaluation
_DFACT = np.zeros((5, 5))
for _m in range(5):
    for _k in range(_m + 1):
        _DFACT[_m, _k] = math.factorial(_m) / math.factorial(_m - _k)


def hermite_quartic(wm, w0, wp, vm, vp, dx):
    """Quartic coefficients in xi from the Hermite stencil.

    Matches the cell averages (wm, w0, wp) on cells j-1, j, j+1 and the
    derivative cell averages (vm, vp) on cells j-1, j+1.
    Returns shape (5,) + broadcast shape.
    """
    rhs = np.stack(np.broadcast_arrays(wm, w0, wp, dx * vm, dx * vp))
    return np.einsum("ij,j...->i...", _HQ_INV, rhs)


def linear_pair(wm, w0, wp):
    """The two linear candidates (left and right two-cell interpolants)."""
    zeros = np.zeros(np.broadcast_shapes(np.shape(w0), np.shape(wm)))
    w0b = w0 + zeros
    cL = np.stack([w0b, w0 - wm + zeros, zeros, zeros, zeros])
    cR = np.stack([w0b, wp - w0 + zeros, zeros, zeros, zeros])
    return cL, cR


def smoothness_beta(c):
    """Smoothness indicator of a polynomial given by xi coefficients (<=5)."""
    c = np.asarray(c, dtype=float)
    if c.shape[0] < 5:
        pad = np.zeros((5 - c.shape[0],) + c.shape[1:])
        c = np.concatenate([c, pad])
    return np.einsum("i...,ij,j...->...", c, _BETA_FORM, c)


def nonlinear_weights(betas, cfg):
    """WENO weights from three indicators; collapses to the linear weights
    in linear mode or when all indicators coincide."""
    g = np.asarray(cfg.gammas)
    b = np.asarray(betas, dtype=float)
    if cfg.linear:
        shape = (3,) + b.shape[1:]
        return np.broadcast_to(g.reshape((3,) + (1,) * (b.ndim - 1)), shape).copy()
    tau = (0.5 * (np.abs(b[0] - b[1]) + np.abs(b[0] - b[2]))) ** 2
    gb = g.reshape((3,) + (1,) * (b.ndim - 1))
    wt = gb * (1.0 + tau / (b + cfg.epsilon))
    return wt / wt.sum(axis=0)


def shweno_coeffs_ref(wm, w0, wp, vm, vp, dx, cfg, weights=None):
    """Pure-numpy reference for shweno_coeffs (same contract)."""
    g1, g2, g3 = cfg.gammas
    c_big = hermite_quartic(wm, w0, wp, vm, vp, dx)
    cL, cR = linear_pair(wm, w0, wp)
    if weights is None:
        betas = np.stack([smoothness_beta(c_big), smoothness_beta(cL), smoothness_beta(cR)])
        weights = nonlinear_weights(betas, cfg)
    w1, w2, w3 = weights
    out = (w1 / g1) * c_big + (w2 - w1 * g2 / g1) * cL + (w3 - w1 * g3 / g1) * cR
    return out, weights


def shweno_coeffs(wm, w0, wp, vm, vp, dx, cfg, weights=None):
    """Nonlinearly limited quartic for one stencil.

    Returns (coeffs, weights); pass weights back in to reuse them for
    derivative-function reconstructions (the same-weights rule).
    """
    g1, g2, g3 = cfg.gammas
    wm, w0, wp, vm, vp = np.broadcast_arrays(wm, w0, wp, vm, vp)
    shape = wm.shape
    flat = lambda x: np.ascontiguousarray(x, dtype=float).reshape(-1)
    if weights is None:
        mode = 2 if cfg.linear else 0
        wts = np.empty((3, wm.size))
    else:
        mode = 1
        wts = np.ascontiguousarray(weights, dtype=float).reshape(3, -1)
    out = np.empty((5, wm.size))
    _kernels.shweno(flat(wm), flat(w0), flat(wp), flat(dx * vm), flat(dx * vp),
                    _HQ_INV, _BETA_FORM, g1, g2, g3, cfg.epsilon, mode, wts, out)
    if weights is None and cfg.linear:
        wts[0], wts[1], wts[2] = g1, g2, g3
    return out.reshape((5,) + shape), wts.reshape((3,) + shape)


def eval_derivs(c, xi, dx, orders=5):
    """Derivatives d^k p / dx^k, k = 0..orders-1, at local coordinate xi."""
    if np.isscalar(xi) or np.ndim(xi) == 0:
        c = np.ascontiguousarray(c, dtype=float)
        shape = c.shape[1:]
        out = np.empty((5, c[0].size))
        dxpow = dx ** -np.arange(5.0)
        _kernels.poly_derivs(c.reshape(5, -1), float(xi), dxpow, out)
        return out.reshape((5,) + shape)[:orders]
    return eval_derivs_ref(c, xi, dx, orders)


def eval_derivs_ref(c, xi, dx, orders=5):
    """Pure-numpy reference for eval_derivs (also handles array xi)."""
    out = []
    for k in range(orders):
        acc = 0.0
        for m in range(k, 5):
            acc = acc + _DFACT[m, k] * c[m] * xi ** (m - k)
        out.append(acc / dx**k)
    return np.stack(out)


def cell_average(c):
    """Cell average of the reconstruction polynomial (in its own cell)."""
    return c[0] + c[2] / 12.0 + c[4] / 80.0


# ---------------------------------------------------------------------------
# Face traces
# ---------------------------------------------------------------------------


def _project(L, data):
    if L.ndim >= 3 and L.shape[2:] == data.shape[1:]:
        p, c = L.shape[:2]
        tail = data.shape[1:]
        M = int(np.prod(tail))
        out = np.empty((p, M))
        _kernels.project(
            np.ascontiguousarray(L, dtype=float).reshape(p, c, M),
            np.ascontiguousarray(data, dtype=float).reshape(c, M),
            out,
        )
        return out.reshape((p,) + tail)
    return np.einsum("pc...,c...->p...", L, data)


def _unproject(R, data):
    return _project(R, data)


def normal_traces(u, ux, dx, cfg, pairs, model=None, char=False, mean_state=None):
    """Boundary-extrapolated derivative bundles for every interior face.

    u, ux: arrays of shape (n_transverse_orders, ncomp, ncells_ext, ...)
    holding (line) averages of d_y^n W and d_y^n W_x; ncells_ext counts two
    ghost cells per side.  pairs lists the requested (m[, n]) derivative
    multi-indices.  Returns (dL, dR) of shape (len(pairs), ncomp, nfaces, ...)
    in physical units.  In characteristic mode the stencil data are projected
    with the eigensystem of mean_state (one per face) before weighting.
    """
    n_tr = u.shape[0]
    ncomp = u.shape[1]
    ncells = u.shape[2]
    nfaces = ncells - 3  # faces between cells 1..ncells-2 (0-based padding 2)
    tail = u.shape[3:]
    out_shape = (len(pairs), ncomp, nfaces) + tail
    dL = np.zeros(out_shape)
    dR = np.zeros(out_shape)

    max_n = max((p[1] if len(p) > 1 else 0) for p in pairs)

    if not char:
        # one reconstruction per cell, evaluated at both of its faces
        cells = np.arange(1, ncells - 1)
        cm, cc, cp = cells - 1, cells, cells + 1
        weights = None
        for n in range(max_n + 1):
            cs, weights = shweno_coeffs(
                u[n][:, cm], u[n][:, cc], u[n][:, cp],
                ux[n][:, cm], ux[n][:, cp], dx, cfg,
                weights=weights if n else None,
            )
            plus = eval_derivs(cs, XI_RIGHT, dx)
            minus = eval_derivs(cs, XI_LEFT, dx)
            for s, p in enumerate(pairs):
                m = p[0]
                if (p[1] if len(p) > 1 else 0) != n or m + n > 4:
                    continue
                dL[s] = plus[m][:, :nfaces]  # left side of face f: cell f+1
                dR[s] = minus[m][:, 1:]      # right side: cell f+2
        return dL, dR

    lam, L, R = model.eigensystem(mean_state, axis=0)
    faces = np.arange(nfaces)
    wL = wR = None
    for n in range(max_n + 1):
        # both one-sided stencils of a face live on cells f..f+3; project
        # each shifted slice once with the face eigensystem
        pu = [_project(L, u[n][:, faces + q]) for q in range(4)]
        px = [_project(L, ux[n][:, faces + q]) for q in range(4)]
        csL, wL = shweno_coeffs(pu[0], pu[1], pu[2], px[0], px[2], dx, cfg,
                                weights=wL if n else None)
        csR, wR = shweno_coeffs(pu[1], pu[2], pu[3], px[1], px[3], dx, cfg,
                                weights=wR if n else None)
        derivsL = eval_derivs(csL, XI_RIGHT, dx)
        derivsR = eval_derivs(csR, XI_LEFT, dx)
        for s, p in enumerate(pairs):
            m = p[0]
            if (p[1] if len(p) > 1 else 0) != n or m + n > 4:
                continue
            dL[s] = _unproject(R, derivsL[m])
            dR[s] = _unproject(R, derivsR[m])
    return dL, dR


def face_traces_1d(wbar, vbar, dx, cfg, model=None, char=False):
    """Traces d_x^k W, k = 0..4, on both sides of every interior face.

    wbar, vbar: (ncomp, N+4) cell averages with two ghost layers.
    Returns (dL, dR) of shape (5, ncomp, N+1).
    """
    pairs = [(k,) for k in range(5)]
    u = wbar[None]
    ux = vbar[None]
    mean = None
    if char:
        N = wbar.shape[1] - 4
        mean = 0.5 * (wbar[:, 1 : N + 2] + wbar[:, 2 : N + 3])
    return normal_traces(u, ux, dx, cfg, pairs, model=model, char=char, mean_state=mean)


def transverse_line_values(wbar, ybar, vbar, zbar, dy, cfg):
    """Stage 1 of the dimension-by-dimension reconstruction (x-faces).

    For every cell column, reconstructs in the transverse (y) direction and
    evaluates line averages of d_y^n W and d_y^n W_x (n = 0..4) at the three
    face Gauss ordinates and the two cell-corner ordinates.

    Input arrays are (ncomp, NX+4, NY+4); target rows are the padded rows
    1..NY+2 so that corner lines of boundary faces are covered.  Returns
    (lineW, lineWx) of shape (5, ncomp, NX+4, NY+2, 5) with the last axis
    ordered (gauss0, gauss1, gauss2, eta=-1/2, eta=+1/2).
    """
    ncomp, nxt, nyt = wbar.shape
    rows = np.arange(1, nyt - 1)
    jm, jc, jp = rows - 1, rows, rows + 1
    eval_pts = np.concatenate([GAUSS3_NODES, [XI_LEFT, XI_RIGHT]])

    csW, weights = shweno_coeffs(
        wbar[:, :, jm], wbar[:, :, jc], wbar[:, :, jp],
        ybar[:, :, jm], ybar[:, :, jp], dy, cfg,
    )
    csV, _ = shweno_coeffs(
        vbar[:, :, jm], vbar[:, :, jc], vbar[:, :, jp],
        zbar[:, :, jm], zbar[:, :, jp], dy, cfg, weights=weights,
    )
    lineW = np.stack([eval_derivs(csW, pt, dy) for pt in eval_pts], axis=-1)
    lineWx = np.stack([eval_derivs(csV, pt, dy) for pt in eval_pts], axis=-1)
    return lineW, lineWx


def face_traces_2d(wbar, vbar, ybar, zbar, dx, dy, cfg, model=None, char=False, corners=True):
    """Derivative bundles d_x^m d_y^n W (m+n <= 4) at x-face quadrature
    points and cell corners, both sides.

    Arrays are (ncomp, NX+4, NY+4) with two ghost layers; y-faces are handled
    by the caller through the x<->y swap.  Returns (dL, dR, layout) where the
    traces have shape (15, ncomp, NX+1, ncol) and layout describes the column
    packing: the first NY*3 columns are (row, gauss) pairs in C order, the
    remaining NY+1 are corner ordinates from bottom to top.
    """
    from .jets import jet_space

    ncomp, nxt, nyt = wbar.shape
    NX, NY = nxt - 4, nyt - 4
    pairs = jet_space(2).spatial_multi

    lineW, lineWx = transverse_line_values(wbar, ybar, vbar, zbar, dy, cfg)
    # stage-1 target rows are padded rows 1..NY+2 -> local row index j-1
    gaussW = lineW[:, :, :, 1 : NY + 1, :3].reshape(5, ncomp, nxt, NY * 3)
    gaussWx = lineWx[:, :, :, 1 : NY + 1, :3].reshape(5, ncomp, nxt, NY * 3)
    if corners:
        # corner ordinate l (0..NY) between local rows l and l+1: average the
        # one-sided endpoint evaluations
        cornW = 0.5 * (lineW[:, :, :, : NY + 1, 4] + lineW[:, :, :, 1 : NY + 2, 3])
        cornWx = 0.5 * (lineWx[:, :, :, : NY + 1, 4] + lineWx[:, :, :, 1 : NY + 2, 3])
        u = np.concatenate([gaussW, cornW], axis=-1)
        ux = np.concatenate([gaussWx, cornWx], axis=-1)
    else:
        u, ux = gaussW, gaussWx

    mean = None
    if char:
        lc = np.arange(1, NX + 2)
        wl = wbar[:, lc][:, :, 2 : NY + 2]
        wr = wbar[:, lc + 1][:, :, 2 : NY + 2]
        mg = np.repeat(0.5 * (wl + wr), 3, axis=2)
        if corners:
            # corner columns: mean of the four surrounding cells
            wl2 = wbar[:, lc][:, :, 1 : NY + 3]
            wr2 = wbar[:, lc + 1][:, :, 1 : NY + 3]
            mc = 0.25 * (
                wl2[:, :, :-1] + wl2[:, :, 1:] + wr2[:, :, :-1] + wr2[:, :, 1:]
            )
            mean = np.concatenate([mg, mc], axis=-1)
        else:
            mean = mg

    dL, dR = normal_traces(u, ux, dx, cfg, pairs, model=model, char=char, mean_state=mean)
    layout = {"gauss": NY * 3, "corner": (NY + 1) if corners else 0}
    return dL, dR, layout
