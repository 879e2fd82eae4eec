"""Compiled inner loops (numba) for the jet arithmetic and the SHWENO
reconstruction.

These are straight loop transcriptions of the vectorized numpy reference
implementations in jets.py / reconstruction.py; they exist only to cut the
temporary-array traffic on large batches.  The numpy versions stay around as
oracles, and the wrappers fall back to them for shapes the kernels do not
handle.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def conv_t(a, b, out, gout, starts, ia, ib):
    """Truncated convolution, one output group table.

    a, b, out: (n_indices, M).  For each output row gout[g],
    out[gout[g]] = sum over pairs p in [starts[g], starts[g+1]) of
    a[ia[p]] * b[ib[p]].
    """
    M = a.shape[1]
    ng = gout.shape[0]
    for j in range(M):
        for g in range(ng):
            acc = 0.0
            for p in range(starts[g], starts[g + 1]):
                acc += a[ia[p], j] * b[ib[p], j]
            out[gout[g], j] = acc


@njit(cache=True)
def back_div_t(a, b, q, gout, starts, iq, ib):
    """Graded back-substitution for q = a / b, one output group table.

    q[gout[g]] = (a[gout[g]] - sum b[ib[p]] * q[iq[p]]) / b[0]; groups are
    ordered so every q[iq[p]] is already in place.
    """
    M = a.shape[1]
    ng = gout.shape[0]
    for j in range(M):
        b0 = b[0, j]
        for g in range(ng):
            gi = gout[g]
            acc = a[gi, j]
            for p in range(starts[g], starts[g + 1]):
                acc -= b[ib[p], j] * q[iq[p], j]
            q[gi, j] = acc / b0


@njit(cache=True)
def shweno(wm, w0, wp, dvm, dvp, hinv, bform, g1, g2, g3, eps, mode, wts, out):
    """Fused Hermite-quartic + nonlinear combination.

    Inputs are flat batches (M,); dvm/dvp are the derivative averages already
    scaled by dx.  mode: 0 = compute weights and store them in wts (3, M),
    1 = reuse wts, 2 = linear weights.  out is (5, M).
    """
    M = wm.shape[0]
    cb = np.empty(5)
    rhs = np.empty(5)
    for j in range(M):
        rhs[0] = wm[j]
        rhs[1] = w0[j]
        rhs[2] = wp[j]
        rhs[3] = dvm[j]
        rhs[4] = dvp[j]
        for i in range(5):
            acc = 0.0
            for m in range(5):
                acc += hinv[i, m] * rhs[m]
            cb[i] = acc
        # linear candidates: c0 = w0, c1 = one-sided difference
        sL = w0[j] - wm[j]
        sR = wp[j] - w0[j]
        if mode == 1:
            w1 = wts[0, j]
            w2 = wts[1, j]
            w3 = wts[2, j]
        elif mode == 2:
            w1 = g1
            w2 = g2
            w3 = g3
        else:
            bbig = 0.0
            for m in range(1, 5):
                for n in range(1, 5):
                    bbig += cb[m] * bform[m, n] * cb[n]
            bL = bform[1, 1] * sL * sL
            bR = bform[1, 1] * sR * sR
            tau = 0.5 * (abs(bbig - bL) + abs(bbig - bR))
            tau *= tau
            w1 = g1 * (1.0 + tau / (bbig + eps))
            w2 = g2 * (1.0 + tau / (bL + eps))
            w3 = g3 * (1.0 + tau / (bR + eps))
            s = w1 + w2 + w3
            w1 /= s
            w2 /= s
            w3 /= s
            wts[0, j] = w1
            wts[1, j] = w2
            wts[2, j] = w3
        f1 = w1 / g1
        f2 = w2 - w1 * g2 / g1
        f3 = w3 - w1 * g3 / g1
        out[0, j] = f1 * cb[0] + (f2 + f3) * w0[j]
        out[1, j] = f1 * cb[1] + f2 * sL + f3 * sR
        out[2, j] = f1 * cb[2]
        out[3, j] = f1 * cb[3]
        out[4, j] = f1 * cb[4]


@njit(cache=True)
def poly_derivs(c, xi, dxpow, out):
    """out[k] = d^k p / dx^k at xi for a quartic with xi-coefficients c.

    c: (5, M), dxpow[k] = dx**-k, out: (5, M).
    """
    M = c.shape[1]
    for j in range(M):
        x1 = xi
        x2 = x1 * xi
        x3 = x2 * xi
        x4 = x3 * xi
        c0 = c[0, j]
        c1 = c[1, j]
        c2 = c[2, j]
        c3 = c[3, j]
        c4 = c[4, j]
        out[0, j] = c0 + c1 * x1 + c2 * x2 + c3 * x3 + c4 * x4
        out[1, j] = (c1 + 2.0 * c2 * x1 + 3.0 * c3 * x2 + 4.0 * c4 * x3) * dxpow[1]
        out[2, j] = (2.0 * c2 + 6.0 * c3 * x1 + 12.0 * c4 * x2) * dxpow[2]
        out[3, j] = (6.0 * c3 + 24.0 * c4 * x1) * dxpow[3]
        out[4, j] = 24.0 * c4 * dxpow[4]


@njit(cache=True)
def project(L, d, out):
    """out[p] = sum_c L[p, c] * d[c], batched over the last axis."""
    p, c, M = L.shape
    for j in range(M):
        for i in range(p):
            acc = 0.0
            for k in range(c):
                acc += L[i, k, j] * d[k, j]
            out[i, j] = acc


@njit(cache=True)
def char_resolve(lam, L, R, dLs, dRs, tol, out):
    """Frozen-eigensystem linear Riemann sampling on x/t = 0.

    lam (p, M), L (p, c, M), R (c, p, M); dLs, dRs, out (c, s, M) stack s
    derivative orders resolved with the same eigensystem.
    """
    p, c, M = L.shape
    s = dLs.shape[1]
    alpha = np.empty(p)
    for j in range(M):
        for si in range(s):
            for i in range(p):
                aL = 0.0
                aR = 0.0
                for k in range(c):
                    aL += L[i, k, j] * dLs[k, si, j]
                    aR += L[i, k, j] * dRs[k, si, j]
                lv = lam[i, j]
                if lv > tol:
                    alpha[i] = aL
                elif lv < -tol:
                    alpha[i] = aR
                else:
                    alpha[i] = 0.5 * (aL + aR)
            for k in range(c):
                acc = 0.0
                for i in range(p):
                    acc += R[k, i, j] * alpha[i]
                out[k, si, j] = acc


@njit(cache=True)
def euler1d_flux_rows(m, E, mmu, EP, F, rows, gm1):
    """Pressure closure and flux rows F = (m, m*u + P, ...) for the given
    jet rows; the energy flux row is filled by a convolution afterwards."""
    M = m.shape[1]
    for ri in range(rows.shape[0]):
        r = rows[ri]
        for j in range(M):
            P = gm1 * (E[r, j] - 0.5 * mmu[r, j])
            EP[r, j] = E[r, j] + P
            F[0, r, j] = m[r, j]
            F[1, r, j] = mmu[r, j] + P


@njit(cache=True)
def euler2d_flux_rows(mx, my, E, mxmu, mynu, mxnu, EP, F, G, rows, gm1):
    """Pressure closure and the algebraic rows of both flux jets."""
    M = mx.shape[1]
    for ri in range(rows.shape[0]):
        r = rows[ri]
        for j in range(M):
            P = gm1 * (E[r, j] - 0.5 * (mxmu[r, j] + mynu[r, j]))
            EP[r, j] = E[r, j] + P
            F[0, r, j] = mx[r, j]
            F[1, r, j] = mxmu[r, j] + P
            F[2, r, j] = mxnu[r, j]
            G[0, r, j] = my[r, j]
            G[1, r, j] = mxnu[r, j]
            G[2, r, j] = mynu[r, j] + P


@njit(cache=True)
def ck_targets_1d(w, F, tgt, src, fac):
    """One Lax-Wendroff sweep: w[:, tgt] = -fac * F[:, src]."""
    nc = w.shape[0]
    M = w.shape[2]
    for i in range(tgt.shape[0]):
        t = tgt[i]
        s = src[i]
        f = fac[i]
        for c in range(nc):
            for j in range(M):
                w[c, t, j] = -f * F[c, s, j]


@njit(cache=True)
def ck_targets_2d(w, F, G, tgt, fsrc, ffac, gsrc, gfac):
    """One Lax-Wendroff sweep with both flux directions."""
    nc = w.shape[0]
    M = w.shape[2]
    for i in range(tgt.shape[0]):
        t = tgt[i]
        sf = fsrc[i]
        sg = gsrc[i]
        ff = ffac[i]
        fg = gfac[i]
        for c in range(nc):
            for j in range(M):
                w[c, t, j] = -(ff * F[c, sf, j] + fg * G[c, sg, j])
