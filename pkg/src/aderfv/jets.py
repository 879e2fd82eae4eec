"""Truncated space-time Taylor (jet) arithmetic.

A jet stores the normalized Taylor coefficients c_alpha = d^alpha W / alpha!
of one scalar quantity, indexed by multi-indices alpha over (x, t) or
(x, y, t) with total degree <= 4.  Coefficient arrays have shape
(n_indices, ...) where the trailing axes batch over face points, so all
operations below are vectorized.

Products are truncated Cauchy convolutions, division is graded
back-substitution.  Both come in "incremental" variants restricted to a
single output time-order, which is what the Lax-Wendroff fill needs: at
sweep k only flux coefficients of time-order k are consumed, so each
coefficient is convolved exactly once over the whole fill.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels

DEGREE = 4


def _multi_indices(nvars, degree):
    """All exponent tuples of length nvars with total degree <= degree,
    graded (by total degree, then lexicographic)."""
    out = []

    def rec(prefix, remaining, left):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], remaining - 1, left - e)

    rec([], nvars, degree)
    out.sort(key=lambda a: (sum(a), a))
    return out


class JetSpace:
    """Index bookkeeping and precomputed tables for one jet signature.

    nspace is the number of spatial variables (1 or 2); time is always the
    last variable.
    """

    def __init__(self, nspace, degree=DEGREE):
        self.nspace = nspace
        self.nvars = nspace + 1
        self.degree = degree
        self.idx = _multi_indices(self.nvars, degree)
        self.n = len(self.idx)
        self.index = {a: i for i, a in enumerate(self.idx)}
        self.t_order = np.array([a[-1] for a in self.idx])
        # spatial indices (t-order 0), in graded order; idx[spatial[0]] == 0
        self.spatial = [i for i, a in enumerate(self.idx) if a[-1] == 0]
        self.spatial_multi = [self.idx[i][:-1] for i in self.spatial]
        # pure time indices (0,...,0,k) for k = 0..degree
        self.pure_t = [self.index[(0,) * nspace + (k,)] for k in range(degree + 1)]
        self._rows = [np.flatnonzero(self.t_order == k) for k in range(degree + 1)]
        self._build_mul_tables()
        self._build_div_tables()
        self._build_ck_tables()
        self._build_flat_tables()

    def rows(self, k):
        """Indices of coefficients with time-order exactly k."""
        return self._rows[k]

    def _build_mul_tables(self):
        # pairs (a, b) with idx[a] + idx[b] == idx[g], grouped by output g,
        # and the groups bucketed by the t-order of g
        pair_lists = [[] for _ in range(self.n)]
        for ia, a in enumerate(self.idx):
            for ib, b in enumerate(self.idx):
                g = tuple(x + y for x, y in zip(a, b))
                gi = self.index.get(g)
                if gi is not None:
                    pair_lists[gi].append((ia, ib))
        self._mul_groups = [[] for _ in range(self.degree + 1)]
        for gi, pairs in enumerate(pair_lists):
            ia = np.array([p[0] for p in pairs])
            ib = np.array([p[1] for p in pairs])
            self._mul_groups[self.t_order[gi]].append((gi, ia, ib))

    def _build_div_tables(self):
        # For q = a / b: q[g]*b[0] = a[g] - sum b[beta] q[g-beta], beta != 0.
        # Outputs ordered graded within each t-order bucket, so every q[g-beta]
        # is available when g is processed.
        self._div_groups = [[] for _ in range(self.degree + 1)]
        for gi, g in enumerate(self.idx):
            pairs = []
            for ib, b in enumerate(self.idx):
                if ib == 0:
                    continue
                q = tuple(x - y for x, y in zip(g, b))
                if min(q) < 0:
                    continue
                pairs.append((self.index[q], ib))
            iq = np.array([p[0] for p in pairs], dtype=int)
            ib = np.array([p[1] for p in pairs], dtype=int)
            self._div_groups[self.t_order[gi]].append((gi, iq, ib))

    def _build_ck_tables(self):
        # Targets of one Lax-Wendroff sweep: for delta with delta_t == k,
        #   c_{delta+e_t}(W) = -sum_d (delta_d+1) c_{delta+e_d}(F_d) / (k+1)
        self._ck_targets = [[] for _ in range(self.degree)]
        for delta in self.idx:
            k = delta[-1]
            if sum(delta) + 1 > self.degree:
                continue
            target = delta[:-1] + (k + 1,)
            sources = []
            for d in range(self.nspace):
                src = tuple(e + (1 if v == d else 0) for v, e in enumerate(delta))
                sources.append((d, self.index[src], (delta[d] + 1) / (k + 1)))
            if k < self.degree:
                self._ck_targets[k].append((self.index[target], sources))

    def _build_flat_tables(self):
        # the same group lists flattened to index arrays for the compiled
        # loops: (group outputs, pair offsets, pair index arrays)
        def flatten(groups, per_group_arrays=2):
            gout = np.array([g[0] for g in groups], dtype=np.int64)
            starts = np.zeros(len(groups) + 1, dtype=np.int64)
            cols = [[] for _ in range(per_group_arrays)]
            for i, g in enumerate(groups):
                starts[i + 1] = starts[i] + len(g[1])
                for c in range(per_group_arrays):
                    cols[c].extend(g[1 + c])
            return (gout, starts) + tuple(np.array(c, dtype=np.int64) for c in cols)

        self._mul_flat = [flatten(g) for g in self._mul_groups]
        self._div_flat = [flatten(g) for g in self._div_groups]
        # per-sweep CK targets as flat arrays: target row, then per flux
        # direction the source row and factor
        self._ck_flat = []
        for targets in self._ck_targets:
            tgt = np.array([t for t, _ in targets], dtype=np.int64)
            cols = []
            for d in range(self.nspace):
                cols.append(np.array([srcs[d][1] for _, srcs in targets], dtype=np.int64))
                cols.append(np.array([srcs[d][2] for _, srcs in targets]))
            self._ck_flat.append((tgt,) + tuple(cols))

    @staticmethod
    def _flat2(a):
        return a.reshape(a.shape[0], -1) if a.ndim != 2 else a

    def _kernel_ok(self, *arrays):
        shape = arrays[0].shape
        return all(
            x.shape == shape and x.flags.c_contiguous and x.dtype == np.float64
            for x in arrays
        )

    # -- arithmetic ---------------------------------------------------------

    def mul_t(self, a, b, out, k):
        """Set the time-order-k coefficients of out to those of a*b."""
        if self._kernel_ok(a, b, out):
            _kernels.conv_t(self._flat2(a), self._flat2(b), self._flat2(out),
                            *self._mul_flat[k])
            return
        for gi, ia, ib in self._mul_groups[k]:
            out[gi] = np.einsum("i...,i...->...", a[ia], b[ib])

    def mul(self, a, b):
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
        for k in range(self.degree + 1):
            self.mul_t(a, b, out, k)
        return out

    def div_t(self, a, b, q, k):
        """Set the time-order-k coefficients of q to those of a/b.

        Lower-order coefficients of q must already be in place.
        """
        if self._kernel_ok(a, b, q):
            _kernels.back_div_t(self._flat2(a), self._flat2(b), self._flat2(q),
                                *self._div_flat[k])
            return q
        b0 = b[0]
        for gi, iq, ib in self._div_groups[k]:
            if len(iq):
                acc = a[gi] - np.einsum("i...,i...->...", b[ib], q[iq])
            else:
                acc = a[gi]
            q[gi] = acc / b0
        return q

    def div(self, a, b):
        if np.any(np.abs(b[0]) <= 1e-300):
            raise ZeroDivisionError("jet division by zero constant term")
        q = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
        for k in range(self.degree + 1):
            self.div_t(a, b, q, k)
        return q

    def from_spatial(self, derivs):
        """Jet coefficients from spatial derivatives.

        derivs has shape (len(self.spatial), ...) ordered like self.spatial
        and holds raw derivatives d^(m[,n]) W; they are scaled by 1/alpha!.
        """
        # rows with time-order >= 1 are left unset; every one of them is the
        # target of exactly one Lax-Wendroff sweep before it is read
        out = np.empty((self.n,) + derivs.shape[1:], dtype=float)
        for pos, (si, multi) in enumerate(zip(self.spatial, self.spatial_multi)):
            fact = 1.0
            for e in multi:
                fact *= math.factorial(e)
            out[si] = derivs[pos] / fact
        return out


def ck_fill(model, space, w):
    """Fill all time-order coefficients of a state jet in place.

    w has shape (ncomp, space.n, ...) with only the spatial (time-order-0)
    coefficients set.  Repeatedly applies d_t W = -d_x F(W) (- d_y G(W)),
    evaluating the fluxes in jet arithmetic, one time-order per sweep.
    Returns w.
    """
    cache = {}
    fast = w.ndim == 3 and w.flags.c_contiguous and w.dtype == np.float64
    for k in range(space.degree):
        fluxes = model.jet_flux(space, w, k, cache)
        if fast and all(f.ndim == 3 and f.flags.c_contiguous for f in fluxes):
            if space.nspace == 1:
                _kernels.ck_targets_1d(w, fluxes[0], *space._ck_flat[k])
            else:
                _kernels.ck_targets_2d(w, fluxes[0], fluxes[1], *space._ck_flat[k])
            continue
        for target, sources in space._ck_targets[k]:
            acc = 0.0
            for d, src, fac in sources:
                acc = acc - fac * fluxes[d][:, src]
            w[:, target] = acc
    return w


_SPACES = {}


def jet_space(nspace):
    """Shared JetSpace instance for 1 or 2 spatial dimensions."""
    if nspace not in _SPACES:
        _SPACES[nspace] = JetSpace(nspace)
    return _SPACES[nspace]
