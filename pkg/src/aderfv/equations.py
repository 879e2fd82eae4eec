"""Conservation-law models: scalar Burgers, 1D and 2D compressible Euler.

States are numpy arrays with the component axis first; every operation
broadcasts over arbitrary trailing axes (cells, face points, ...).
"""

from __future__ import annotations

import numpy as np

from . import _kernels

GAMMA = 1.4
PHYS_TOL = 1e-13


class SolverError(RuntimeError):
    pass


class NonPhysicalState(SolverError):
    """Density or pressure at/below the physicality floor."""


def _first_bad(mask):
    where = np.argwhere(mask)
    return tuple(where[0]) if len(where) else None


class Burgers:
    """Scalar Burgers equation, F(W) = W^2/2."""

    name = "burgers"
    dim = 1
    ncomp = 1

    def flux(self, W, axis=0):
        return 0.5 * W * W

    def max_wavespeed(self, W, axis=0):
        return np.abs(W[0])

    def eigensystem(self, W, axis=0):
        lam = W.copy()
        one = np.ones((1, 1) + W.shape[1:])
        return lam, one, one.copy()

    def primitive_to_conserved(self, V):
        return np.asarray(V, dtype=float).copy()

    def conserved_to_primitive(self, W):
        return np.asarray(W, dtype=float).copy()

    def require_physical(self, W, context=""):
        bad = _first_bad(~np.isfinite(W))
        if bad is not None:
            raise NonPhysicalState(f"non-finite state at {bad}{context}")

    def physical_mask(self, W):
        return np.isfinite(W).all(axis=0)

    def swap_xy(self, W):
        return W

    def jet_flux(self, space, w, k, cache):
        if "ww" not in cache:
            cache["ww"] = np.empty_like(w[0])
            cache["F"] = np.empty_like(w)
        space.mul_t(w[0], w[0], cache["ww"], k)
        rows = space.rows(k)
        cache["F"][0, rows] = 0.5 * cache["ww"][rows]
        return [cache["F"]]


class _EulerBase:
    gamma = GAMMA

    def pressure(self, W):
        rho = W[0]
        kinetic = 0.5 * np.sum(W[1 : 1 + self.dim] ** 2, axis=0) / rho
        return (self.gamma - 1.0) * (W[-1] - kinetic)

    def sound_speed(self, W):
        return np.sqrt(self.gamma * self.pressure(W) / W[0])

    def require_physical(self, W, context=""):
        rho = W[0]
        bad = _first_bad(~(rho > PHYS_TOL))
        if bad is not None:
            raise NonPhysicalState(f"density {rho[bad]:.6e} <= {PHYS_TOL} at {bad}{context}")
        P = self.pressure(W)
        bad = _first_bad(~(P > PHYS_TOL))
        if bad is not None:
            raise NonPhysicalState(f"pressure {P[bad]:.6e} <= {PHYS_TOL} at {bad}{context}")

    def max_wavespeed(self, W, axis=0):
        u = W[1 + axis] / W[0]
        return np.abs(u) + self.sound_speed(W)

    def physical_mask(self, W):
        with np.errstate(invalid="ignore"):
            ok = (W[0] > PHYS_TOL) & (self.pressure(W) > PHYS_TOL)
        return ok & np.isfinite(W).all(axis=0)


class Euler1D(_EulerBase):
    """1D Euler equations, W = (rho, rho*u, E), ideal gas."""

    name = "euler1d"
    dim = 1
    ncomp = 3

    def flux(self, W, axis=0):
        rho, m, E = W
        u = m / rho
        P = self.pressure(W)
        return np.stack([m, m * u + P, u * (E + P)])

    def primitive_to_conserved(self, V):
        rho, u, P = np.asarray(V, dtype=float)
        return np.stack([rho, rho * u, P / (self.gamma - 1.0) + 0.5 * rho * u * u])

    def conserved_to_primitive(self, W):
        rho, m, E = np.asarray(W, dtype=float)
        u = m / rho
        return np.stack([rho, u, (self.gamma - 1.0) * (E - 0.5 * rho * u * u)])

    def eigensystem(self, W, axis=0):
        rho, m, E = W
        u = m / rho
        P = self.pressure(W)
        a = np.sqrt(self.gamma * P / rho)
        H = (E + P) / rho
        b1 = (self.gamma - 1.0) / (a * a)
        b2 = 0.5 * b1 * u * u
        zeros = np.zeros_like(u)
        ones = np.ones_like(u)
        lam = np.stack([u - a, u, u + a])
        R = np.stack(
            [
                np.stack([ones, ones, ones]),
                np.stack([u - a, u, u + a]),
                np.stack([H - u * a, 0.5 * u * u, H + u * a]),
            ]
        )
        L = np.stack(
            [
                np.stack([0.5 * (b2 + u / a), 0.5 * (-b1 * u - 1.0 / a), 0.5 * b1]),
                np.stack([1.0 - b2, b1 * u, -b1]),
                np.stack([0.5 * (b2 - u / a), 0.5 * (-b1 * u + 1.0 / a), 0.5 * b1]),
            ]
        )
        del zeros, ones
        return lam, L, R

    def jet_flux(self, space, w, k, cache):
        if "mu" not in cache:
            for key in ("mu", "mmu", "EP"):
                cache[key] = np.empty_like(w[0])
            cache["F"] = np.empty_like(w)
        rho, m, E = w
        mu, mmu, EP = cache["mu"], cache["mmu"], cache["EP"]
        F = cache["F"]
        rows = space.rows(k)
        space.div_t(m, rho, mu, k)
        space.mul_t(m, mu, mmu, k)
        if w.ndim == 3 and w.flags.c_contiguous:
            _kernels.euler1d_flux_rows(m, E, mmu, EP, F, rows, self.gamma - 1.0)
        else:
            P = (self.gamma - 1.0) * (E[rows] - 0.5 * mmu[rows])
            EP[rows] = E[rows] + P
            F[0, rows] = m[rows]
            F[1, rows] = mmu[rows] + P
        space.mul_t(mu, EP, F[2], k)
        return [F]


class Euler2D(_EulerBase):
    """2D Euler equations, W = (rho, rho*mu, rho*nu, E), ideal gas."""

    name = "euler2d"
    dim = 2
    ncomp = 4

    def flux(self, W, axis=0):
        rho, mx, my, E = W
        u = W[1 + axis] / rho
        P = self.pressure(W)
        out = np.stack([rho * u, mx * u, my * u, u * (E + P)])
        out[1 + axis] += P
        return out

    def primitive_to_conserved(self, V):
        rho, u, v, P = np.asarray(V, dtype=float)
        E = P / (self.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
        return np.stack([rho, rho * u, rho * v, E])

    def conserved_to_primitive(self, W):
        rho, mx, my, E = np.asarray(W, dtype=float)
        return np.stack([rho, mx / rho, my / rho, self.pressure(W)])

    def swap_xy(self, W):
        """State with x and y roles exchanged: G(W) = swap(F(swap(W)))."""
        return W[[0, 2, 1, 3]]

    def eigensystem(self, W, axis=0):
        if axis == 1:
            lam, L, R = self.eigensystem(self.swap_xy(W), axis=0)
            perm = [0, 2, 1, 3]
            return lam, L[:, perm], R[perm]
        rho, mx, my, E = W
        u = mx / rho
        v = my / rho
        P = self.pressure(W)
        a = np.sqrt(self.gamma * P / rho)
        H = (E + P) / rho
        q2 = 0.5 * (u * u + v * v)
        b1 = (self.gamma - 1.0) / (a * a)
        b2 = b1 * q2
        ones = np.ones_like(u)
        zeros = np.zeros_like(u)
        lam = np.stack([u - a, u, u, u + a])
        R = np.stack(
            [
                np.stack([ones, ones, zeros, ones]),
                np.stack([u - a, u, zeros, u + a]),
                np.stack([v, v, ones, v]),
                np.stack([H - u * a, q2, v, H + u * a]),
            ]
        )
        L = np.stack(
            [
                np.stack(
                    [0.5 * (b2 + u / a), 0.5 * (-b1 * u - 1.0 / a), -0.5 * b1 * v, 0.5 * b1]
                ),
                np.stack([1.0 - b2, b1 * u, b1 * v, -b1]),
                np.stack([-v, zeros, ones, zeros]),
                np.stack(
                    [0.5 * (b2 - u / a), 0.5 * (-b1 * u + 1.0 / a), -0.5 * b1 * v, 0.5 * b1]
                ),
            ]
        )
        return lam, L, R

    def jet_flux(self, space, w, k, cache):
        if "mu" not in cache:
            for key in ("mu", "nu", "mxmu", "mynu", "mxnu", "EP"):
                cache[key] = np.empty_like(w[0])
            cache["F"] = np.empty_like(w)
            cache["G"] = np.empty_like(w)
        rho, mx, my, E = w
        c = cache
        rows = space.rows(k)
        space.div_t(mx, rho, c["mu"], k)
        space.div_t(my, rho, c["nu"], k)
        space.mul_t(mx, c["mu"], c["mxmu"], k)
        space.mul_t(my, c["nu"], c["mynu"], k)
        space.mul_t(mx, c["nu"], c["mxnu"], k)
        F, G = c["F"], c["G"]
        if w.ndim == 3 and w.flags.c_contiguous:
            _kernels.euler2d_flux_rows(
                mx, my, E, c["mxmu"], c["mynu"], c["mxnu"], c["EP"], F, G, rows,
                self.gamma - 1.0,
            )
        else:
            P = (self.gamma - 1.0) * (E[rows] - 0.5 * (c["mxmu"][rows] + c["mynu"][rows]))
            c["EP"][rows] = E[rows] + P
            F[0, rows] = mx[rows]
            F[1, rows] = c["mxmu"][rows] + P
            F[2, rows] = c["mxnu"][rows]
            G[0, rows] = my[rows]
            G[1, rows] = c["mxnu"][rows]
            G[2, rows] = c["mynu"][rows] + P
        space.mul_t(c["mu"], c["EP"], F[3], k)
        space.mul_t(c["nu"], c["EP"], G[3], k)
        return [F, G]


MODELS = {m.name: m for m in (Burgers(), Euler1D(), Euler2D())}
