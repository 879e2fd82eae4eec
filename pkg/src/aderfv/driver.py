"""Time loop: CFL step control, ghost cells, the conservative update, and
the end-of-step update of the derivative cell averages."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .ader import PerfCounters, default_rule, solve_face_points
from .equations import SolverError
from .reconstruction import (
    GAUSS3_WEIGHTS,
    WeightConfig,
    face_traces_1d,
    face_traces_2d,
)

NGHOST = 2


class ConservedField:
    """Uniform-grid cell-average data with two ghost layers per side.

    Holds the state averages (wbar) and the derivative averages: vbar for
    W_x, plus ybar (W_y) and zbar (W_xy) in 2D.  Component axis first.
    """

    def __init__(self, ncomp, nx, xlim, ny=None, ylim=None):
        self.ncomp = ncomp
        self.nx = nx
        self.xlim = tuple(xlim)
        self.dx = (self.xlim[1] - self.xlim[0]) / nx
        self.time = 0.0
        if ny is None:
            self.dim = 1
            shape = (ncomp, nx + 2 * NGHOST)
            self.ny = self.dy = None
            self.ylim = None
        else:
            self.dim = 2
            self.ny = ny
            self.ylim = tuple(ylim)
            self.dy = (self.ylim[1] - self.ylim[0]) / ny
            shape = (ncomp, nx + 2 * NGHOST, ny + 2 * NGHOST)
        self.wbar = np.zeros(shape)
        self.vbar = np.zeros(shape)
        if self.dim == 2:
            self.ybar = np.zeros(shape)
            self.zbar = np.zeros(shape)

    @property
    def interior(self):
        sl = (slice(None),) + (slice(NGHOST, -NGHOST),) * self.dim
        return sl

    def arrays(self):
        if self.dim == 1:
            return [self.wbar, self.vbar]
        return [self.wbar, self.vbar, self.ybar, self.zbar]

    def cell_centers(self, axis=0):
        if axis == 0:
            lo, d, n = self.xlim[0], self.dx, self.nx
        else:
            lo, d, n = self.ylim[0], self.dy, self.ny
        return lo + d * (np.arange(n) + 0.5)

    def copy(self):
        out = ConservedField(self.ncomp, self.nx, self.xlim, self.ny, self.ylim)
        out.time = self.time
        out.wbar[...] = self.wbar
        out.vbar[...] = self.vbar
        if self.dim == 2:
            out.ybar[...] = self.ybar
            out.zbar[...] = self.zbar
        return out


@dataclass
class BoundarySpec:
    """Boundary kind per side: 'periodic' | 'transmissive' | 'reflective'
    or an object with fill(model, field, side, t).  Sides are 'xlo', 'xhi'
    and, in 2D, 'ylo', 'yhi'."""

    xlo: object = "periodic"
    xhi: object = "periodic"
    ylo: object = None
    yhi: object = None

    def side(self, name):
        return getattr(self, name)


def _normal_momentum(model, axis):
    return 1 + axis if model.ncomp > 1 else None


def _fill_side(model, field, arrays, side, kind, t):
    g = NGHOST
    axis = 0 if side.startswith("x") else 1
    lo = side.endswith("lo")
    n = field.nx if axis == 0 else field.ny

    def ax_slice(s):
        idx = [slice(None)] * (field.dim + 1)
        idx[1 + axis] = s
        return tuple(idx)

    ghost = ax_slice(slice(0, g)) if lo else ax_slice(slice(n + g, n + 2 * g))
    if kind == "periodic":
        src = ax_slice(slice(n, n + g)) if lo else ax_slice(slice(g, 2 * g))
        for A in arrays:
            A[ghost] = A[src]
    elif kind == "transmissive":
        edge = ax_slice(slice(g, g + 1)) if lo else ax_slice(slice(n + g - 1, n + g))
        for A in arrays:
            A[ghost] = A[edge]
    elif kind == "reflective":
        mirror = (
            ax_slice(slice(g + 1, g - 1, -1))
            if lo
            else ax_slice(slice(n + g - 1, n + g - 3, -1))
        )
        mom = _normal_momentum(model, axis)
        # parity: state components even except the normal momentum; the
        # normal-derivative averages pick up an extra sign
        signs = [1.0, -1.0] if field.dim == 1 else (
            [1.0, -1.0, 1.0, -1.0] if axis == 0 else [1.0, 1.0, -1.0, -1.0]
        )
        for A, s in zip(arrays, signs):
            A[ghost] = s * A[mirror]
            if mom is not None:
                A[(mom,) + ghost[1:]] *= -1.0
    elif hasattr(kind, "fill"):
        kind.fill(model, field, side, t)
    else:
        raise SolverError(f"unknown boundary kind {kind!r} on side {side}")


def apply_boundary(model, field, spec, t=None):
    """Fill all ghost layers.  In 2D the x sides are filled first over the
    full row range, then the y sides over the full column range, so corner
    ghosts are populated consistently."""
    t = field.time if t is None else t
    arrays = field.arrays()
    for side in ("xlo", "xhi"):
        _fill_side(model, field, arrays, side, spec.side(side), t)
    if field.dim == 2:
        for side in ("ylo", "yhi"):
            _fill_side(model, field, arrays, side, spec.side(side), t)
    return field


def compute_dt(model, field, cfl, t_end=None, max_dt=1e30):
    """CFL time step, clipped so the run never overshoots t_end."""
    w = field.wbar[field.interior]
    if field.dim == 1:
        smax = float(np.max(model.max_wavespeed(w, axis=0)))
        dt = cfl * field.dx / smax if smax > 1e-300 else max_dt
    else:
        sx = float(np.max(model.max_wavespeed(w, axis=0)))
        sy = float(np.max(model.max_wavespeed(w, axis=1)))
        denom = sx / field.dx + sy / field.dy
        dt = cfl / denom if denom > 1e-300 else max_dt
    dt = min(dt, max_dt)
    if t_end is not None:
        dt = min(dt, t_end - field.time)
    return dt


@dataclass
class SolverConfig:
    cfl: float = 0.9
    weights: WeightConfig = dc_field(default_factory=WeightConfig)
    char_mode: object = None  # None = on for systems, off for scalars
    limiter: str = "off"
    rule: object = None

    def char_on(self, model):
        if self.char_mode is None:
            return model.ncomp > 1
        return bool(self.char_mode)


def _minmod3(a, b, c):
    pos = np.minimum(np.minimum(a, b), c)
    neg = np.maximum(np.maximum(a, b), c)
    return np.where((a > 0) & (b > 0) & (c > 0), pos, 0.0) + np.where(
        (a < 0) & (b < 0) & (c < 0), neg, 0.0
    )


def _limit_axis(model, deriv, wbar, d, axis, char):
    """Minmod deriv against one-sided slopes of wbar along the given axis."""
    fwd = (np.roll(wbar, -1, axis=1 + axis) - wbar) / d
    bwd = (wbar - np.roll(wbar, 1, axis=1 + axis)) / d
    if not char or model.ncomp == 1:
        return _minmod3(deriv, fwd, bwd)
    lam, L, R = model.eigensystem(wbar, axis=axis)
    proj = lambda x: np.einsum("pc...,c...->p...", L, x)
    lim = _minmod3(proj(deriv), proj(fwd), proj(bwd))
    return np.einsum("cp...,p...->c...", R, lim)


def limit_derivative_averages(model, field, mode, char=False):
    """Optional robustness valve: minmod the derivative averages against
    neighbor slopes of the state averages.  mode='off' is the identity."""
    if mode == "off":
        return field
    if mode != "minmod":
        raise SolverError(f"unknown limiter mode {mode!r}")
    inner = field.interior
    field.vbar[inner] = _limit_axis(model, field.vbar, field.wbar, field.dx, 0, char)[inner]
    if field.dim == 2:
        field.ybar[inner] = _limit_axis(model, field.ybar, field.wbar, field.dy, 1, char)[
            inner
        ]
        cross = (
            np.roll(np.roll(field.wbar, -1, 1), -1, 2)
            - np.roll(np.roll(field.wbar, 1, 1), -1, 2)
            - np.roll(np.roll(field.wbar, -1, 1), 1, 2)
            + np.roll(np.roll(field.wbar, 1, 1), 1, 2)
        ) / (4.0 * field.dx * field.dy)
        field.zbar[inner] = _minmod3(field.zbar, cross, cross)[inner]
    return field


def _swapped_arrays(model, field):
    """x<->y swapped, transposed copies of the four average fields."""
    sw = lambda A: np.ascontiguousarray(model.swap_xy(A).transpose(0, 2, 1))
    return sw(field.wbar), sw(field.ybar), sw(field.vbar), sw(field.zbar)


def _guard_traces(model, d, donor, counters=None):
    """Robustness fallback: where a reconstructed face trace leaves the
    physical set, restart that point from the donor cell average (higher
    derivative traces zeroed)."""
    if model.ncomp == 1:
        return
    ok = model.physical_mask(d[0])
    if ok.all():
        return
    bad = ~ok
    d[0][:, bad] = donor[:, bad]
    d[1:, :, bad] = 0.0
    if counters is not None:
        counters.trace_fallbacks += int(bad.sum())


def _guard_traces_2d(model, dL, dR, wbar, NX, NY, corners, counters):
    """Donor averages for x-face trace columns: repeated per Gauss ordinate,
    two-cell vertical means on corner columns."""
    lc = np.arange(1, NX + 2)
    for d, cells in ((dL, wbar[:, lc]), (dR, wbar[:, lc + 1])):
        donor = np.repeat(cells[:, :, 2 : NY + 2], 3, axis=2)
        if corners:
            cn = 0.5 * (cells[:, :, 1 : NY + 2] + cells[:, :, 2 : NY + 3])
            donor = np.concatenate([donor, cn], axis=-1)
        _guard_traces(model, d, donor, counters)


def _advance_1d(model, field, cfg, dt, counters):
    dL, dR = face_traces_1d(
        field.wbar, field.vbar, field.dx, cfg.weights, model=model, char=cfg.char_on(model)
    )
    N = field.nx
    _guard_traces(model, dL, field.wbar[:, 1 : N + 2], counters)
    _guard_traces(model, dR, field.wbar[:, 2 : N + 3], counters)
    where = f", t={field.time:.6g}"
    flux, end, _ = solve_face_points(
        model, dL, dR, dt, rule=cfg.rule or default_rule(), counters=counters, where=where
    )
    inner = field.interior
    field.wbar[inner] -= (dt / field.dx) * (flux[:, 1:] - flux[:, :-1])
    field.vbar[inner] = (end[:, 1:] - end[:, :-1]) / field.dx


def _advance_2d(model, field, cfg, dt, counters):
    rule = cfg.rule or default_rule()
    char = cfg.char_on(model)
    nx, ny = field.nx, field.ny
    where = f", t={field.time:.6g}"

    # x faces, including corner columns for the W_xy update
    dL, dR, layout = face_traces_2d(
        field.wbar, field.vbar, field.ybar, field.zbar,
        field.dx, field.dy, cfg.weights, model=model, char=char,
    )
    _guard_traces_2d(model, dL, dR, field.wbar, nx, ny, True, counters)
    shape = dL.shape
    flat = lambda A: A.reshape(shape[0], shape[1], -1)
    flux, end, _ = solve_face_points(
        model, flat(dL), flat(dR), dt, rule=rule, counters=counters, where=where + " (x)"
    )
    ngauss = layout["gauss"]
    flux = flux.reshape(shape[1], nx + 1, -1)
    end = end.reshape(shape[1], nx + 1, -1)
    fgauss = flux[..., :ngauss].reshape(shape[1], nx + 1, ny, 3)
    fbar = np.einsum("g,cfjg->cfj", GAUSS3_WEIGHTS, fgauss)
    end_x = end[..., :ngauss].reshape(shape[1], nx + 1, ny, 3)
    end_corner = end[..., ngauss:]

    # y faces via the x<->y swap; corners are not recomputed
    wbs, vbs, ybs, zbs = _swapped_arrays(model, field)
    dLs, dRs, _ = face_traces_2d(
        wbs, vbs, ybs, zbs, field.dy, field.dx, cfg.weights,
        model=model, char=char, corners=False,
    )
    _guard_traces_2d(model, dLs, dRs, wbs, ny, nx, False, counters)
    sshape = dLs.shape
    flats = lambda A: A.reshape(sshape[0], sshape[1], -1)
    fluxs, ends, _ = solve_face_points(
        model, flats(dLs), flats(dRs), dt, rule=rule, counters=counters, where=where + " (y)"
    )
    fluxs = fluxs.reshape(sshape[1], ny + 1, nx, 3)
    ends = ends.reshape(sshape[1], ny + 1, nx, 3)
    # back to the physical frame: swap components, transpose (face_y, ix)
    gflux = model.swap_xy(fluxs).transpose(0, 2, 1, 3)
    end_y = model.swap_xy(ends).transpose(0, 2, 1, 3)
    gbar = np.einsum("g,cifg->cif", GAUSS3_WEIGHTS, gflux)

    inner = field.interior
    field.wbar[inner] -= (dt / field.dx) * (fbar[:, 1:, :] - fbar[:, :-1, :]) + (
        dt / field.dy
    ) * (gbar[:, :, 1:] - gbar[:, :, :-1])
    field.vbar[inner] = np.einsum(
        "g,cfjg->cfj", GAUSS3_WEIGHTS, end_x[:, 1:, :, :] - end_x[:, :-1, :, :]
    ) / field.dx
    field.ybar[inner] = np.einsum(
        "g,cifg->cif", GAUSS3_WEIGHTS, end_y[:, :, 1:, :] - end_y[:, :, :-1, :]
    ) / field.dy
    field.zbar[inner] = (
        end_corner[:, 1:, 1:]
        - end_corner[:, :-1, 1:]
        - end_corner[:, 1:, :-1]
        + end_corner[:, :-1, :-1]
    ) / (field.dx * field.dy)


def advance_step(model, field, bc, cfg, dt, counters=None):
    """One full ADER step: ghosts, traces, face GRPs, conservative update,
    derivative-average update, optional limiter."""
    apply_boundary(model, field, bc)
    if field.dim == 1:
        _advance_1d(model, field, cfg, dt, counters)
    else:
        _advance_2d(model, field, cfg, dt, counters)
    limit_derivative_averages(model, field, cfg.limiter, char=cfg.char_on(model))
    field.time += dt
    model.require_physical(
        field.wbar[field.interior], context=f" (cell average, t={field.time:.6g})"
    )
    return field


@dataclass
class RunStats:
    steps: int = 0
    counters: PerfCounters = dc_field(default_factory=PerfCounters)
    limiter_used: bool = False


def run(model, field, bc, cfg, t_end, max_steps=10**9, callback=None):
    """Advance field to t_end.  Returns RunStats."""
    stats = RunStats()
    stats.limiter_used = cfg.limiter != "off"
    eps = 1e-12 * max(1.0, abs(t_end))
    while field.time < t_end - eps and stats.steps < max_steps:
        dt = compute_dt(model, field, cfg.cfl, t_end=t_end)
        advance_step(model, field, bc, cfg, dt, counters=stats.counters)
        stats.steps += 1
        if callback is not None:
            callback(field, stats)
    return stats
