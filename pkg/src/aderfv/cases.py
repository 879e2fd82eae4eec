"""Benchmark case catalog: initial data, boundary kinds, exact solutions,
error norms, and convergence tables.

Initialization produces exact conserved cell averages (tensor Gauss-10 for
smooth data, analytic splitting at discontinuities) and exact derivative
cell averages from the fundamental theorem of calculus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from importlib import resources

import numpy as np

from .driver import NGHOST, BoundarySpec, ConservedField
from .equations import GAMMA, MODELS, SolverError

G10_NODES, G10_WEIGHTS = np.polynomial.legendre.leggauss(10)

SQRT3 = math.sqrt(3.0)

# double Mach reflection states (conserved) and shock description
DMR_POST = np.array([8.0, 57.1597, -33.0012, 563.544])
DMR_PRE = np.array([1.4, 0.0, 0.0, 2.5])
DMR_X0 = 1.0 / 6.0
DMR_SPEED = 20.0  # of h(x,t) = sqrt(3)(x - 1/6) - 20 t


# ---------------------------------------------------------------------------
# quadrature helpers
# ---------------------------------------------------------------------------


def gauss10_cell_averages(func, xl, dx):
    """Cell averages of func over [xl, xl+dx] per cell (exact to degree 19).

    func maps an array of points to (ncomp, npts)."""
    pts = xl[None, :] + 0.5 * dx * (G10_NODES[:, None] + 1.0)
    vals = func(pts.reshape(-1)).reshape(-1, 10, len(xl))
    return 0.5 * np.einsum("q,cqj->cj", G10_WEIGHTS, vals)


def _split_points(lo, hi, breaks):
    pts = [lo] + [b for b in breaks if lo < b < hi] + [hi]
    return pts


def averages_1d(func, xl, dx, breaks=()):
    """Exact conserved cell averages; cells crossing a break are integrated
    piecewise."""
    out = gauss10_cell_averages(func, xl, dx)
    for j, a in enumerate(xl):
        segs = _split_points(a, a + dx, breaks)
        if len(segs) == 2:
            continue
        acc = 0.0
        for lo, hi in zip(segs[:-1], segs[1:]):
            mid = lo + 0.5 * (hi - lo) * (G10_NODES + 1.0)
            acc = acc + (hi - lo) * 0.5 * (func(mid) * G10_WEIGHTS).sum(axis=-1)
        out[:, j] = acc / dx
    return out


def averages_2d(func, xl, yl, dx, dy, xbreaks=(), ybreaks=()):
    """Exact conserved cell averages on a tensor grid (ncomp, nx, ny)."""
    nx, ny = len(xl), len(yl)
    X = xl[:, None] + 0.5 * dx * (G10_NODES[None, :] + 1.0)
    Y = yl[:, None] + 0.5 * dy * (G10_NODES[None, :] + 1.0)
    shape = (nx, 10, ny, 10)
    XX = np.broadcast_to(X[:, :, None, None], shape)
    YY = np.broadcast_to(Y[None, None, :, :], shape)
    vals = func(XX.reshape(-1), YY.reshape(-1)).reshape(-1, nx, 10, ny, 10)
    out = 0.25 * np.einsum("q,r,cjqkr->cjk", G10_WEIGHTS, G10_WEIGHTS, vals)
    bad_x = {j for j, a in enumerate(xl) if len(_split_points(a, a + dx, xbreaks)) > 2}
    bad_y = {k for k, b in enumerate(yl) if len(_split_points(b, b + dy, ybreaks)) > 2}
    for j in range(nx):
        for k in range(ny):
            if j not in bad_x and k not in bad_y:
                continue
            xsegs = _split_points(xl[j], xl[j] + dx, xbreaks)
            ysegs = _split_points(yl[k], yl[k] + dy, ybreaks)
            acc = 0.0
            for xa, xb in zip(xsegs[:-1], xsegs[1:]):
                px = xa + 0.5 * (xb - xa) * (G10_NODES + 1.0)
                for ya, yb in zip(ysegs[:-1], ysegs[1:]):
                    py = ya + 0.5 * (yb - ya) * (G10_NODES + 1.0)
                    PX = np.repeat(px, 10)
                    PY = np.tile(py, 10)
                    v = func(PX, PY).reshape(-1, 10, 10)
                    w2 = G10_WEIGHTS[:, None] * G10_WEIGHTS[None, :]
                    acc = acc + 0.25 * (xb - xa) * (yb - ya) * (v * w2).sum(axis=(1, 2))
            out[:, j, k] = acc / (dx * dy)
    return out


def line_average_y(func, x, yl, dy, breaks=()):
    """(1/dy) integral over y of func(x, y) for a single x, per y-cell."""
    ny = len(yl)
    Y = yl[None, :] + 0.5 * dy * (G10_NODES[:, None] + 1.0)
    vals = func(np.full(Y.size, x), Y.reshape(-1)).reshape(-1, 10, ny)
    out = 0.5 * np.einsum("q,cqk->ck", G10_WEIGHTS, vals)
    for k, b in enumerate(yl):
        segs = _split_points(b, b + dy, breaks)
        if len(segs) == 2:
            continue
        acc = 0.0
        for lo, hi in zip(segs[:-1], segs[1:]):
            mid = lo + 0.5 * (hi - lo) * (G10_NODES + 1.0)
            acc = acc + (hi - lo) * 0.5 * (func(np.full(10, x), mid) * G10_WEIGHTS).sum(
                axis=-1
            )
        out[:, k] = acc / dy
    return out


# ---------------------------------------------------------------------------
# case definitions
# ---------------------------------------------------------------------------


@dataclass
class CaseSpec:
    name: str
    model_name: str
    xlim: tuple
    t_end: float
    default_n: int
    bc_kinds: tuple  # strings / boundary objects in (xlo, xhi[, ylo, yhi]) order
    conserved0: object  # conserved state function of x (1D) or (x, y)
    ylim: tuple = None
    default_ny: int = None
    xbreaks: tuple = ()
    ybreaks: tuple = ()
    has_exact: bool = False
    reference: str = None  # packaged reference-solution file
    description: str = ""

    @property
    def dim(self):
        return 1 if self.ylim is None else 2

    @property
    def model(self):
        return MODELS[self.model_name]


def _burgers0(x):
    return (0.5 + np.sin(np.pi * x))[None, :]


def _euler_sine0(x):
    rho = 1.0 + 0.2 * np.sin(np.pi * x)
    return MODELS["euler1d"].primitive_to_conserved([rho, np.ones_like(x), np.ones_like(x)])


def _piecewise_x(states, breaks):
    """Conserved state function: states[i] on (breaks[i-1], breaks[i])."""
    states = [np.asarray(s, dtype=float) for s in states]

    def func(x):
        x = np.asarray(x, dtype=float)
        out = np.empty((len(states[0]),) + x.shape)
        cond = np.digitize(x, breaks)
        for i, s in enumerate(states):
            out[:, cond == i] = s[:, None]
        return out

    return func


def _prim1d(rho, u, p):
    return MODELS["euler1d"].primitive_to_conserved([rho, u, p])


def _lax0(x):
    return _piecewise_x([_prim1d(0.445, 0.698, 3.528), _prim1d(0.5, 0.0, 0.571)], [0.0])(x)


def _shu_osher0(x):
    x = np.asarray(x, dtype=float)
    rho = np.where(x < -4.0, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
    u = np.where(x < -4.0, 2.629369, 0.0)
    p = np.where(x < -4.0, 10.333333, 1.0)
    return MODELS["euler1d"].primitive_to_conserved([rho, u, p])


def _turbulence0(x):
    x = np.asarray(x, dtype=float)
    rho = np.where(x < -4.5, 1.515695, 1.0 + 0.1 * np.sin(20.0 * np.pi * x))
    u = np.where(x < -4.5, 0.523346, 0.0)
    p = np.where(x < -4.5, 1.80500, 1.0)
    return MODELS["euler1d"].primitive_to_conserved([rho, u, p])


def _blast0(x):
    states = [_prim1d(1.0, 0.0, 1000.0), _prim1d(1.0, 0.0, 0.01), _prim1d(1.0, 0.0, 100.0)]
    return _piecewise_x(states, [0.1, 0.9])(x)


def _euler_sine2d0(x, y):
    rho = 1.0 + 0.2 * np.sin(np.pi * (x + y))
    one = np.ones_like(rho)
    return MODELS["euler2d"].primitive_to_conserved([rho, one, one, one])


def _vortex_prim(x, y):
    g = GAMMA
    r2 = (x - 5.0) ** 2 + (y - 5.0) ** 2
    e1 = np.exp(1.0 - r2)
    e2 = np.exp(0.5 * (1.0 - r2))
    rho = (1.0 - 25.0 * (g - 1.0) / (8.0 * g * np.pi**2) * e1) ** (1.0 / (g - 1.0))
    u = 1.0 - 2.5 / np.pi * e2 * (y - 5.0)
    v = 1.0 + 2.5 / np.pi * e2 * (x - 5.0)
    return rho, u, v, rho**g


def _vortex0(x, y):
    return MODELS["euler2d"].primitive_to_conserved(list(_vortex_prim(x, y)))


def _quadrants(q1, q2, q3, q4):
    """Conserved quadrant data split at x=0.5, y=0.5 (prims (rho,u,v,P))."""
    states = {
        (1, 1): q1, (0, 1): q2, (0, 0): q3, (1, 0): q4,
    }
    conv = {
        k: MODELS["euler2d"].primitive_to_conserved(np.asarray(v, dtype=float))
        for k, v in states.items()
    }

    def func(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.empty((4,) + x.shape)
        for (ix, iy), s in conv.items():
            mask = ((x >= 0.5) == bool(ix)) & ((y >= 0.5) == bool(iy))
            out[:, mask] = s[:, None]
        return out

    return func


_rp_shocks0 = _quadrants(
    (1.1, 0.0, 0.0, 1.1),
    (0.5065, 0.8939, 0.0, 0.35),
    (1.1, 0.8939, 0.8939, 1.1),
    (0.5065, 0.0, 0.8939, 0.35),
)

_rp_contacts0 = _quadrants(
    (1.0, 0.75, -0.5, 1.0),
    (2.0, 0.5, 0.5, 1.0),
    (1.0, -0.75, 0.5, 1.0),
    (3.0, -0.75, -0.5, 1.0),
)


def _dmr_shock_x(y, t):
    """x-position of the Mach-10 shock line at height y and time t."""
    return DMR_X0 + (y + DMR_SPEED * t) / SQRT3


def _dmr0(x, y, t=0.0):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    post = y >= SQRT3 * (x - DMR_X0) - DMR_SPEED * t
    out = np.where(post[None], DMR_POST[:, None], DMR_PRE[:, None])
    return out.reshape((4,) + x.shape)


# -- double Mach boundary objects -------------------------------------------


class FixedStateBoundary:
    """Dirichlet ghost fill with a constant conserved state."""

    def __init__(self, state):
        self.state = np.asarray(state, dtype=float)

    def fill(self, model, field, side, t):
        g = NGHOST
        sl = {
            "xlo": np.s_[:, :g, :], "xhi": np.s_[:, -g:, :],
            "ylo": np.s_[:, :, :g], "yhi": np.s_[:, :, -g:],
        }[side]
        field.wbar[sl] = self.state[:, None, None]
        for arr in (field.vbar, field.ybar, field.zbar):
            arr[sl] = 0.0


class DmrBottomBoundary:
    """Post-shock state ahead of x = 1/6, reflecting wall behind it."""

    def fill(self, model, field, side, t):
        g = NGHOST
        # reflective fill of the two bottom ghost rows (y-wall parity)
        signs = [1.0, 1.0, -1.0, -1.0]
        for arr, s in zip(field.arrays(), signs):
            arr[:, :, :g] = s * arr[:, :, g + 1 : g - 1 : -1]
            arr[2, :, :g] *= -1.0
        # override the inflow strip by the exact post-shock state
        xc = field.xlim[0] + field.dx * (np.arange(-g, field.nx + g) + 0.5)
        strip = xc < DMR_X0
        field.wbar[:, strip, :g] = DMR_POST[:, None, None]
        for arr in (field.vbar, field.ybar, field.zbar):
            arr[:, strip, :g] = 0.0


class DmrTopBoundary:
    """Time-exact Mach-10 shock motion along the top edge: ghost averages
    from the analytic piecewise-constant solution of the oblique shock."""

    def fill(self, model, field, side, t):
        g = NGHOST
        dx, dy = field.dx, field.dy
        xl = field.xlim[0] + dx * np.arange(-g, field.nx + g)
        yl = field.ylim[1] + dy * np.arange(g)
        W = np.empty((4, len(xl), g))
        V = np.empty_like(W)
        Y = np.empty_like(W)
        Z = np.empty_like(W)
        jump = (DMR_POST - DMR_PRE)[:, None, None]
        for k, b in enumerate(yl):
            frac = _line_cell_fraction_above(xl, b, dx, dy, t)
            W[:, :, k] = DMR_PRE[:, None] + (DMR_POST - DMR_PRE)[:, None] * frac
            uR = np.clip(b + dy - (SQRT3 * (xl + dx - DMR_X0) - DMR_SPEED * t), 0.0, dy)
            uL = np.clip(b + dy - (SQRT3 * (xl - DMR_X0) - DMR_SPEED * t), 0.0, dy)
            V[:, :, k] = jump[:, :, 0] * (uR - uL)[None] / (dx * dy)
            xsr = np.clip(_dmr_shock_x(b + dy, t) - xl, 0.0, dx)
            xsl = np.clip(_dmr_shock_x(b, t) - xl, 0.0, dx)
            Y[:, :, k] = jump[:, :, 0] * (xsr - xsl)[None] / (dx * dy)
            corner = lambda xx, yy: _dmr0(np.asarray([xx]), np.asarray([yy]), t)[:, 0]
            Z[:, :, k] = (
                np.stack([
                    corner(a + dx, b + dy) - corner(a, b + dy)
                    - corner(a + dx, b) + corner(a, b)
                    for a in xl
                ], axis=1)
                / (dx * dy)
            )
        field.wbar[:, :, -g:] = W
        field.vbar[:, :, -g:] = V
        field.ybar[:, :, -g:] = Y
        field.zbar[:, :, -g:] = Z


def _line_cell_fraction_above(xl, yl, dx, dy, t):
    """Exact area fraction of cells [xl,xl+dx]x[yl,yl+dy] lying above the
    shock line y = sqrt(3)(x - 1/6) - 20t (vectorized over xl)."""
    xl = np.asarray(xl, dtype=float)
    # u(x) = clip(ytop - line(x), 0, dy), decreasing in x; integrate exactly
    xa = _dmr_shock_x(yl, t)  # where line hits the cell bottom -> u = dy
    xb = _dmr_shock_x(yl + dy, t)  # where line hits the cell top -> u = 0
    lo = np.minimum(np.maximum(xa, xl), xl + dx)
    hi = np.minimum(np.maximum(xb, xl), xl + dx)
    full = (lo - xl) * dy
    line = lambda x: SQRT3 * (x - DMR_X0) - DMR_SPEED * t
    ua = np.clip(yl + dy - line(lo), 0.0, dy)
    ub = np.clip(yl + dy - line(hi), 0.0, dy)
    ramp = 0.5 * (ua + ub) * (hi - lo)
    return (full + ramp) / (dx * dy)


CASES = {}


def _register(spec):
    CASES[spec.name] = spec
    return spec


_register(CaseSpec(
    "burgers-smooth", "burgers", (0.0, 2.0), 0.5 / math.pi, 80,
    ("periodic", "periodic"), _burgers0, has_exact=True,
    description="Burgers, W0 = 0.5 + sin(pi x), pre-shock smooth solution",
))
_register(CaseSpec(
    "euler-sine", "euler1d", (0.0, 2.0), 10.0, 80,
    ("periodic", "periodic"), _euler_sine0, has_exact=True,
    description="1D Euler density sine advection",
))
_register(CaseSpec(
    "lax", "euler1d", (-5.0, 5.0), 1.3, 200,
    ("transmissive", "transmissive"), _lax0, xbreaks=(0.0,),
    description="Lax shock tube",
))
_register(CaseSpec(
    "shu-osher", "euler1d", (-5.0, 5.0), 1.8, 400,
    ("transmissive", "transmissive"), _shu_osher0, xbreaks=(-4.0,),
    reference="shu-osher-ref.txt",
    description="Mach-3 shock / density sine interaction",
))
_register(CaseSpec(
    "turbulence", "euler1d", (-5.0, 5.0), 5.0, 1500,
    ("transmissive", "transmissive"), _turbulence0, xbreaks=(-4.5,),
    reference="turbulence-ref.txt",
    description="shock / high-frequency density wave interaction",
))
_register(CaseSpec(
    "blast", "euler1d", (0.0, 1.0), 0.038, 800,
    ("reflective", "reflective"), _blast0, xbreaks=(0.1, 0.9),
    description="Woodward-Colella interacting blast waves",
))
_register(CaseSpec(
    "euler-sine-2d", "euler2d", (0.0, 2.0), 1.0, 40,
    ("periodic",) * 4, _euler_sine2d0, ylim=(0.0, 2.0), has_exact=True,
    description="2D Euler density sine advection",
))
_register(CaseSpec(
    "vortex", "euler2d", (0.0, 10.0), 10.0, 40,
    ("periodic",) * 4, _vortex0, ylim=(0.0, 10.0), has_exact=True,
    description="isentropic vortex advected along the diagonal",
))
_register(CaseSpec(
    "2d-rp-shocks", "euler2d", (0.0, 1.0), 0.25, 200,
    ("transmissive",) * 4, _rp_shocks0, ylim=(0.0, 1.0),
    xbreaks=(0.5,), ybreaks=(0.5,),
    description="2D Riemann problem, four shocks",
))
_register(CaseSpec(
    "2d-rp-contacts", "euler2d", (0.0, 1.0), 0.8, 200,
    ("transmissive",) * 4, _rp_contacts0, ylim=(0.0, 1.0),
    xbreaks=(0.5,), ybreaks=(0.5,),
    description="2D Riemann problem, four contacts (shear instability)",
))
_register(CaseSpec(
    "double-mach", "euler2d", (0.0, 4.0), 0.2, 480,
    (FixedStateBoundary(DMR_POST), "transmissive", DmrBottomBoundary(), DmrTopBoundary()),
    _dmr0, ylim=(0.0, 1.0), default_ny=120,
    description="double Mach reflection of a Mach-10 shock",
))


def get_case(name):
    if name not in CASES:
        raise SolverError(f"unknown case {name!r}; known: {', '.join(sorted(CASES))}")
    return CASES[name]


def boundary_spec(case):
    k = case.bc_kinds
    if case.dim == 1:
        return BoundarySpec(k[0], k[1])
    return BoundarySpec(k[0], k[1], k[2], k[3])


# ---------------------------------------------------------------------------
# initialization
# ---------------------------------------------------------------------------


def initialize_case(name, nx=None, ny=None):
    """Build the initial field of a catalog case on an nx(,ny) grid.

    Returns (model, field, bc, case)."""
    case = get_case(name)
    model = case.model
    nx = nx or case.default_n
    if case.dim == 1:
        field = ConservedField(model.ncomp, nx, case.xlim)
        dx = field.dx
        xl = case.xlim[0] + dx * np.arange(nx)
        field.wbar[:, 2:-2] = averages_1d(case.conserved0, xl, dx, case.xbreaks)
        edges = case.xlim[0] + dx * np.arange(nx + 1)
        We = case.conserved0(edges)
        field.vbar[:, 2:-2] = (We[:, 1:] - We[:, :-1]) / dx
        return model, field, boundary_spec(case), case

    ny = ny or case.default_ny or nx
    field = ConservedField(model.ncomp, nx, case.xlim, ny, case.ylim)
    dx, dy = field.dx, field.dy
    xl = case.xlim[0] + dx * np.arange(nx)
    yl = case.ylim[0] + dy * np.arange(ny)
    if name == "double-mach":
        _init_double_mach(field, xl, yl, dx, dy)
        return model, field, boundary_spec(case), case

    field.wbar[field.interior] = averages_2d(
        case.conserved0, xl, yl, dx, dy, case.xbreaks, case.ybreaks
    )
    # derivative averages by FTC: x-edge line averages, y-edge line averages,
    # and corner point values
    xe = case.xlim[0] + dx * np.arange(nx + 1)
    ye = case.ylim[0] + dy * np.arange(ny + 1)
    linx = np.stack([line_average_y(case.conserved0, x, yl, dy, case.ybreaks) for x in xe])
    field.vbar[field.interior] = np.moveaxis(linx[1:] - linx[:-1], 0, 1) / dx
    swapped = lambda y, x: case.conserved0(x, y)
    liny = np.stack([line_average_y(swapped, y, xl, dx, case.xbreaks) for y in ye])
    field.ybar[field.interior] = np.moveaxis(liny[1:] - liny[:-1], 0, 1).transpose(
        0, 2, 1
    ) / dy
    XX, YY = np.meshgrid(xe, ye, indexing="ij")
    Wc = case.conserved0(XX.reshape(-1), YY.reshape(-1)).reshape(-1, nx + 1, ny + 1)
    field.zbar[field.interior] = (
        Wc[:, 1:, 1:] - Wc[:, :-1, 1:] - Wc[:, 1:, :-1] + Wc[:, :-1, :-1]
    ) / (dx * dy)
    return model, field, boundary_spec(case), case


def _init_double_mach(field, xl, yl, dx, dy):
    jump = DMR_POST - DMR_PRE
    nx, ny = field.nx, field.ny
    W = np.empty((4, nx, ny))
    V = np.empty_like(W)
    Y = np.empty_like(W)
    for k, b in enumerate(yl):
        frac = _line_cell_fraction_above(xl, b, dx, dy, 0.0)
        W[:, :, k] = DMR_PRE[:, None] + jump[:, None] * frac
        uR = np.clip(b + dy - SQRT3 * (xl + dx - DMR_X0), 0.0, dy)
        uL = np.clip(b + dy - SQRT3 * (xl - DMR_X0), 0.0, dy)
        V[:, :, k] = jump[:, None] * (uR - uL)[None] / (dx * dy)
        xsr = np.clip(_dmr_shock_x(b + dy, 0.0) - xl, 0.0, dx)
        xsl = np.clip(_dmr_shock_x(b, 0.0) - xl, 0.0, dx)
        Y[:, :, k] = jump[:, None] * (xsr - xsl)[None] / (dx * dy)
    xe = np.concatenate([xl, [xl[-1] + dx]])
    ye = np.concatenate([yl, [yl[-1] + dy]])
    XX, YY = np.meshgrid(xe, ye, indexing="ij")
    Wc = _dmr0(XX.reshape(-1), YY.reshape(-1)).reshape(4, nx + 1, ny + 1)
    Z = (Wc[:, 1:, 1:] - Wc[:, :-1, 1:] - Wc[:, 1:, :-1] + Wc[:, :-1, :-1]) / (dx * dy)
    field.wbar[field.interior] = W
    field.vbar[field.interior] = V
    field.ybar[field.interior] = Y
    field.zbar[field.interior] = Z


# ---------------------------------------------------------------------------
# exact solutions
# ---------------------------------------------------------------------------

BURGERS_SHOCK_TIME = 1.0 / math.pi


def burgers_exact(x, t, tol=1e-14, max_iter=100):
    """Pre-shock solution of w = 0.5 + sin(pi(x - w t)) by damped Newton
    warm-started along the grid, with a bisection fallback."""
    if t > 0.9 * BURGERS_SHOCK_TIME:
        raise SolverError("Burgers exact solution requested past shock formation")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    w = 0.5 + math.sin(math.pi * x.flat[0])
    for j, xj in enumerate(x.flat):
        f = lambda v: v - 0.5 - math.sin(math.pi * (xj - v * t))
        converged = False
        for _ in range(max_iter):
            fv = f(w)
            if abs(fv) < tol:
                converged = True
                break
            fp = 1.0 + math.pi * t * math.cos(math.pi * (xj - w * t))
            step = fv / fp
            # damping: halve until the residual actually decreases
            for _ in range(60):
                if abs(f(w - step)) < abs(fv):
                    break
                step *= 0.5
            w = w - step
        if not converged:
            lo, hi = -0.6, 1.6
            flo = f(lo)
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if flo * fm <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
                if hi - lo < tol:
                    break
            w = 0.5 * (lo + hi)
        out.flat[j] = w
    return out


def exact_solution(name, x, y=None, t=0.0):
    """Exact conserved state of a smooth catalog case at points and time t."""
    case = get_case(name)
    if not case.has_exact:
        raise SolverError(f"case {name!r} has no closed-form solution")
    x = np.asarray(x, dtype=float)
    if name == "burgers-smooth":
        return burgers_exact(x, t)[None]
    if name == "euler-sine":
        rho = 1.0 + 0.2 * np.sin(np.pi * (x - t))
        one = np.ones_like(rho)
        return MODELS["euler1d"].primitive_to_conserved([rho, one, one])
    y = np.asarray(y, dtype=float)
    if name == "euler-sine-2d":
        rho = 1.0 + 0.2 * np.sin(np.pi * (x + y - 2.0 * t))
        one = np.ones_like(rho)
        return MODELS["euler2d"].primitive_to_conserved([rho, one, one, one])
    if name == "vortex":
        lx = case.xlim[1] - case.xlim[0]
        ly = case.ylim[1] - case.ylim[0]
        xs = case.xlim[0] + np.mod(x - t - case.xlim[0], lx)
        ys = case.ylim[0] + np.mod(y - t - case.ylim[0], ly)
        return _vortex0(xs, ys)
    raise SolverError(f"no exact solution wired for {name!r}")


def exact_averages(name, field, t=None):
    """Exact conserved cell averages of the case's solution on field's grid
    (Gauss-10 per direction), at the field's current time by default."""
    case = get_case(name)
    t = field.time if t is None else t
    if case.dim == 1:
        xl = case.xlim[0] + field.dx * np.arange(field.nx)
        return averages_1d(lambda x: exact_solution(name, x, t=t), xl, field.dx)
    xl = case.xlim[0] + field.dx * np.arange(field.nx)
    yl = case.ylim[0] + field.dy * np.arange(field.ny)
    return averages_2d(
        lambda x, y: exact_solution(name, x, y, t=t), xl, yl, field.dx, field.dy
    )


# ---------------------------------------------------------------------------
# norms, tables, references
# ---------------------------------------------------------------------------


def error_norms(a, b):
    """(L1, L2, Linf) of a - b: mean absolute, RMS, max over cells."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise SolverError(f"norm shape mismatch {a.shape} vs {b.shape}")
    e = np.abs(a - b)
    return float(e.mean()), float(np.sqrt((e * e).mean())), float(e.max())


def density_error_norms(name, field):
    """Norms of the density (first-component) cell-average error vs exact."""
    exact = exact_averages(name, field)
    return error_norms(field.wbar[field.interior][0], exact[0])


def convergence_report(ns, norms):
    """Aligned error/order table.  norms: list of (L1, L2, Linf) per mesh."""
    header = f"{'N':>8} {'L1':>13} {'order':>7} {'L2':>13} {'order':>7} {'Linf':>13} {'order':>7}"
    lines = [header]
    for i, (n, e) in enumerate(zip(ns, norms)):
        cells = [f"{n:>8}"]
        for k in range(3):
            cells.append(f"{e[k]:>13.3e}")
            if i == 0:
                cells.append(f"{'':>7}")
            else:
                prev = norms[i - 1][k]
                if e[k] > 0.0 and prev > 0.0:
                    cells.append(f"{math.log2(prev / e[k]):>7.3f}")
                else:
                    cells.append(f"{'—':>7}")
        lines.append(" ".join(cells))
    return "\n".join(lines)


def write_reference(path, name, field):
    """Store a fine-grid run as a plain-text reference solution."""
    case = get_case(name)
    xs = field.cell_centers(0)
    data = field.wbar[field.interior]
    comps = {1: "w", 3: "rho m E", 4: "rho mx my E"}[field.ncomp]
    with open(path, "w") as fh:
        fh.write(f"# case={name} N={field.nx} T={field.time:.17g} columns=x {comps}\n")
        for j, x in enumerate(xs):
            row = " ".join(f"{v:.17g}" for v in data[:, j])
            fh.write(f"{x:.17g} {row}\n")


def load_reference(name):
    """Load the packaged reference solution: (x centers, conserved data)."""
    case = get_case(name)
    if case.reference is None:
        raise SolverError(f"case {name!r} has no reference solution")
    ref = resources.files("aderfv").joinpath("data", case.reference)
    with ref.open("r") as fh:
        rows = np.loadtxt(fh)
    return rows[:, 0], rows[:, 1:].T


def reference_density_l1(name, field):
    """L1 density error against the packaged fine-grid reference, compared
    by conservative subsampling (block means of fine cell averages)."""
    _, data = load_reference(name)
    nref = data.shape[1]
    n = field.nx
    if nref % n:
        raise SolverError(f"reference N={nref} is not a multiple of {n}")
    coarse = data[0].reshape(n, nref // n).mean(axis=1)
    return float(np.abs(field.wbar[field.interior][0] - coarse).mean())
