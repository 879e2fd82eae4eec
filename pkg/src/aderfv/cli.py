"""Config-driven batch runner.

Subcommands: run <config>, convergence <config>, list-cases.  Configs are
plain key=value text; outputs are plain-text field dumps, contour grids,
norm reports, and convergence tables.  Exit codes: 0 success, 2 config
error, 3 solver abort, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import cases
from .driver import SolverConfig, run
from .equations import SolverError
from .reconstruction import WeightConfig

THREADS_ENV = "ADERFV_NUM_THREADS"


class ConfigError(SolverError):
    pass


@dataclass
class RunConfig:
    case: str = ""
    n: int = 0
    ny: int = 0  # 0 -> square grid / case default
    ns: tuple = ()  # refinement list for convergence mode
    cfl: float = 0.9
    t_end: float = -1.0  # < 0 -> case default
    weights: str = "nonlinear"
    characteristic: str = "auto"  # auto | on | off
    limiter: str = "off"
    outdir: str = "."
    formats: tuple = ("field", "norms")

    def serialize(self):
        lines = [
            f"case={self.case}",
            f"n={self.n}",
            f"ny={self.ny}",
            f"ns={','.join(str(v) for v in self.ns)}",
            f"cfl={self.cfl!r}",
            f"t_end={self.t_end!r}",
            f"weights={self.weights}",
            f"characteristic={self.characteristic}",
            f"limiter={self.limiter}",
            f"outdir={self.outdir}",
            f"formats={','.join(self.formats)}",
        ]
        return "\n".join(lines) + "\n"


_PARSERS = {
    "case": str,
    "n": int,
    "ny": int,
    "ns": lambda s: tuple(int(v) for v in s.split(",") if v),
    "cfl": float,
    "t_end": float,
    "weights": str,
    "characteristic": str,
    "limiter": str,
    "outdir": str,
    "formats": lambda s: tuple(v for v in s.split(",") if v),
}

DEFAULTS_HELP = """config keys (key=value, one per line, '#' comments):
  case            case name (see list-cases)               [required]
  n               cells (x direction)                      [case default]
  ny              cells in y, 2D cases                     [= n]
  ns              comma list of meshes, convergence mode   []
  cfl             time step ratio, in (0, 1]               [0.9]
  t_end           final time override                      [case default]
  weights         nonlinear | linear                       [nonlinear]
  characteristic  auto | on | off                          [auto]
  limiter         off | minmod                             [off]
  outdir          output directory                         [.]
  formats         comma list of field,contour,norms        [field,norms]
"""


def parse_config(text):
    cfg = RunConfig()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected key=value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _PARSERS:
            raise ConfigError(f"line {ln}: unknown key {key!r}")
        try:
            setattr(cfg, key, _PARSERS[key](value))
        except ValueError as exc:
            raise ConfigError(f"line {ln}: invalid value for {key!r}: {exc}") from exc
    validate_config(cfg)
    return cfg


def validate_config(cfg):
    if not cfg.case:
        raise ConfigError("missing required key 'case'")
    if cfg.case not in cases.CASES:
        raise ConfigError(
            f"unknown case {cfg.case!r}; known: {', '.join(sorted(cases.CASES))}"
        )
    if not (0.0 < cfg.cfl <= 1.0):
        raise ConfigError(f"cfl={cfg.cfl} out of range (0, 1]")
    if cfg.n < 0 or cfg.ny < 0 or any(v <= 0 for v in cfg.ns):
        raise ConfigError("mesh sizes must be positive")
    if cfg.weights not in ("nonlinear", "linear"):
        raise ConfigError(f"weights={cfg.weights!r} not in (nonlinear, linear)")
    if cfg.characteristic not in ("auto", "on", "off"):
        raise ConfigError(f"characteristic={cfg.characteristic!r} not in (auto, on, off)")
    if cfg.limiter not in ("off", "minmod"):
        raise ConfigError(f"limiter={cfg.limiter!r} not in (off, minmod)")
    bad = [f for f in cfg.formats if f not in ("field", "contour", "norms")]
    if bad:
        raise ConfigError(f"unknown output formats: {', '.join(bad)}")


def solver_config(cfg):
    char = {"auto": None, "on": True, "off": False}[cfg.characteristic]
    return SolverConfig(
        cfl=cfg.cfl,
        weights=WeightConfig(linear=cfg.weights == "linear"),
        char_mode=char,
        limiter=cfg.limiter,
    )


@dataclass
class RunReport:
    config: RunConfig = None
    case: object = None
    field: object = None
    norms: tuple = None  # (L1, L2, Linf) density vs exact, if available
    reference_l1: float = None
    wall_time: float = 0.0
    steps: int = 0
    metadata: dict = dc_field(default_factory=dict)


def execute_run(cfg):
    model, field, bc, case = cases.initialize_case(
        cfg.case, cfg.n or None, cfg.ny or None
    )
    t_end = cfg.t_end if cfg.t_end >= 0.0 else case.t_end
    t0 = time.time()
    stats = run(model, field, bc, solver_config(cfg), t_end)
    wall = time.time() - t0
    report = RunReport(
        config=cfg, case=case, field=field, wall_time=wall, steps=stats.steps
    )
    if case.has_exact:
        report.norms = cases.density_error_norms(cfg.case, field)
    if case.reference is not None:
        try:
            report.reference_l1 = cases.reference_density_l1(cfg.case, field)
        except (SolverError, FileNotFoundError):
            report.reference_l1 = None
    report.metadata = {
        "case": cfg.case,
        "nx": field.nx,
        "ny": field.ny or 0,
        "t_end": t_end,
        "steps": stats.steps,
        "wall_time": wall,
        "limiter": cfg.limiter,
        "trace_fallbacks": stats.counters.trace_fallbacks,
        "node_fallbacks": stats.counters.node_fallbacks,
    }
    return report


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------


def _fmt(v):
    return f"{v:.17g}"


def _stem(report):
    cfg = report.config
    grid = f"{report.field.nx}" if report.field.dim == 1 else (
        f"{report.field.nx}x{report.field.ny}"
    )
    return os.path.join(cfg.outdir, f"{cfg.case}-n{grid}")


def write_field_file(report, path):
    field = report.field
    model = report.case.model
    if field.dim != 1:
        raise ConfigError("field format is for 1D cases; use contour in 2D")
    W = field.wbar[field.interior]
    V = model.conserved_to_primitive(W)
    names = {1: ("w",), 3: ("rho", "m", "E")}[field.ncomp]
    pnames = {1: ("w",), 3: ("rho", "u", "P")}[field.ncomp]
    with open(path, "w") as fh:
        fh.write(f"# case={report.config.case} t={_fmt(field.time)}\n")
        fh.write(f"# columns: x {' '.join(names)} {' '.join(pnames)}\n")
        for j, x in enumerate(field.cell_centers(0)):
            vals = [x] + list(W[:, j]) + list(V[:, j])
            fh.write(" ".join(_fmt(v) for v in vals) + "\n")


def write_contour_file(report, path):
    field = report.field
    if field.dim != 2:
        raise ConfigError("contour format is for 2D cases")
    rho = field.wbar[field.interior][0]
    xs = field.cell_centers(0)
    ys = field.cell_centers(1)
    with open(path, "w") as fh:
        fh.write(f"# case={report.config.case} t={_fmt(field.time)}\n")
        fh.write("# columns: x y rho (gnuplot grid: blank line between x-blocks)\n")
        for j, x in enumerate(xs):
            for k, y in enumerate(ys):
                fh.write(f"{_fmt(x)} {_fmt(y)} {_fmt(rho[j, k])}\n")
            if j < len(xs) - 1:
                fh.write("\n")


def write_norms_file(report, path):
    with open(path, "w") as fh:
        for key, val in report.metadata.items():
            fh.write(f"{key}: {val}\n")
        if report.norms is not None:
            for key, val in zip(("l1", "l2", "linf"), report.norms):
                fh.write(f"{key}: {_fmt(val)}\n")
        if report.reference_l1 is not None:
            fh.write(f"reference_l1: {_fmt(report.reference_l1)}\n")


def emit_outputs(report, formats=None):
    """Write the requested output files; returns their paths."""
    formats = report.config.formats if formats is None else formats
    stem = _stem(report)
    written = []
    try:
        os.makedirs(report.config.outdir, exist_ok=True)
        for fmt in formats:
            if fmt == "field" and report.field.dim == 1:
                path = stem + "-field.txt"
                write_field_file(report, path)
            elif fmt == "contour" and report.field.dim == 2:
                path = stem + "-contour.txt"
                write_contour_file(report, path)
            elif fmt == "norms":
                path = stem + "-norms.txt"
                write_norms_file(report, path)
            else:
                continue
            written.append(path)
    except OSError as exc:
        raise IOError(f"writing outputs under {report.config.outdir!r}: {exc}") from exc
    return written


def run_convergence(cfg, out=None):
    """Refinement loop: run each mesh in cfg.ns and emit the error table."""
    out = sys.stdout if out is None else out
    if not cfg.ns:
        raise ConfigError("convergence mode needs ns=<comma list of meshes>")
    case = cases.get_case(cfg.case)
    if not case.has_exact:
        raise ConfigError(f"case {cfg.case!r} has no exact solution for error tables")
    norms = []
    for n in cfg.ns:
        sub = RunConfig(**{**cfg.__dict__, "n": n, "ny": 0, "ns": ()})
        report = execute_run(sub)
        norms.append(report.norms)
        print(f"# {cfg.case} N={n}: {report.steps} steps, {report.wall_time:.2f} s",
              file=out)
    table = cases.convergence_report(cfg.ns, norms)
    print(table, file=out)
    try:
        os.makedirs(cfg.outdir, exist_ok=True)
        path = os.path.join(cfg.outdir, f"{cfg.case}-convergence.txt")
        with open(path, "w") as fh:
            fh.write(table + "\n")
    except OSError as exc:
        raise IOError(f"writing table under {cfg.outdir!r}: {exc}") from exc
    return path


def _apply_thread_env():
    n = os.environ.get(THREADS_ENV)
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                    "NUMBA_NUM_THREADS"):
            os.environ.setdefault(var, n)


def _read_config(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc


def main(argv=None):
    _apply_thread_env()
    parser = argparse.ArgumentParser(
        prog="aderfv",
        description="finite-volume solver for 1D/2D hyperbolic conservation laws",
        epilog=DEFAULTS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command")
    p_run = sub.add_parser("run", help="run one case from a config file")
    p_run.add_argument("config")
    p_conv = sub.add_parser("convergence", help="refinement study from a config file")
    p_conv.add_argument("config")
    sub.add_parser("list-cases", help="list the case catalog")
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 0
    if args.command == "list-cases":
        width = max(len(n) for n in cases.CASES)
        for name, c in cases.CASES.items():
            grid = f"N={c.default_n}" + (f"x{c.default_ny or c.default_n}" if c.dim == 2 else "")
            print(f"{name:<{width}}  {c.model_name:<8} T={c.t_end:<8g} {grid:<12} {c.description}")
        return 0

    try:
        cfg = parse_config(_read_config(args.config))
        if args.command == "run":
            report = execute_run(cfg)
            for path in emit_outputs(report):
                print(path)
        else:
            run_convergence(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        return 3
    except IOError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
