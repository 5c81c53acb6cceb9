"""``shearcst`` command line: verify | evolve | geometry | spectrum | cst.

Exit status: 0 success, 1 invariant failure, 2 configuration or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import cst, dynamics as dyn, spectral as spec
from .config import RunConfig, load_config
from .emit import Table, slice_table, write_table
from .errors import ConfigInvalid, ShearCSTError
from .verify import SUITES, eigenvalue_table, run_all

log = logging.getLogger("shearcst")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _output_path(cfg: RunConfig, stem: str, suffix: str = "") -> Path | None:
    """``<out>/<stem><suffix>.<fmt>`` when ``out`` is a directory, else ``<out stem><suffix>``."""
    if cfg.output.path is None:
        return None
    out = Path(cfg.output.path)
    ext = "." + cfg.output.format
    if out.suffix in (".csv", ".json"):
        return out.with_name(out.stem + suffix + ext) if suffix else out
    return out / f"{stem}{suffix}{ext}"


def _emit(cfg: RunConfig, table: Table, stem: str, suffix: str = "") -> Path | None:
    path = _output_path(cfg, stem, suffix)
    if path is not None:
        write_table(table, path, cfg.output.format)
        log.info("wrote %s", path)
    return path


# --- verify -----------------------------------------------------------------------

def cmd_verify(cfg: RunConfig, suites=None) -> tuple[list, int]:
    rows = run_all(cfg, suites)
    status = EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL
    report = [{"suite": r.suite, "check": r.name, "residual": r.residual,
               "tolerance": r.tolerance, "pass": r.passed, "note": r.note} for r in rows]
    path = _output_path(cfg, "verify")
    text = _format_report(report, cfg)
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc
    for r in rows:
        line = f"{'PASS' if r.passed else 'FAIL'}  {r.suite:<12} {r.name:<55} {r.residual:.3e}  tol {r.tolerance:.0e}"
        print(line + (f"  [{r.note}]" if r.note else ""), file=sys.stderr)
    return report, status


def _format_report(report: list[dict], cfg: RunConfig) -> str:
    if cfg.output.format == "json":
        return json.dumps({"seed": cfg.seed, "checks": report}, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# meta seed {cfg.seed}\n")
    w = csv.DictWriter(buf, fieldnames=list(report[0]) if report else ["suite"])
    w.writeheader()
    for row in report:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


# --- evolve -------------------------------------------------------------------------

def evolve_seed(cfg: RunConfig) -> dyn.HeatSeed:
    return dyn.GaussianSeed(cfg.seed_alpha, cfg.params)


def evolve_slices(cfg: RunConfig, times) -> list:
    """One PhaseSlice per time at ``x2_center`` for the configured scenario."""
    p = cfg.params
    g1, g3 = cfg.grids.y_grid(p), cfg.grids.x3_grid(p)
    seed = evolve_seed(cfg)
    out = []
    for t in times:
        if cfg.scenario == "heisenberg":
            out.append(dyn.evolve_heisenberg(dyn.heisenberg_seed(seed, p), t, g1, g3, p))
        else:
            out.append(dyn.evolve_G(seed, cfg.E, t, g1, g3, [cfg.grids.x2_center], p).slice(0))
    return out


def cmd_evolve(cfg: RunConfig, times=None) -> list[Table]:
    times = cfg.t if times is None else times
    tables = []
    for k, (t, S) in enumerate(zip(times, evolve_slices(cfg, times))):
        table = slice_table(S, with_density=True,
                            meta={"t": repr(float(t)), "scenario": cfg.scenario, "E": repr(cfg.E)})
        _emit(cfg, table, "evolve", f"_t{k:03d}")
        tables.append(table)
    return tables


# --- geometry -----------------------------------------------------------------------

def cmd_geometry(cfg: RunConfig) -> dict[str, Table]:
    p = cfg.params
    rows = []
    for E in cfg.e_list:
        geo = dyn.SqueezeGeometry.of(E, p)
        for u in dyn.cayley_circle(E, p):
            rows.append((E, u.real, u.imag, geo.center, geo.radius))
    circles = Table(["E", "re_u", "im_u", "center", "radius"], rows)
    rows = []
    for E in cfg.e_list:
        half = dyn.admissible_x2(E, cfg.radius, p)
        if half is None:
            continue
        for x2 in np.linspace(-half, half, 101)[1:-1]:
            u = complex(dyn.cayley_map(x2, E, p))
            rows.append((E, x2, u.real, u.imag))
    arcs = Table(["E", "x2", "re_u", "im_u"], rows,
                 meta={"R": repr(cfg.radius), "E_min": repr(dyn.squeeze_bounds(cfg.radius, p)[0]),
                       "E_max": repr(dyn.squeeze_bounds(cfg.radius, p)[1])})
    rows = []
    lattice = np.arange(-2.0, 3.0)
    for x2 in (0.0, 0.5, 1.0):
        for x1 in lattice:
            for x3 in lattice:
                s1, s3 = dyn.shear(x2, x1, x3)
                rows.append((x2, x1, x3, float(s1), float(s3)))
    shear = Table(["x2", "x1", "x3", "x1_sheared", "x3_sheared"], rows)
    tables = {"circles": circles, "arcs": arcs, "shear": shear}
    for name, table in tables.items():
        _emit(cfg, table, "geometry", "_" + name)
    return tables


# --- spectrum -----------------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig, j_max: int | None = None) -> dict[str, Table]:
    j_max = cfg.j_max if j_max is None else j_max
    spec._check_degree(j_max)
    table = Table(["j", "measured", "expected", "residual"],
                  [tuple(map(float, r)) for r in eigenvalue_table(cfg, j_max)],
                  meta={"E": repr(cfg.E), "x2": repr(cfg.grids.x2_center)})
    _emit(cfg, table, "spectrum", "_table")
    out = {"table": table}
    p = cfg.params
    g1, g3 = cfg.grids.y_grid(p), cfg.grids.x3_grid(p)
    for j in range(j_max + 1):
        P = spec.eigenstate(j, g1, g3, [cfg.grids.x2_center], cfg.E, p).slice(0)
        mode = slice_table(P, with_density=True, meta={"j": str(j)})
        _emit(cfg, mode, "spectrum", f"_mode{j:02d}")
        out[f"mode{j}"] = mode
    return out


# --- cst ----------------------------------------------------------------------------

def cmd_cst(cfg: RunConfig) -> Table:
    p = cfg.params
    yg = cfg.grids.y_grid(p)
    f = cst.squeezed_state(cfg.q, yg, p, cfg.fiducial.normalization)
    phi = cst.make_fiducial(cfg.fiducial, yg, p)
    S = cst.cst_slice(f, phi, cfg.grids.x2_center, p)
    table = slice_table(S, meta={"q": repr(cfg.q), "E": repr(cfg.E)})
    _emit(cfg, table, "cst")
    return table


# --- argument handling ---------------------------------------------------------------

def _time_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad time list {text!r}") from exc
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value file")
    common.add_argument("--out", metavar="PATH", help="output file or directory")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int)
    common.add_argument("--grid-n", type=int, dest="grid_n")
    common.add_argument("--e-squeeze", type=float, dest="e_squeeze")
    common.add_argument("--t", type=_time_list, metavar="LIST", help="comma-separated times")
    common.add_argument("-v", "--verbose", action="store_true")
    parser = argparse.ArgumentParser(prog="shearcst", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    v.add_argument("--suite", action="append", choices=sorted(SUITES), help="restrict to a suite")
    sub.add_parser("evolve", parents=[common], help="time evolution slices")
    sub.add_parser("geometry", parents=[common], help="Cayley circles, arcs and shear lattice")
    s = sub.add_parser("spectrum", parents=[common], help="eigenvalue table and mode profiles")
    s.add_argument("--j-max", type=int, dest="j_max")
    sub.add_parser("cst", parents=[common], help="transform slice of a squeezed state")
    return parser


def config_from_args(args: argparse.Namespace, environ=None) -> RunConfig:
    keys = ("out", "format", "seed", "grid_n", "e_squeeze", "t", "j_max")
    overrides = {k: getattr(args, k, None) for k in keys}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return load_config(args.config, overrides, environ)


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        cfg = config_from_args(args, environ)
        if args.command == "verify":
            _, status = cmd_verify(cfg, args.suite)
            return status
        if args.command == "evolve":
            cmd_evolve(cfg)
        elif args.command == "geometry":
            cmd_geometry(cfg)
        elif args.command == "spectrum":
            cmd_spectrum(cfg)
        elif args.command == "cst":
            cmd_cst(cfg)
    except ConfigInvalid as exc:
        print(f"shearcst: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ShearCSTError as exc:
        print(f"shearcst: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"shearcst: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
