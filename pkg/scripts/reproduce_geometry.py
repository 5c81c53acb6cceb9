"""Cayley circles, admissible arcs for R = 1/3 and jump times, written as CSV tables.

usage: python scripts/reproduce_geometry.py OUTDIR
"""
import sys
from pathlib import Path

import numpy as np

from shearcst import dynamics as dyn
from shearcst.cli import cmd_geometry
from shearcst.config import build_config
from shearcst.emit import Table, write_table


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    out = Path(argv[0] if argv else "geometry_out")
    cfg = build_config({"out": str(out)})
    tables = cmd_geometry(cfg)
    p = cfg.params
    lo, hi = dyn.squeeze_bounds(cfg.radius, p)
    print(f"squeeze bounds for R = {cfg.radius:.6g}: ({lo!r}, {hi!r})")
    rows = []
    for E in cfg.e_list:
        for x2 in (-1.0, -0.25, 0.25, 1.0):
            for t in dyn.jump_times(x2, E, None, p):
                u = complex(dyn.cayley_map(x2, E, p))
                rows.append((E, x2, t, abs((np.exp(-2j * p.omega * t) * u).real)))
    write_table(Table(["E", "x2", "t", "residual"], rows), out / "geometry_jumps.csv")
    for name, t in tables.items():
        print(f"{name}: {len(t.data)} rows")
    print(f"jump times: {len(rows)} rows, worst residual {max(r[3] for r in rows):.1e}")


if __name__ == "__main__":
    main()
