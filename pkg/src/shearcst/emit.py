"""CSV/JSON emission of tabular results with grid metadata, and the matching readers.

CSV layout::

    # grid x1 <origin> <step> <count>
    # grid x3 <origin> <step> <count>
    # meta <key> <value>
    x1,x3,re,im
    ...

Floats are written with ``repr`` so parsing reproduces them bit for bit.
JSON carries the same content as ``{"grids", "meta", "columns", "rows"}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grids import PhaseSlice, UniformGrid


@dataclass
class Table:
    columns: list[str]
    data: np.ndarray                                  # float, shape (rows, len(columns))
    grids: dict[str, UniformGrid] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float).reshape(-1, len(self.columns))

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]


def slice_table(S: PhaseSlice, with_density: bool = False, meta: dict | None = None) -> Table:
    """Rows ``x1, x3, re, im`` (and ``abs2, phase``) in x1-major order."""
    x1, x3 = S.mesh()
    v = S.values
    cols = [x1.ravel(), x3.ravel(), v.real.ravel(), v.imag.ravel()]
    names = ["x1", "x3", "re", "im"]
    if with_density:
        cols += [np.abs(v).ravel() ** 2, np.angle(v).ravel()]
        names += ["abs2", "phase"]
    m = {"x2": repr(float(S.x2))}
    m.update(meta or {})
    return Table(names, np.stack(cols, axis=1), {"x1": S.grid1, "x3": S.grid3}, m)


def table_values(t: Table) -> np.ndarray:
    """Complex ``[n1, n3]`` array back from a slice table."""
    n1, n3 = t.grids["x1"].count, t.grids["x3"].count
    return (t.column("re") + 1j * t.column("im")).reshape(n1, n3)


def _fmt(v: float) -> str:
    return repr(float(v))


def write_table(t: Table, path: str | Path, fmt: str = "csv") -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            if fmt == "csv":
                for axis, g in t.grids.items():
                    fh.write(f"# grid {axis} {_fmt(g.origin)} {_fmt(g.step)} {g.count}\n")
                for k, v in t.meta.items():
                    fh.write(f"# meta {k} {v}\n")
                fh.write(",".join(t.columns) + "\n")
                for row in t.data:
                    fh.write(",".join(_fmt(v) for v in row) + "\n")
            elif fmt == "json":
                doc = {"grids": [{"axis": a, "origin": g.origin, "step": g.step, "count": g.count}
                                 for a, g in t.grids.items()],
                       "meta": t.meta, "columns": t.columns, "rows": t.data.tolist()}
                json.dump(doc, fh)
            else:
                raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc
    return path


def read_table(path: str | Path) -> Table:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        doc = json.loads(text)
        grids = {g["axis"]: UniformGrid(float(g["origin"]), float(g["step"]), int(g["count"]))
                 for g in doc["grids"]}
        return Table(doc["columns"], np.array(doc["rows"], dtype=float), grids, doc["meta"])
    grids, meta, columns, rows = {}, {}, None, []
    for line in text.splitlines():
        if line.startswith("# grid "):
            _, _, axis, origin, step, count = line.split()
            grids[axis] = UniformGrid(float(origin), float(step), int(count))
        elif line.startswith("# meta "):
            _, _, key, value = line.split(" ", 3)
            meta[key] = value
        elif line.startswith("#") or not line.strip():
            continue
        elif columns is None:
            columns = line.split(",")
        else:
            rows.append([float(v) for v in line.split(",")])
    return Table(columns or [], np.array(rows, dtype=float), grids, meta)
