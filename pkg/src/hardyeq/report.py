"""JSON, CSV and two-column plot output for reports, sweeps and diagnostics.

Floats are written with ``repr``, Python's shortest round-trip form, and
field order is fixed, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .identities import REPORT_FIELDS, IdentityReport

FORMATS = ("json", "csv", "plot")


@dataclass(frozen=True)
class Curve:
    """A named list of ``(x, y)`` rows destined for a plot-data file."""

    name: str
    rows: list[tuple[float, float]]

    def plot_rows(self) -> list[tuple[float, float]]:
        return self.rows

    def to_dict(self) -> dict:
        return {"name": self.name, "rows": [list(r) for r in self.rows]}


def _clean(obj):
    # JSON has no NaN/inf
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def to_json(items: Sequence) -> str:
    return json.dumps([_clean(it.to_dict()) for it in items], indent=2, allow_nan=False) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ""
    if isinstance(v, (dict, list)):
        return json.dumps(_clean(v), sort_keys=True, separators=(",", ":"))
    return str(v)


def to_csv(items: Sequence) -> str:
    rows = [it.to_dict() for it in items]
    fields = list(REPORT_FIELDS) if all(isinstance(it, IdentityReport) for it in items) \
        else list(rows[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_cell(r.get(k)) for k in fields])
    return buf.getvalue()


def plot_text(rows: Sequence[tuple[float, float]]) -> str:
    return "".join(f"{x!r} {y!r}\n" for x, y in rows)


def _curves(items: Sequence) -> list[tuple[str, list]]:
    out = []
    for it in items:
        if not hasattr(it, "plot_rows"):
            raise TypeError(f"{type(it).__name__} has no plot representation")
        out.append((getattr(it, "identity_id", None) or getattr(it, "name", "curve"),
                    it.plot_rows()))
    return out


def emit_report(items: Sequence, fmt: str, path: str | Path | None = None) -> list[Path] | str:
    """Write ``items`` as ``fmt``; returns the written paths, or the text when ``path`` is None.

    ``plot`` writes one two-column file per curve: ``path`` itself for a
    single curve, otherwise ``<stem>.<index>.<name><suffix>`` next to it.
    """
    items = list(items)
    if not items:
        raise ValueError("nothing to emit: the report list is empty")
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    if fmt == "json":
        text = to_json(items)
    elif fmt == "csv":
        text = to_csv(items)
    else:
        curves = _curves(items)
        if path is None:
            return "".join(f"# {name}\n{plot_text(rows)}" for name, rows in curves)
        path = Path(path)
        if len(curves) == 1:
            targets = [path]
        else:
            targets = [path.with_name(f"{path.stem}.{i:02d}.{name}{path.suffix or '.dat'}")
                       for i, (name, _) in enumerate(curves)]
        for target, (_, rows) in zip(targets, curves):
            target.write_text(plot_text(rows))
        return targets
    if path is None:
        return text
    path = Path(path)
    path.write_text(text)
    return [path]
