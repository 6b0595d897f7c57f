"""Report emission: ``summary.json`` plus one CSV per table.

Floats are written with 12 significant digits in both files, so repeated
runs with the same configuration produce byte-identical output.
"""
import csv
import json
import math
import platform
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .errors import IoError


@dataclass
class ReportBundle:
    subcommand: str
    summary: dict
    tables: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    # run-time measurements; never written, they would break byte-identity
    timings: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(v["passed"] for v in self.verdicts)


def fmt(x):
    """Format a value for CSV/JSON: floats to 12 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "nan" if math.isnan(x) else f"{float(x):.12g}"
    return "" if x is None else str(x)


def round_floats(obj):
    """Recursively round floats to 12 significant digits (non-finite become strings)."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(f"{x:.12g}") if math.isfinite(x) else str(x)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [round_floats(v) for v in obj]
    return obj


def environment_stamp():
    return {"lpslab": __version__, "python": platform.python_version(),
            "numpy": np.__version__, "scipy": scipy.__version__,
            "platform": platform.system()}


def write_table(table, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([fmt(row.get(c)) for c in table.columns])


def emit_report(bundle, out_dir):
    """Write ``summary.json`` and ``<experiment>.csv`` files; return the written paths."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        merged = {}
        for table in bundle.tables:
            merged.setdefault(table.experiment, table)
            if merged[table.experiment] is not table:
                merged[table.experiment].rows.extend(table.rows)
        table_index = {}
        for name, table in merged.items():
            path = out / f"{name}.csv"
            write_table(table, path)
            paths.append(path)
            table_index[name] = {"file": path.name, "columns": list(table.columns),
                                 "rows": len(table.rows)}
        summary = dict(bundle.summary)
        summary["tables"] = table_index
        summary["verdicts"] = bundle.verdicts
        summary["environment"] = environment_stamp()
        path = out / "summary.json"
        path.write_text(json.dumps(round_floats(summary), indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")
        paths.append(path)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return paths
