"""Writers for result tables: CSV, JSON lines, metadata and optional figures."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from datetime import datetime, timezone

from . import __version__
from .sweep import COLUMNS


def format_value(value):
    """CSV cell text: shortest round-trip floats, ``true``/``false``, empty for null."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def write_csv(table, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        writer.writerow(COLUMNS)
        for row in table.rows:
            writer.writerow([format_value(row[c]) for c in COLUMNS])
    return path


def write_jsonl(table, path):
    with open(path, "w", encoding="utf-8") as fh:
        for row in table.rows:
            fh.write(json.dumps({c: row[c] for c in COLUMNS}, allow_nan=True) + "\n")
    return path


def read_csv(path):
    """Parse a table written by :func:`write_csv` back into typed rows."""
    ints = {"point", "state", "n_max", "parity"}
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for raw in csv.DictReader(fh):
            row = {}
            for k, v in raw.items():
                if v == "":
                    row[k] = None
                elif k == "converged":
                    row[k] = v == "true"
                elif k in ints:
                    row[k] = int(v)
                else:
                    row[k] = float(v)
            rows.append(row)
    return rows


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def emit_outputs(table, config, out_dir=None, fmt=None, plots=None, extra_meta=None):
    """Write the table and metadata; returns the list of written paths.

    ``out_dir``, ``fmt`` and ``plots`` override the config's output block.
    """
    out = config.output
    out_dir = out_dir or out.dir
    fmt = fmt or out.format
    plots = out.plots if plots is None else plots
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, out.prefix)
    written = []
    if fmt in ("csv", "both"):
        written.append(write_csv(table, stem + ".csv"))
    if fmt in ("json", "both"):
        written.append(write_jsonl(table, stem + ".jsonl"))
    if plots:
        from .plotting import render_figures

        written.extend(render_figures(table, config, stem))
    if table.failures:
        log_path = stem + "_run.log"
        with open(log_path, "w", encoding="utf-8") as fh:
            for f in table.failures:
                fh.write(f"point {f['point']} {json.dumps(f['values'])}: {f['error']}\n")
        written.append(log_path)
    meta = {
        "tool": "aqrm-magic",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config": config.to_dict(),
        "rows": len(table.rows),
        "failures": table.failures,
        "checksums": {os.path.basename(p): sha256(p) for p in written},
    }
    if extra_meta:
        meta.update(extra_meta)
    meta_path = stem + "_meta.json"
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
    written.append(meta_path)
    return written
