"""CSV and JSON emission with embedded run metadata.

CSV files carry '#'-prefixed metadata comment lines, then a one-line header,
then rows. All numbers are formatted with repr-exact precision so re-runs are
byte-identical. Units: losses in dB, distances in km, variances and noises in
shot-noise units, rates in bits per pulse.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

UNITS_NOTE = (
    "units: loss dB, distance km, variance/noise shot-noise units, "
    "rate bits/pulse"
)


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def write_csv(path, columns, rows, metadata):
    """Write rows (iterable of tuples) with metadata comments and a header."""
    path = Path(path)
    lines = [f"# {UNITS_NOTE}"]
    for key in sorted(metadata):
        lines.append(f"# {key} = {_fmt(metadata[key])}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_json(path, payload, metadata):
    """Write a JSON document with the effective configuration embedded."""
    path = Path(path)
    doc = {"metadata": dict(metadata, units=UNITS_NOTE), "data": payload}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default))


def _json_default(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if hasattr(obj, "__dict__"):
        return obj.__dict__
    return str(obj)
