"""CSV/JSON serialization helpers.

All floating-point values are written with 17 significant digits so
that round-tripping through text preserves the exact double, and two
runs with the same seed produce byte-identical files.
"""

import csv
import json


def fmt(x):
    """Format a float with 17 significant digits."""
    return format(float(x), ".17g")


def write_rows(path, header, rows):
    """Write a CSV file with ``header`` and an iterable of string rows."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(row)


def write_residual_history(path, history):
    """Write a scaling residual trace as ``iter,residual_inf`` rows."""
    rows = [(str(k + 1), fmt(r)) for k, r in enumerate(history)]
    write_rows(path, ("iter", "residual_inf"), rows)


def write_eigenpairs(path, values, vectors):
    """Write eigenpairs as ``mode,eigenvalue,v1..vn`` rows (one mode per row)."""
    n = vectors.shape[0]
    header = ("mode", "eigenvalue") + tuple(f"v{i + 1}" for i in range(n))
    rows = []
    for k in range(len(values)):
        rows.append((str(k), fmt(values[k])) + tuple(fmt(v) for v in vectors[:, k]))
    write_rows(path, header, rows)


def write_slopes_json(path, slopes):
    """Write slope fits as a JSON list of {branch, slope} objects."""
    payload = [{"branch": b, "slope": float(s)} for b, s in slopes]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
