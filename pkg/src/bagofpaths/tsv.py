"""Plain-text matrix serialization.

One row per line, tab separated, ``inf`` for +inf, 17 significant digits so
a write/read round trip is lossless. Header lines start with ``#`` and carry
``key=value`` metadata.
"""

import numpy as np


def format_value(x):
    x = float(x)
    if np.isposinf(x):
        return "inf"
    if np.isneginf(x):
        return "-inf"
    return f"{x:.17g}"


def format_header(**meta):
    return "# " + " ".join(f"{k}={v}" for k, v in meta.items())


def write_matrix(fh, matrix, **meta):
    """Write a 2-D array to an open text stream, with an optional header line."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if meta:
        fh.write(format_header(**meta) + "\n")
    for row in matrix:
        fh.write("\t".join(format_value(x) for x in row) + "\n")


def read_matrix(fh):
    """Read a matrix written by :func:`write_matrix`.

    Returns ``(matrix, meta)`` where ``meta`` holds the parsed ``key=value``
    pairs of every header line (as strings).
    """
    meta = {}
    rows = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    meta[k] = v
            continue
        rows.append([float(tok) for tok in line.split("\t")])
    return np.array(rows, dtype=float), meta
