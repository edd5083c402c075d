"""JSON / CSV serialization for reports."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np


def jsonable(obj):
    """Convert numpy scalars/arrays and complex numbers to plain JSON types.

    Complex values become ``[re, im]`` pairs; floats keep their shortest
    round-trip repr.
    """
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_float(obj.real), _float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    return obj


def _float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return None
    return x


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), allow_nan=False)


def fmt(x) -> str:
    """17 significant digits for CSV cells; complex as ``re+imj``."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (complex, np.complexfloating)):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return ";".join(fmt(v) for v in x)
    return str(x)


def to_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def witness(z) -> list[list[float]]:
    """Activity vector as full-precision ``[re, im]`` pairs."""
    return [[float(c.real), float(c.imag)] for c in np.asarray(z, dtype=complex)]
