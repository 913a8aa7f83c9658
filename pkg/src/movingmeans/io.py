"""JSON and CSV formats for weights, matrices, grid functions and traces.

Floats are written with 17 significant digits so that every double
round-trips exactly; ``+inf`` grid values are written as the string
``"inf"``.
"""

import csv
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .convex.grid import GridFunction
from .errors import ConfigError, MovingMeansError
from .weights import SUM_TOL, Weights

RENORMALIZE_TOL = 1e-9


def _float(x):
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _encode(obj, out, indent, level):
    if isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating, Fraction)):
        out.append(_float(float(obj)))
    elif isinstance(obj, complex):
        _encode({"re": obj.real, "im": obj.imag}, out, indent, level)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (dict, list, tuple, np.ndarray)):
        is_dict = isinstance(obj, dict)
        items = list(obj.items()) if is_dict else list(obj)
        opener, closer = ("{", "}") if is_dict else ("[", "]")
        if not items:
            out.append(opener + closer)
            return
        # scalar lists stay on one line; nested containers get indented
        nested = is_dict or any(isinstance(v, (dict, list, tuple, np.ndarray)) for v in items)
        brk = indent is not None and nested
        pad = "\n" + " " * (indent * (level + 1)) if brk else ""
        out.append(opener)
        for n, item in enumerate(items):
            if n:
                out.append("," if brk or indent is None else ", ")
            out.append(pad)
            if is_dict:
                out.append(json.dumps(str(item[0])) + (": " if indent is not None else ":"))
                item = item[1]
            _encode(item, out, indent, level + 1)
        out.append(("\n" + " " * (indent * level) if brk else "") + closer)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=None):
    """Deterministic JSON text with 17-significant-digit floats."""
    out = []
    _encode(obj, out, indent, 0)
    return "".join(out)


def read_json(path):
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


def _is_rational_literal(token):
    return all(part.strip().lstrip("+-").isdigit() for part in token.split("/")) and token.count("/") <= 1


def parse_alphas(text):
    """Weights from ``"0.5,0.5"`` or ``"0,1/2,1/2"``.

    A list made only of integers and fractions gives exact weights.  A float
    list whose sum is off by less than ``1e-9`` is rescaled to sum to one; a
    larger deviation is rejected.
    """
    tokens = [t.strip() for t in text.split(",") if t.strip()]
    try:
        if tokens and all(_is_rational_literal(t) for t in tokens):
            vals = [Fraction(t) for t in tokens]
        else:
            vals = [float(Fraction(t)) if "/" in t else float(t) for t in tokens]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse weights {text!r}: {exc}") from exc
    return weights_from_values(vals)


def weights_from_values(vals):
    if all(isinstance(v, (int, Fraction)) for v in vals):
        return _validated(vals)
    vals = [float(v) for v in vals]
    total = math.fsum(vals)
    if SUM_TOL < abs(total - 1.0) < RENORMALIZE_TOL:
        vals = [v / total for v in vals]
    return _validated(vals)


def _validated(vals):
    try:
        return Weights(tuple(vals))
    except MovingMeansError as exc:
        raise ConfigError(f"invalid weights: {exc}") from exc


def weights_from_dict(data):
    if not isinstance(data, dict):
        raise ConfigError("weights JSON must be an object")
    if "alphas_rational" in data:
        try:
            vals = [Fraction(int(p), int(q)) for p, q in data["alphas_rational"]]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad alphas_rational entry: {exc}") from exc
        return _validated(vals)
    if "alphas" in data:
        try:
            vals = [float(v) for v in data["alphas"]]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad alphas entry: {exc}") from exc
        return weights_from_values(vals)
    raise ConfigError('weights JSON needs "alphas" or "alphas_rational"')


def weights_to_dict(w):
    if w.exact:
        return {"alphas_rational": [[a.numerator, a.denominator] for a in w.alphas]}
    return {"alphas": list(w.alphas)}


def matrix_to_dict(M):
    """``{"n": m, "rows": [...]}``; exact matrices also carry
    ``"rows_rational"`` as ``"p/q"`` strings."""
    M = np.asarray(M)
    out = {"n": int(M.shape[0]), "rows": [[float(x) for x in row] for row in M]}
    if M.dtype == object:
        out["rows_rational"] = [[str(Fraction(x)) for x in row] for row in M]
    return out


def matrix_from_dict(data):
    try:
        rows = np.array(data["rows"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"matrix JSON needs numeric \"rows\": {exc}") from exc
    if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
        raise ConfigError(f"matrix must be square, got shape {rows.shape}")
    if "n" in data and int(data["n"]) != rows.shape[0]:
        raise ConfigError(f"\"n\" = {data['n']} disagrees with {rows.shape[0]} rows")
    return rows


def write_matrix_csv(path, M):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.asarray(M):
            writer.writerow([format(float(x), ".17g") for x in row])


def write_rows_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return v


def grid_function_from_dict(data):
    try:
        return GridFunction.from_dict(data)
    except MovingMeansError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad grid function: {exc}") from exc
