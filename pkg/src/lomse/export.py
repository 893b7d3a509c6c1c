"""Deterministic CSV and JSON writers.

Floats are written with 17 significant digits so they round-trip, exact
rationals as ``"num/den"`` strings, and files carry a hash of the run
configuration instead of a timestamp.
"""
from __future__ import annotations

import csv
import enum
import hashlib
import io
import json
import math
from dataclasses import fields, is_dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .params import LomseParams, LomseTriple
from .surd import Surd

SCHEMA = 1


def fmt_float(x) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return format(x, ".17g")


def to_jsonable(obj):
    """Recursively convert package objects into JSON-ready values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, enum.Enum):
        return str(obj.value)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Surd):
        z = complex(obj)
        return {"exact": str(obj), "rational": str(obj.rational), "square": str(obj.square),
                "sign": obj.sign, "re": z.real, "im": z.imag}
    if isinstance(obj, LomseTriple):
        return [obj.n, obj.p, obj.k]
    if isinstance(obj, LomseParams):
        return params_record(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)
                if not f.name.startswith("_")}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def params_record(params: LomseParams) -> dict:
    return {
        "triple": [params.n, params.p, params.k],
        "lambda_sq": str(params.lambda_sq),
        "tan_theta_sq": str(params.tan_theta_sq),
        "a": str(params.a_coeff),
        "jacobi_disc": str(params.jacobi_disc),
        "dyn_disc": str(params.dyn_disc),
        "cone_type": str(params.cone_type),
    }


def config_hash(config: dict) -> str:
    blob = json.dumps(to_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def metadata(config: dict) -> dict:
    return {"schema": SCHEMA, "version": __version__, "config": to_jsonable(config),
            "config_hash": config_hash(config)}


def dumps_json(payload: dict, config: dict) -> str:
    doc = dict(metadata(config))
    doc.update(to_jsonable(payload))
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def dumps_csv(header: list[str], rows, config: dict) -> str:
    """CSV text with ``#`` metadata lines, a header row and LF endings."""
    buf = io.StringIO()
    meta = metadata(config)
    for key in ("schema", "version", "config_hash"):
        buf.write(f"# {key}: {meta[key]}\n")
    buf.write("# config: " + json.dumps(meta["config"], sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, enum.Enum):
        return str(v.value)
    return str(v)


def read_csv(text: str) -> tuple[list[str], list[list[str]], dict]:
    """Parse text written by :func:`dumps_csv` into (header, rows, metadata)."""
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        else:
            body.append(line)
    rows = list(csv.reader(body))
    return rows[0], rows[1:], meta
