"""JSON encoding shared by every module and the command line.

Schemas::

    space     {"dim": n, "p": float, "weights": [floats]}
    vector    [floats]
    matrix    [[floats], ...]            row-major
    subspace  {"basis": n x k matrix, "n": n}
    set       {"type": "whole" | "box" | "ball" | "affine" | "simplex", ...}

Infinite box bounds are written as the strings ``"inf"`` / ``"-inf"``.
Output payloads are written with sorted keys so that identical inputs give
byte-identical files.
"""

import json

import numpy as np

__all__ = ["to_jsonable", "dumps", "dump", "load"]


def to_jsonable(obj):
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if np.isnan(v):
            return "nan"
        if np.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def dump(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def load(path):
    with open(path) as fh:
        return json.load(fh)
