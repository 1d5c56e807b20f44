"""Output formats: RFC 4180 CSV, Wavefront OBJ and deterministic JSON."""
from __future__ import annotations

import csv
import enum
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

PROFILE_COLUMNS = ("s", "x", "y", "Tx", "Ty", "kappa")


def _fmt(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def dumps(obj, indent: int = 2) -> str:
    """JSON with sorted keys, 17 significant digits, NaN and infinities as null."""
    return _dump(obj, indent, 0) + "\n"


def _dump(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, enum.Enum):
        return _dump(obj.value, indent, level)
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        return _dump(obj.tolist(), indent, level)
    if hasattr(obj, "as_dict"):
        return _dump(obj.as_dict(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_dump(obj[k], indent, level + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + _dump(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def profile_csv(curve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(PROFILE_COLUMNS)
    for row in curve.rows():
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def read_profile_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if tuple(rows[0]) != PROFILE_COLUMNS:
        raise ValueError(f"unexpected header {rows[0]!r}")
    return np.array([[float(v) for v in r] for r in rows[1:]])


def surface_obj(groups: dict) -> str:
    """OBJ text with one group per grid; each grid is an (ns, nt, 3) array of vertices.

    Cells touching a non-finite vertex are dropped.
    """
    lines = ["# rotational surface mesh"]
    offset = 1
    for name, X in groups.items():
        X = np.asarray(X, dtype=float)
        ns, nt = X.shape[:2]
        lines.append(f"g {name}")
        for v in X.reshape(-1, 3):
            lines.append("v " + " ".join(_fmt(c) for c in v))
        ok = np.all(np.isfinite(X), axis=-1)
        for i in range(ns - 1):
            for j in range(nt - 1):
                if ok[i, j] and ok[i + 1, j] and ok[i + 1, j + 1] and ok[i, j + 1]:
                    a = offset + i * nt + j
                    lines.append(f"f {a} {a + nt} {a + nt + 1} {a + 1}")
        offset += ns * nt
    return "\n".join(lines) + "\n"
