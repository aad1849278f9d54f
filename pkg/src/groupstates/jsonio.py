"""JSON interchange formats.

Groups: {"order": n, "cayley": [[...]], "labels": [...]}, row-major and
0-based.  Functions and algebra elements: {"group": <inline or path>,
"re": [...], "im": [...]}.  Matrices: {"rows", "cols", "re", "im"} with
flat row-major value lists.  Descriptors: {"sigma", "unitaries",
"transpose"}.  A "group" given as a string is a path resolved relative to
the referencing file.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InputFormatError
from .groups import FiniteGroup, validate_group
from .posdef import GroupFunction
from .vn import AffineHomeoDescriptor


def load_json(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputFormatError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON in {path}: {exc}") from exc


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise InputFormatError(f"{where}: missing key {key!r}")
    return obj[key]


def group_to_json(group: FiniteGroup) -> dict:
    out = {"order": group.order, "cayley": group.cayley.tolist()}
    if group.labels is not None:
        out["labels"] = list(group.labels)
    return out


def group_from_json(obj: dict, name: str = "group") -> FiniteGroup:
    if not isinstance(obj, dict):
        raise InputFormatError("group JSON must be an object")
    cayley = _need(obj, "cayley", "group")
    labels = obj.get("labels")
    try:
        return validate_group(cayley, labels=labels, name=obj.get("name", name))
    except (ValueError, TypeError) as exc:
        raise InputFormatError(f"bad group data: {exc}") from exc


def load_group(path: str | Path) -> FiniteGroup:
    return group_from_json(load_json(path), name=Path(path).stem)


def _resolve_group(obj, base: Path | None) -> FiniteGroup:
    if isinstance(obj, str):
        ref = Path(obj)
        if base is not None and not ref.is_absolute():
            ref = base / ref
        return load_group(ref)
    return group_from_json(obj)


def function_to_json(fn: GroupFunction, inline_group: bool = True) -> dict:
    out = {
        "re": fn.values.real.tolist(),
        "im": fn.values.imag.tolist(),
    }
    if inline_group:
        out["group"] = group_to_json(fn.group)
    return out


def function_from_json(
    obj: dict,
    group: FiniteGroup | None = None,
    base: Path | None = None,
) -> GroupFunction:
    if not isinstance(obj, dict):
        raise InputFormatError("function JSON must be an object")
    if group is None:
        group = _resolve_group(_need(obj, "group", "function"), base)
    re = np.asarray(_need(obj, "re", "function"), dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != (group.order,) or im.shape != (group.order,):
        raise InputFormatError(
            f"function length {re.shape} does not match group order {group.order}"
        )
    return GroupFunction(group, re + 1j * im)


def load_function(path: str | Path, group: FiniteGroup | None = None) -> GroupFunction:
    return function_from_json(load_json(path), group=group, base=Path(path).parent)


def matrix_to_json(mat: np.ndarray) -> dict:
    m = np.asarray(mat, dtype=complex)
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "re": m.real.reshape(-1).tolist(),
        "im": m.imag.reshape(-1).tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows = int(_need(obj, "rows", "matrix"))
    cols = int(_need(obj, "cols", "matrix"))
    re = np.asarray(_need(obj, "re", "matrix"), dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise InputFormatError("matrix value length does not match rows*cols")
    return (re + 1j * im).reshape(rows, cols)


def table_to_json(table) -> dict:
    return {
        "dims": list(table.dims),
        "class_sizes": list(table.class_sizes),
        "class_reps": list(table.class_reps),
        "chars_re": table.chars.real.tolist(),
        "chars_im": table.chars.imag.tolist(),
    }


def descriptor_to_json(desc: AffineHomeoDescriptor) -> dict:
    return {
        "sigma": list(desc.sigma),
        "unitaries": [matrix_to_json(u) for u in desc.unitaries],
        "transpose": [bool(b) for b in desc.transpose],
    }


def descriptor_from_json(obj: dict) -> AffineHomeoDescriptor:
    sigma = tuple(int(x) for x in _need(obj, "sigma", "descriptor"))
    unitaries = tuple(
        matrix_from_json(u) for u in _need(obj, "unitaries", "descriptor")
    )
    transpose = tuple(bool(b) for b in _need(obj, "transpose", "descriptor"))
    return AffineHomeoDescriptor(sigma, unitaries, transpose)


def pairs_from_json(obj: dict, group: FiniteGroup, base: Path | None = None):
    """Sampled map: {"pairs": [{"in": <function>, "out": <function>}, ...]}."""
    pairs = []
    for i, entry in enumerate(_need(obj, "pairs", "samples")):
        fin = function_from_json(_need(entry, "in", f"pair {i}"), group=group, base=base)
        fout = function_from_json(_need(entry, "out", f"pair {i}"), group=group, base=base)
        pairs.append((fin, fout))
    return pairs
