"""Tensor file I/O and report helpers for tensor-extremal."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from pathvalidate import sanitize_filename as pathvalidate_sanitize

from tensor_extremal.core import BitTensor, Shape
from tensor_extremal.division import Division
from tensor_extremal.exceptions import InvalidArgumentError, TensorFormatError

log = logging.getLogger(__name__)

__all__ = [
    "tensor_to_json",
    "tensor_from_json",
    "load_tensor",
    "save_tensor",
    "dumps_tensor",
    "division_to_json",
    "division_from_json",
    "sanitize_filename",
    "write_counterexample",
]


def tensor_to_json(M: BitTensor) -> Dict[str, Any]:
    """Return the JSON object for *M*: ``t``, ``shape`` and sorted zero-based ``ones``."""
    return {"t": M.t, "shape": list(M.dims), "ones": [list(c) for c in M.ones]}


def _int_list(value: Any, field: str) -> List[int]:
    if not isinstance(value, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in value
    ):
        raise TensorFormatError(f"Field '{field}' must be an array of integers.", field=field)
    return value


def tensor_from_json(obj: Any) -> BitTensor:
    """Parse a JSON tensor object.

    ``ones`` must be sorted lexicographically without duplicates, exactly as
    :func:`tensor_to_json` writes it.

    Raises:
        TensorFormatError: Naming the offending field when the object is malformed.
    """
    if not isinstance(obj, dict):
        raise TensorFormatError("A tensor must be a JSON object.", field="<root>")
    for key in ("t", "shape", "ones"):
        if key not in obj:
            raise TensorFormatError(f"Missing field '{key}'.", field=key)
    t = obj["t"]
    if not isinstance(t, int) or isinstance(t, bool) or t < 1:
        raise TensorFormatError(f"Field 't' must be a positive integer, got {t!r}.", field="t")
    dims = _int_list(obj["shape"], "shape")
    if len(dims) != t:
        raise TensorFormatError(f"Field 'shape' has {len(dims)} entries, t is {t}.", field="shape")
    if any(d < 1 for d in dims):
        raise TensorFormatError(f"Every entry of 'shape' must be >= 1, got {dims}.", field="shape")
    if not isinstance(obj["ones"], list):
        raise TensorFormatError("Field 'ones' must be an array.", field="ones")
    ones = []
    for index, raw in enumerate(obj["ones"]):
        ones.append(tuple(_int_list(raw, f"ones[{index}]")))
    for index, (a, b) in enumerate(zip(ones, ones[1:]), start=1):
        if not a < b:
            problem = "duplicates" if a == b else "is out of lexicographic order after"
            raise TensorFormatError(
                f"Entry ones[{index}] = {list(b)} {problem} {list(a)}.", field=f"ones[{index}]"
            )
    return BitTensor(Shape(tuple(dims)), tuple(ones))


def dumps_tensor(M: BitTensor) -> str:
    return json.dumps(tensor_to_json(M))


def load_tensor(path: Union[str, Path]) -> BitTensor:
    """Read a tensor file.

    Raises:
        TensorFormatError: On unreadable files, JSON syntax errors (with the line)
            or malformed fields.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        log.exception(f"Could not read tensor file {path}")
        raise TensorFormatError(f"Cannot read {path}.", original_exception=e) from e
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise TensorFormatError(
            f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}.",
            line=e.lineno,
            original_exception=e,
        ) from e
    try:
        return tensor_from_json(obj)
    except TensorFormatError as e:
        raise TensorFormatError(f"{path}: {e}", field=e.field, line=e.line) from e


def save_tensor(M: BitTensor, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(tensor_to_json(M), indent=2) + "\n", encoding="utf-8")
    log.debug(f"Wrote tensor {M.dims} with {M.ones_count} ones to {path}")
    return path


def division_to_json(D: Division) -> List[List[int]]:
    """Per-axis arrays of cut positions."""
    return D.as_lists()


def division_from_json(obj: Any) -> Division:
    if not isinstance(obj, list):
        raise TensorFormatError("A division must be an array of cut arrays.", field="division")
    return Division(tuple(tuple(_int_list(axis, f"division[{r}]")) for r, axis in enumerate(obj)))


def sanitize_filename(filename: str) -> str:
    """Sanitise *filename* for the current platform with *pathvalidate*."""
    return str(pathvalidate_sanitize(filename, platform="auto", replacement_text="_"))


def write_counterexample(
    directory: Union[str, Path],
    property_name: str,
    index: int,
    tensors: Sequence[BitTensor],
    context: Optional[Dict[str, Any]] = None,
) -> Path:
    """Store a failing instance as ``<property>__<index>.json`` inside *directory*.

    A single tensor is written in the plain tensor format so it can be passed
    straight back to the CLI; several tensors are written as
    ``{"tensors": [...], "context": {...}}``.
    """
    if not tensors:
        raise InvalidArgumentError("A counterexample needs at least one tensor.")
    name = sanitize_filename(f"{property_name}__{index}.json")
    path = Path(directory) / name
    if len(tensors) == 1 and not context:
        return save_tensor(tensors[0], path)
    payload = {"tensors": [tensor_to_json(M) for M in tensors], "context": context or {}}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, default=str) + "\n", encoding="utf-8")
    log.info(f"Counterexample for {property_name} written to {path}")
    return path
