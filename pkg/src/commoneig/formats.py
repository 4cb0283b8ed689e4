"""JSON matrix, vector and report files.

Floats are written with Python's shortest round-trip repr, so a matrix read
back from its own serialization is bit-identical.  Complex entries are
``[re, im]`` pairs.
"""

from __future__ import annotations

import json
import math
from numbers import Real
from pathlib import Path

import numpy as np

from .domains import Domain
from .errors import DimensionError, DomainError, InputError


class FormatError(InputError):
    pass


def _entry(x, domain: Domain, where: str):
    if domain is Domain.COMPLEX:
        if isinstance(x, list):
            if len(x) != 2:
                raise FormatError(f"{where}: complex entries are [re, im] pairs")
            re, im = (_real(t, where) for t in x)
            return complex(re, im)
        return complex(_real(x, where), 0.0)
    v = _real(x, where)
    if v < 0:
        raise DomainError(f"{where}: negative entry {v!r} not allowed in domain {domain.value}")
    return v


def _real(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, Real):
        raise FormatError(f"{where}: expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise FormatError(f"{where}: non-finite entry")
    return x


def _encode(x, domain: Domain):
    if domain is Domain.COMPLEX:
        z = complex(x)
        return [z.real, z.imag]
    return float(np.real(x))


def _load(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise FormatError(f"{path}: not UTF-8") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return data


def matrix_from_dict(data: dict) -> tuple[np.ndarray, Domain]:
    if "domain" not in data or "matrix" not in data:
        raise FormatError("matrix file needs 'domain' and 'matrix'")
    domain = Domain.parse(data["domain"])
    rows = data["matrix"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise FormatError("'matrix' must be a non-empty list of rows")
    width = len(rows[0])
    if width == 0:
        raise DimensionError("matrix rows must be non-empty")
    for i, r in enumerate(rows):
        if len(r) != width:
            raise DimensionError(f"row {i} has {len(r)} entries, expected {width}")
    out = np.array(
        [[_entry(x, domain, f"entry ({i}, {j})") for j, x in enumerate(r)] for i, r in enumerate(rows)],
        dtype=domain.dtype,
    )
    return out, domain


def parse_matrix_file(path) -> np.ndarray:
    """Validated matrix from a ``{"domain", "matrix"}`` JSON file."""
    return read_matrix(path)[0]


def read_matrix(path) -> tuple[np.ndarray, Domain]:
    try:
        return matrix_from_dict(_load(path))
    except InputError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def read_vector(path) -> tuple[np.ndarray, Domain]:
    data = _load(path)
    try:
        domain = Domain.parse(data.get("domain", "max-times"))
        vec = data.get("vector")
        if not isinstance(vec, list) or not vec:
            raise FormatError("vector file needs a non-empty 'vector' list")
        v = np.array([_entry(x, domain, f"entry {i}") for i, x in enumerate(vec)], dtype=domain.dtype)
    except InputError as exc:
        raise type(exc)(f"{path}: {exc}") from None
    return v, domain


def serialize_matrix(M, domain: Domain | str, name: str | None = None) -> dict:
    domain = Domain.parse(domain)
    out = {"domain": domain.value, "matrix": [[_encode(x, domain) for x in row] for row in np.asarray(M)]}
    if name is not None:
        out["name"] = name
    return out


def serialize_vector(v, domain: Domain | str) -> list:
    domain = Domain.parse(domain)
    return [_encode(x, domain) for x in np.asarray(v)]


def serialize_scalar(x, domain: Domain | str):
    return _encode(x, Domain.parse(domain))


def decode_vector(items, domain: Domain | str) -> np.ndarray:
    domain = Domain.parse(domain)
    return np.array([_entry(x, domain, f"entry {i}") for i, x in enumerate(items)], dtype=domain.dtype)


def decode_scalar(x, domain: Domain | str):
    return _entry(x, Domain.parse(domain), "scalar")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")
