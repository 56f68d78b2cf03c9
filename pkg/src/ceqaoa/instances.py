"""Instance file ingestion: JSON matrices and a TSPLIB subset.

Supported formats:
  * JSON: {"name": str, "n": int, "matrix": [[...], ...]} with an optional
    "known_optimum" number.
  * TSPLIB: EDGE_WEIGHT_TYPE EXPLICIT with EDGE_WEIGHT_FORMAT FULL_MATRIX,
    or EUC_2D with a NODE_COORD_SECTION.  EUC_2D distances follow the
    nearest-integer convention floor(d + 0.5) unless rounding is disabled.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .hamiltonian import TspInstance


class InstanceParseError(ValueError):
    """Malformed instance file; carries the offending path and line."""

    def __init__(self, message: str, path=None, line: int | None = None):
        loc = str(path) if path is not None else ""
        if line is not None:
            loc += f":{line}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = path
        self.line = line


def parse_instance(path, euclidean_rounding: bool = True) -> TspInstance:
    """Load a TSP instance from a JSON or TSPLIB file."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"instance file not found: {path}")
    if path.suffix.lower() == ".json":
        return _parse_json(path)
    return _parse_tsplib(path, euclidean_rounding)


def _as_instance(path, name: str, matrix, known_optimum, line: int | None = None) -> TspInstance:
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InstanceParseError(f"matrix is not square (shape {arr.shape})", path, line)
    try:
        return TspInstance(name, arr.shape[0], arr, known_optimum)
    except ValueError as exc:
        raise InstanceParseError(str(exc), path, line) from exc


def _parse_json(path: Path) -> TspInstance:
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"invalid JSON ({exc.msg})", path, exc.lineno) from exc
    if not isinstance(data, dict):
        raise InstanceParseError("top-level JSON value must be an object", path)
    try:
        matrix = data["matrix"]
    except KeyError:
        raise InstanceParseError('missing "matrix" key', path) from None
    name = str(data.get("name", path.stem))
    n = data.get("n")
    known = data.get("known_optimum")
    if known is not None:
        known = float(known)
    inst = _as_instance(path, name, matrix, known)
    if n is not None and int(n) != inst.n_cities:
        raise InstanceParseError(f'"n" is {n} but the matrix has {inst.n_cities} rows', path)
    return inst


def _parse_tsplib(path: Path, euclidean_rounding: bool) -> TspInstance:
    headers: dict[str, str] = {}
    coords: list[tuple[float, float]] = []
    weights: list[float] = []
    section = None
    section_line = None
    dimension = None

    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line == "EOF":
            section = None
            continue
        upper = line.upper()
        if upper.startswith("NODE_COORD_SECTION"):
            section, section_line = "coords", lineno
            continue
        if upper.startswith("EDGE_WEIGHT_SECTION"):
            section, section_line = "weights", lineno
            continue
        if section == "coords":
            parts = line.split()
            if len(parts) < 3:
                raise InstanceParseError(f"coordinate line needs 3 fields: {line!r}", path, lineno)
            try:
                coords.append((float(parts[1]), float(parts[2])))
            except ValueError as exc:
                raise InstanceParseError(f"bad coordinate: {line!r}", path, lineno) from exc
            continue
        if section == "weights":
            try:
                weights.extend(float(tok) for tok in line.split())
            except ValueError as exc:
                raise InstanceParseError(f"bad weight entry: {line!r}", path, lineno) from exc
            continue
        if ":" in line:
            key, _, value = line.partition(":")
            headers[key.strip().upper()] = value.strip()
            continue
        raise InstanceParseError(f"unrecognized line: {line!r}", path, lineno)

    name = headers.get("NAME", path.stem)
    known = None
    try:
        dimension = int(headers["DIMENSION"])
    except KeyError:
        raise InstanceParseError("missing DIMENSION header", path) from None
    except ValueError:
        raise InstanceParseError(f"bad DIMENSION value {headers['DIMENSION']!r}", path) from None

    weight_type = headers.get("EDGE_WEIGHT_TYPE", "").upper()
    if weight_type == "EXPLICIT":
        fmt = headers.get("EDGE_WEIGHT_FORMAT", "").upper()
        if fmt != "FULL_MATRIX":
            raise InstanceParseError(
                f"unsupported EDGE_WEIGHT_FORMAT {fmt!r} (only FULL_MATRIX)", path
            )
        if len(weights) != dimension * dimension:
            raise InstanceParseError(
                f"EDGE_WEIGHT_SECTION has {len(weights)} entries, expected {dimension ** 2}",
                path,
                section_line,
            )
        matrix = np.asarray(weights, dtype=np.float64).reshape(dimension, dimension)
        return _as_instance(path, name, matrix, known, section_line)
    if weight_type == "EUC_2D":
        if len(coords) != dimension:
            raise InstanceParseError(
                f"NODE_COORD_SECTION has {len(coords)} nodes, expected {dimension}",
                path,
                section_line,
            )
        pts = np.asarray(coords, dtype=np.float64)
        diff = pts[:, None, :] - pts[None, :, :]
        matrix = np.sqrt((diff**2).sum(axis=2))
        if euclidean_rounding:
            matrix = np.floor(matrix + 0.5)
        return _as_instance(path, name, matrix, known, section_line)
    raise InstanceParseError(
        f"unsupported EDGE_WEIGHT_TYPE {weight_type!r} (need EXPLICIT or EUC_2D)", path
    )
