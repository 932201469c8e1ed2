"""File formats: node/edge tables, degree files, and run manifests.

Node table TSV: id, weight, then the direction coordinates, all floats at 17
significant digits so a round trip is bit-exact for 64-bit values.  Edge
list TSV: two node ids per line; undirected pairs are written once with the
smaller id first, directed arcs as (source, target).
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import SeriesFormatError

_FLOAT_FMT = ".17g"


def write_nodes_tsv(path, weights: np.ndarray, directions: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for i in range(len(weights)):
            coords = "\t".join(format(c, _FLOAT_FMT) for c in directions[i])
            fh.write(f"{i}\t{format(weights[i], _FLOAT_FMT)}\t{coords}\n")


def read_nodes_tsv(path) -> tuple[np.ndarray, np.ndarray]:
    weights = []
    dirs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 3:
                raise SeriesFormatError(f"{path}:{lineno}: expected id, weight, coordinates")
            try:
                idx = int(parts[0])
                weights.append(float(parts[1]))
                dirs.append([float(c) for c in parts[2:]])
            except ValueError as exc:
                raise SeriesFormatError(f"{path}:{lineno}: {exc}") from None
            if idx != lineno - 1:
                raise SeriesFormatError(f"{path}:{lineno}: ids must be consecutive from 0")
    if not weights:
        raise SeriesFormatError(f"{path}: empty node table")
    return np.array(weights), np.array(dirs)


def write_edges_tsv(path, edges: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for i, j in edges:
            fh.write(f"{i}\t{j}\n")


def read_edges_tsv(path) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise SeriesFormatError(f"{path}:{lineno}: expected two node ids")
            try:
                rows.append((int(parts[0]), int(parts[1])))
            except ValueError as exc:
                raise SeriesFormatError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise SeriesFormatError(f"{path}: empty edge list")
    return np.array(rows, dtype=np.int64)


def read_degree_file(path) -> np.ndarray:
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(int(line))
            except ValueError as exc:
                raise SeriesFormatError(f"{path}:{lineno}: {exc}") from None
    if not values:
        raise SeriesFormatError(f"{path}: empty degree file")
    return np.array(values, dtype=np.int64)


def write_ccdf_csv(path, values: np.ndarray, fractions: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("k,ccdf\n")
        for k, frac in zip(values, fractions):
            fh.write(f"{int(k)},{format(frac, _FLOAT_FMT)}\n")


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_json(path, payload: dict) -> None:
    """UTF-8 JSON with stable key order."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
