"""Readers for the instance file formats.

Matrix (text)::

    n
    a11 a12 ... a1n
    ...

PSD tuple (JSON): ``{"n": n, "matrices": [[[...row...], ...], ...]}``.

Colored graph (text): first line ``n m``, then m lines ``tail head color``
with 1-based vertices and arbitrary color strings.

Vector family (JSON): ``{"dimension": n, "vectors": [[...], ...], "colors": [...]}``
with one length-n vector per entry of ``vectors``.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .applications import ColoredGraph, ColoredVectorFamily
from .errors import InvalidMatrix, NegativeEntry, ParseError, WrongColorCount
from .linalg import PsdTuple, as_square_matrix


def _tokens(line):
    """``(column, token)`` pairs with 1-based character columns."""
    out = []
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        out.append((col + 1, tok))
        col += len(tok)
    return out


def _content_lines(text):
    """Non-blank lines with their 1-based line numbers; ``#`` starts a comment."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, line


def _number(tok, lineno, col, path):
    try:
        value = float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}", lineno, col, path) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite entry {tok!r}", lineno, col, path)
    return value


def _int(tok, lineno, col, path, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", lineno, col, path) from None


def parse_matrix_text(text: str, *, nonnegative: bool = False, path=None) -> np.ndarray:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty matrix file", path=path)
    lineno, header = lines[0]
    head = _tokens(header)
    if len(head) != 1:
        raise ParseError("first line must hold only the dimension n", lineno, 1, path)
    n = _int(head[0][1], lineno, head[0][0], path, "dimension")
    if n < 1:
        raise ParseError(f"dimension must be positive, got {n}", lineno, head[0][0], path)
    rows = lines[1:]
    if len(rows) != n:
        where = rows[n][0] if len(rows) > n else (rows[-1][0] + 1 if rows else lineno + 1)
        raise ParseError(f"expected {n} matrix rows, found {len(rows)}", where, 1, path)
    out = np.empty((n, n))
    for i, (lineno, line) in enumerate(rows):
        toks = _tokens(line)
        if len(toks) != n:
            col = toks[n][0] if len(toks) > n else len(line.rstrip()) + 1
            raise ParseError(f"row {i + 1} has {len(toks)} entries, expected {n}", lineno, col, path)
        for j, (col, tok) in enumerate(toks):
            value = _number(tok, lineno, col, path)
            if nonnegative and value < 0:
                raise NegativeEntry(
                    f"{path or 'matrix'}: line {lineno}, column {col}: negative entry {tok}"
                )
            out[i, j] = value
    return as_square_matrix(out)


def parse_matrix_file(path, *, nonnegative: bool = False) -> np.ndarray:
    """Read a square matrix; ``nonnegative=True`` rejects negative entries (permanent mode)."""
    path = Path(path)
    return parse_matrix_text(path.read_text(encoding="utf-8"), nonnegative=nonnegative, path=path)


def _load_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, path) from None


def parse_psd_tuple_data(data, *, perturb_eps: float = 0.0, path=None) -> PsdTuple:
    if not isinstance(data, dict) or "matrices" not in data:
        raise ParseError('expected an object with "n" and "matrices"', path=path)
    mats = data["matrices"]
    n = data.get("n", len(mats) if isinstance(mats, list) else None)
    if not isinstance(n, int) or n < 1:
        raise ParseError(f'"n" must be a positive integer, got {n!r}', path=path)
    if not isinstance(mats, list) or len(mats) != n:
        raise ParseError(f'"matrices" must list exactly {n} matrices', path=path)
    arrays = []
    for i, m in enumerate(mats):
        try:
            arr = as_square_matrix(m, name=f"matrix {i}")
        except InvalidMatrix as exc:
            raise ParseError(str(exc), path=path) from None
        if arr.shape != (n, n):
            raise ParseError(f"matrix {i} has shape {arr.shape}, expected {(n, n)}", path=path)
        arrays.append(arr)
    return PsdTuple.from_matrices(arrays, perturb_eps=perturb_eps)


def parse_psd_tuple_file(path, *, perturb_eps: float = 0.0) -> PsdTuple:
    """Read and validate a JSON PSD tuple (symmetry and PSD checks applied).

    ``perturb_eps`` is the shift the estimator will apply; validation checks
    ``Q_i + perturb_eps * I``.
    """
    return parse_psd_tuple_data(_load_json(path), perturb_eps=perturb_eps, path=Path(path))


def parse_graph_text(text: str, *, path=None) -> ColoredGraph:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty graph file", path=path)
    lineno, header = lines[0]
    head = _tokens(header)
    if len(head) != 2:
        raise ParseError('first line must be "n m"', lineno, 1, path)
    n = _int(head[0][1], lineno, head[0][0], path, "vertex count")
    m = _int(head[1][1], lineno, head[1][0], path, "edge count")
    if n < 1 or m < 0:
        raise ParseError("vertex count must be positive and edge count non-negative", lineno, 1, path)
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"expected {m} edge lines, found {len(body)}", lineno, 1, path)
    edges = []
    colors = []
    for lineno, line in body:
        toks = _tokens(line)
        if len(toks) != 3:
            raise ParseError('edge line must be "tail head color"', lineno, 1, path)
        ends = []
        for col, tok in toks[:2]:
            v = _int(tok, lineno, col, path, "vertex")
            if not 1 <= v <= n:
                raise ParseError(f"vertex {v} out of range 1..{n}", lineno, col, path)
            ends.append(v - 1)
        if ends[0] == ends[1]:
            raise ParseError("self-loops are not allowed", lineno, toks[1][0], path)
        edges.append(tuple(ends))
        colors.append(toks[2][1])
    return ColoredGraph(n, tuple(edges), tuple(colors))


def read_graph_file(path) -> ColoredGraph:
    path = Path(path)
    return parse_graph_text(path.read_text(encoding="utf-8"), path=path)


def read_vector_family_file(path) -> ColoredVectorFamily:
    data = _load_json(path)
    if not isinstance(data, dict) or not {"vectors", "colors"} <= data.keys():
        raise ParseError('expected an object with "dimension", "vectors" and "colors"', path=path)
    try:
        vecs = np.array(data["vectors"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad vectors: {exc}", path=path) from None
    dim = data.get("dimension", vecs.shape[1] if vecs.ndim == 2 else None)
    if vecs.ndim != 2 or vecs.shape[1] != dim:
        raise ParseError(f"every vector must have length {dim}", path=path)
    colors = [str(c) for c in data["colors"]]
    try:
        return ColoredVectorFamily(vecs.T, tuple(colors))
    except WrongColorCount:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), path=path) from None
