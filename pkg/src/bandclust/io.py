"""Read and write matrices as CSV or Matrix Market files.

CSV files may carry a header row of column labels and a first column of row
labels; both are detected automatically (a non-numeric cell marks a label).
Matrix Market files use the ``array`` or ``coordinate`` layout with a
``real``/``integer``/``pattern`` field and ``general`` or ``symmetric`` symmetry.
"""
from __future__ import annotations

import csv
import io
import os
from pathlib import Path

import numpy as np

from .errors import FormatError, ParseError
from .matrix import DataMatrix, as_data_matrix

FORMATS = ("csv", "matrix-market")


def guess_format(path) -> str:
    suffix = Path(path).suffix.lower()
    return "matrix-market" if suffix in (".mtx", ".mm") else "csv"


def _normalize_format(fmt, path) -> str:
    if fmt is None:
        return guess_format(path)
    fmt = fmt.lower().replace("_", "-")
    if fmt in ("mm", "mtx", "matrixmarket"):
        fmt = "matrix-market"
    if fmt not in FORMATS:
        raise ValueError(f"unknown matrix format {fmt!r}; expected one of {FORMATS}")
    return fmt


def _format_number(x: float) -> str:
    if float(x).is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(float(x))


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_matrix(path, format=None) -> DataMatrix:
    """Load a matrix; ``format`` is "csv" or "matrix-market" (guessed from the suffix)."""
    fmt = _normalize_format(format, path)
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    if fmt == "csv":
        return parse_csv(text)
    return parse_matrix_market(text)


def save_matrix(A, path, format=None) -> None:
    A = as_data_matrix(A)
    fmt = _normalize_format(format, path)
    text = format_csv(A) if fmt == "csv" else format_matrix_market(A)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def parse_csv(text: str) -> DataMatrix:
    rows = [(lineno, [c.strip() for c in row])
            for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1)
            if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ParseError("empty CSV file", line=1)
    first_line, first = rows[0]
    # a blank corner cell or any text past the first cell marks a header row
    has_header = first[0] == "" or any(not _is_number(c) for c in first[1:])
    body = rows[1:] if has_header else rows
    if not body:
        raise ParseError("CSV has a header but no data rows", line=first_line)
    if has_header:
        has_row_labels = first[0] == "" or len(body[0][1]) == len(first) + 1
    else:
        has_row_labels = any(not _is_number(row[0]) for _, row in body)

    values, row_labels = [], []
    width = None
    for lineno, cells in body:
        if has_row_labels:
            row_labels.append(cells[0])
            cells = cells[1:]
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(f"expected {width} values, found {len(cells)}", line=lineno)
        for c in cells:
            if not _is_number(c):
                raise ParseError(f"non-numeric value {c!r}", line=lineno)
        row = [float(c) for c in cells]
        if not all(np.isfinite(row)):
            raise ParseError("NaN or infinite value", line=lineno)
        values.append(row)

    col_labels = None
    if has_header:
        col_labels = first[1:] if first[0] == "" else first
        if len(col_labels) != width:
            raise FormatError(f"header has {len(col_labels)} labels but rows have {width} values")
    return DataMatrix(np.array(values, dtype=np.float64),
                      _drop_default(row_labels if has_row_labels else None),
                      _drop_default(col_labels))


def _drop_default(labels):
    if labels is None or list(labels) == [str(i) for i in range(len(labels))]:
        return None
    return labels


def format_csv(A) -> str:
    A = as_data_matrix(A)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if A.has_labels:
        writer.writerow([""] + list(A.labels("cols")))
    row_labels = A.labels("rows")
    for i in range(A.rows):
        cells = [_format_number(x) for x in A.values[i]]
        if A.has_labels:
            cells.insert(0, row_labels[i])
        writer.writerow(cells)
    return buf.getvalue()


def parse_matrix_market(text: str) -> DataMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise ParseError("missing %%MatrixMarket banner", line=1)
    banner = lines[0].split()
    if len(banner) != 5:
        raise ParseError("banner must read '%%MatrixMarket matrix <layout> <field> <symmetry>'", line=1)
    _, obj, layout, field, symmetry = (b.lower() for b in banner)
    if obj != "matrix" or layout not in ("array", "coordinate"):
        raise ParseError(f"unsupported object/layout {obj} {layout}", line=1)
    if field not in ("real", "integer", "double", "pattern"):
        raise ParseError(f"unsupported field {field!r}", line=1)
    if symmetry not in ("general", "symmetric"):
        raise ParseError(f"unsupported symmetry {symmetry!r}", line=1)

    data = [(no, line.split()) for no, line in enumerate(lines[1:], start=2)
            if line.strip() and not line.lstrip().startswith("%")]
    if not data:
        raise ParseError("missing size line", line=len(lines))
    size_no, size = data[0]
    try:
        dims = [int(tok) for tok in size]
    except ValueError:
        raise ParseError(f"bad size line {' '.join(size)!r}", line=size_no) from None
    entries = data[1:]

    if layout == "array":
        if len(dims) != 2:
            raise ParseError("array size line needs 'rows cols'", line=size_no)
        m, n = dims
        if len(entries) != m * n:
            raise FormatError(f"array declares {m}x{n} = {m * n} values, found {len(entries)}")
        flat = []
        for no, toks in entries:
            if len(toks) != 1:
                raise ParseError("array entries hold one value per line", line=no)
            flat.append(_parse_float(toks[0], no))
        values = np.array(flat, dtype=np.float64).reshape(n, m).T
    else:
        if len(dims) != 3:
            raise ParseError("coordinate size line needs 'rows cols nnz'", line=size_no)
        m, n, nnz = dims
        if len(entries) != nnz:
            raise FormatError(f"coordinate header declares {nnz} entries, found {len(entries)}")
        values = np.zeros((m, n), dtype=np.float64)
        want = 2 if field == "pattern" else 3
        for no, toks in entries:
            if len(toks) != want:
                raise ParseError(f"expected {want} fields, found {len(toks)}", line=no)
            try:
                i, j = int(toks[0]) - 1, int(toks[1]) - 1
            except ValueError:
                raise ParseError("non-integer coordinate", line=no) from None
            if not (0 <= i < m and 0 <= j < n):
                raise FormatError(f"line {no}: entry ({i + 1}, {j + 1}) outside {m}x{n}")
            values[i, j] = 1.0 if field == "pattern" else _parse_float(toks[2], no)
    if symmetry == "symmetric":
        if m != n:
            raise FormatError("symmetric matrix must be square")
        lower = np.tril(values)
        values = lower + np.tril(values, -1).T
    return DataMatrix(values)


def _parse_float(tok: str, lineno: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise ParseError(f"non-numeric value {tok!r}", line=lineno) from None
    if not np.isfinite(x):
        raise ParseError("NaN or infinite value", line=lineno)
    return x


def format_matrix_market(A, layout: str = "coordinate") -> str:
    A = as_data_matrix(A)
    vals = A.values
    field = "integer" if np.all(np.mod(vals, 1) == 0) else "real"
    out = [f"%%MatrixMarket matrix {layout} {field} general"]
    if layout == "array":
        out.append(f"{A.rows} {A.cols}")
        out.extend(_format_number(x) for x in vals.T.reshape(-1))
    else:
        i, j = np.nonzero(vals)
        out.append(f"{A.rows} {A.cols} {i.size}")
        out.extend(f"{a + 1} {b + 1} {_format_number(vals[a, b])}" for a, b in zip(i, j))
    return "\n".join(out) + "\n"


def save_trajectory(traj, path) -> None:
    """Write an LV trajectory as ``t,x,y`` CSV rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "x", "y"])
        for t, x, y in zip(traj.t, traj.x, traj.y):
            writer.writerow([repr(float(t)), repr(float(x)), repr(float(y))])


def ensure_parent(path) -> None:
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
