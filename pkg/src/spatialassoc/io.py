"""Reading point and grid data, writing results."""

import csv
import io
import json
import math
from pathlib import Path

import numpy as np
from PIL import Image

from .exceptions import DataFormatError
from .geometry import PointSample
from .simulate import grid_coords

POINT_COLUMNS = ("s1", "s2", "x", "y")
MISSING = "NA"


def _parse_float(text, path, lineno, column):
    try:
        val = float(text)
    except ValueError:
        raise DataFormatError(f"{path}:{lineno}: column {column!r}: not a number: {text!r}") from None
    if not math.isfinite(val):
        raise DataFormatError(f"{path}:{lineno}: column {column!r}: non-finite value {text!r}")
    return val


def parse_points_csv(path):
    """Read a ``s1,s2,x,y`` CSV (with header) into a :class:`PointSample`."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        if tuple(header) != POINT_COLUMNS:
            raise DataFormatError(f"{path}:1: expected header {','.join(POINT_COLUMNS)}, got {','.join(header)}")
        rows = []
        for row in reader:
            lineno = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(POINT_COLUMNS):
                raise DataFormatError(f"{path}:{lineno}: expected {len(POINT_COLUMNS)} fields, got {len(row)}")
            rows.append([_parse_float(c.strip(), path, lineno, name)
                         for c, name in zip(row, POINT_COLUMNS)])
    if len(rows) < 3:
        raise DataFormatError(f"{path}: need at least 3 data rows, got {len(rows)}")
    data = np.array(rows)
    return PointSample(data[:, :2], data[:, 2], data[:, 3])


def read_matrix(path):
    """Read a 2-D array from a PGM image or a whitespace/comma separated text matrix."""
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic in (b"P2", b"P5"):
        try:
            with Image.open(path) as img:
                return np.asarray(img, dtype=np.float64)
        except OSError as exc:
            raise DataFormatError(f"{path}: unreadable PGM image: {exc}") from None
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.replace(",", " ").split()
            if not fields:
                continue
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise DataFormatError(f"{path}:{lineno}: ragged row: {len(fields)} fields, expected {width}")
            rows.append([_parse_float(f, path, lineno, i) for i, f in enumerate(fields)])
    if not rows:
        raise DataFormatError(f"{path}: empty matrix")
    return np.array(rows)


def parse_grid(path_x, path_y):
    """Two equally sized matrices as one sample on the unit pixel grid.

    Pixel ``(row, col)`` sits at coordinates ``(col, row)`` with the origin at
    the top-left corner; values are used as they are.
    """
    gx = read_matrix(path_x)
    gy = read_matrix(path_y)
    if gx.shape != gy.shape:
        raise DataFormatError(f"grid dimension mismatch: {path_x} is {gx.shape[0]}x{gx.shape[1]}, "
                              f"{path_y} is {gy.shape[0]}x{gy.shape[1]}")
    return PointSample(grid_coords(*gx.shape), gx.ravel(), gy.ravel())


def read_series(path):
    """One number per line; a non-numeric first line is taken as a header."""
    path = Path(path)
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip().split(",")[-1].strip()
            if not text:
                continue
            if lineno == 1 and not values:
                try:
                    float(text)
                except ValueError:
                    continue
            values.append(_parse_float(text, path, lineno, "value"))
    return np.array(values)


def format_number(val):
    if val is None:
        return MISSING
    if isinstance(val, str):
        return val
    if isinstance(val, (int, np.integer)):
        return str(int(val))
    return "%.17g" % val


def to_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buf.getvalue()


def to_json(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_points_csv(path, coords, x, y):
    rows = [(float(a), float(b), float(u), float(v)) for (a, b), u, v in zip(coords, x, y)]
    Path(path).write_text(to_csv(POINT_COLUMNS, rows))
