"""
TFGRID v1 dump module for the TF phase-space toolkit.

Text layout:

    # TFGRID v1
    # written <timestamp>            (optional)
    N <int>
    Lx <float>
    Lp <float>
    hbar <float>
    j k re im                         (phase fields, N*N rows)
    j re im                           (configuration fields, N rows)

Floats are written with 17 significant digits, so a dump read back gives
bit-identical values.
"""

import os
from datetime import datetime
from typing import List, Union

import numpy as np

from .errors import DumpFormatError, GridMismatchError
from .grid import ConfigField, GridSpec, PhaseField

MAGIC = "# TFGRID v1"
HEADER_KEYS = ("N", "Lx", "Lp", "hbar")


def _fmt(value: float) -> str:
    return "%.17g" % value


def format_tfgrid(field: Union[PhaseField, ConfigField], timestamp: bool = False) -> str:
    grid = field.grid
    lines = [MAGIC]
    if timestamp:
        lines.append(f"# written {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    lines.append(f"N {grid.N}")
    lines.append(f"Lx {_fmt(grid.Lx)}")
    lines.append(f"Lp {_fmt(grid.Lp)}")
    lines.append(f"hbar {_fmt(grid.hbar)}")

    if isinstance(field, PhaseField):
        for j in range(grid.N):
            row = field.values[j]
            for k in range(grid.N):
                lines.append(f"{j} {k} {_fmt(row[k].real)} {_fmt(row[k].imag)}")
    else:
        for j, value in enumerate(field.values):
            lines.append(f"{j} {_fmt(value.real)} {_fmt(value.imag)}")
    return "\n".join(lines) + "\n"


def write_tfgrid(
    field: Union[PhaseField, ConfigField],
    path: str,
    timestamp: bool = False,
) -> str:
    """
    Write a field as a TFGRID v1 dump.

    Args:
        field: Phase or configuration field
        path: Output file path; parent directories are created
        timestamp: Add a commented '# written ...' line

    Returns:
        The path written
    """
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w") as f:
        f.write(format_tfgrid(field, timestamp))
    return path


def parse_tfgrid(text: str) -> Union[PhaseField, ConfigField]:
    lines: List[str] = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise DumpFormatError(f"line 1: expected '{MAGIC}'")

    body = [(i + 1, line.split()) for i, line in enumerate(lines[1:], start=1)
            if line.strip() and not line.lstrip().startswith("#")]
    if len(body) < len(HEADER_KEYS):
        raise DumpFormatError("truncated header")

    header = {}
    for (lineno, tokens), key in zip(body, HEADER_KEYS):
        if len(tokens) != 2 or tokens[0] != key:
            raise DumpFormatError(f"line {lineno}: expected '{key} <value>'")
        try:
            header[key] = int(tokens[1]) if key == "N" else float(tokens[1])
        except ValueError:
            raise DumpFormatError(f"line {lineno}: bad value for {key}: {tokens[1]!r}")

    try:
        grid = GridSpec.from_windows(header["N"], header["Lx"], header["Lp"], header["hbar"])
    except (GridMismatchError, ValueError) as e:
        raise DumpFormatError(f"header: {e}")

    rows = body[len(HEADER_KEYS):]
    if not rows:
        raise DumpFormatError("no data rows")
    width = len(rows[0][1])
    if width not in (3, 4):
        raise DumpFormatError(f"line {rows[0][0]}: expected 3 or 4 columns, got {width}")

    N = grid.N
    expected = N * N if width == 4 else N
    if len(rows) != expected:
        raise DumpFormatError(f"expected {expected} data rows, got {len(rows)}")

    shape = (N, N) if width == 4 else (N,)
    values = np.zeros(shape, dtype=complex)
    seen = np.zeros(shape, dtype=bool)
    for lineno, tokens in rows:
        if len(tokens) != width:
            raise DumpFormatError(f"line {lineno}: expected {width} columns, got {len(tokens)}")
        try:
            index = tuple(int(t) for t in tokens[:width - 2])
            re, im = float(tokens[-2]), float(tokens[-1])
        except ValueError:
            raise DumpFormatError(f"line {lineno}: unparsable row")
        if any(i < 0 or i >= N for i in index) or seen[index]:
            raise DumpFormatError(f"line {lineno}: bad or repeated index {index}")
        seen[index] = True
        values[index] = complex(re, im)

    try:
        if width == 4:
            return PhaseField(grid, values)
        return ConfigField(grid, values)
    except ValueError as e:
        raise DumpFormatError(str(e))


def read_tfgrid(path: str) -> Union[PhaseField, ConfigField]:
    """Read a TFGRID v1 dump; the row width decides the field type."""
    with open(path, "r") as f:
        return parse_tfgrid(f.read())
