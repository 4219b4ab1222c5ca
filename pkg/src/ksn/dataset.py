"""CSV datasets ``x1,...,xd,f`` and generators for discontinuous targets."""

from __future__ import annotations

import csv
import io
import itertools
import math
from fractions import Fraction

from .errors import FormatError
from .inner import unit_fraction
from .numeric import NumericMode, decimal_or_fraction, parse_number
from .representer import SampleSet

KINDS = ("step", "checker", "random")
_SCATTER_SALT = 0x5CA77E2


def lattice(d: int, grid: int) -> list[tuple[Fraction, ...]]:
    """``grid**d`` points ``i/(grid-1)`` per axis, endpoints included, x1 slowest."""
    if grid < 2:
        raise ValueError("grid must be at least 2")
    axis = [Fraction(i, grid - 1) for i in range(grid)]
    return list(itertools.product(axis, repeat=d))


def scatter(d: int, n: int, seed: int) -> list[tuple[float, ...]]:
    """``n`` pseudo-random points of the unit cube from the hashed stream."""
    return [tuple(float(unit_fraction(seed ^ _SCATTER_SALT, i * d + j)) for j in range(d))
            for i in range(n)]


def target_value(kind: str, x, index: int, m: int = 2, seed: int = 0):
    if kind == "step":
        return 1 if x[0] >= Fraction(1, 2) else 0
    if kind == "checker":
        return sum(math.floor(m * Fraction(c)) for c in x) % 2
    if kind == "random":
        return float(unit_fraction(seed, index))
    raise ValueError(f"unknown target kind {kind!r}")


def _text(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return decimal_or_fraction(v)
    return str(v)


def generate(kind: str, d: int, grid: int = 5, m: int = 2, seed: int = 0,
             scatter_n: int | None = None) -> str:
    """CSV text for a generated dataset."""
    if d < 2:
        raise ValueError("d must be > 1")
    if kind not in KINDS:
        raise ValueError(f"unknown target kind {kind!r}")
    points = scatter(d, scatter_n, seed) if scatter_n else lattice(d, grid)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f"x{j + 1}" for j in range(d)] + ["f"])
    for i, x in enumerate(points):
        writer.writerow([_text(c) for c in x] + [_text(target_value(kind, x, i, m, seed))])
    return out.getvalue()


def parse_csv(text: str, mode=NumericMode.FLOAT) -> SampleSet:
    mode = NumericMode.coerce(mode)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty dataset", line=1) from None
    header = [h.strip() for h in header]
    d = len(header) - 1
    if d < 1 or header[-1] != "f" or header[:-1] != [f"x{j + 1}" for j in range(d)]:
        raise FormatError(f"header must be x1,...,xd,f; got {','.join(header)}", line=1)
    points, values = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != d + 1:
            raise FormatError(f"expected {d + 1} columns, found {len(row)}", line=lineno)
        try:
            nums = [parse_number(c, mode) for c in row]
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad number: {exc}", line=lineno) from None
        if any(c < 0 or c > 1 for c in nums[:-1]):
            raise FormatError("coordinate outside [0, 1]", line=lineno)
        points.append(tuple(nums[:-1]))
        values.append(nums[-1])
    return SampleSet(d=d, points=tuple(points), values=tuple(values), mode=mode)


def read_csv(path, mode=NumericMode.FLOAT) -> SampleSet:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_csv(fh.read(), mode)


def parse_points(text: str, d: int, mode=NumericMode.FLOAT) -> list[tuple]:
    """Points from CSV text; a header row and a trailing ``f`` column are ignored."""
    pts = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if lineno == 1 and row[0].strip().lower().startswith("x"):
            continue
        if len(row) < d:
            raise FormatError(f"expected at least {d} columns", line=lineno)
        try:
            pts.append(tuple(parse_number(c, mode) for c in row[:d]))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad number: {exc}", line=lineno) from None
    return pts
