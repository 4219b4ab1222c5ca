"""The assembled three-layer network and its canonical file format."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .errors import FormatError
from .numeric import NumericMode, format_number, parse_number
from .representer import LookupTable, SampleSet, fit, predict, residual_report
from .transfer import TransferStack

FORMAT_VERSION = "1"


@dataclass(frozen=True)
class Provenance:
    n_fitted: int = 0
    fit_timestamp: str = ""
    residual: object = 0


@dataclass(frozen=True)
class KolmogorovNetwork:
    stack: TransferStack
    tables: tuple
    provenance: Provenance = field(default_factory=Provenance)

    def __post_init__(self):
        tables = tuple(self.tables)
        object.__setattr__(self, "tables", tables)
        if len(tables) != self.stack.blocks:
            raise ValueError(f"expected {self.stack.blocks} tables, got {len(tables)}")
        for k, t in enumerate(tables):
            a, b = self.stack.intervals[k]
            if t.k != k:
                raise ValueError(f"table at position {k} is labelled block {t.k}")
            if any(not a < key < b for key in t.keys):
                raise ValueError(f"table {k} has keys outside ({a}, {b})")

    @property
    def mode(self) -> NumericMode:
        return self.stack.mode

    @classmethod
    def fit(cls, stack: TransferStack, sample: SampleSet, tolerance=None,
            default_value=0, timestamp: str = "") -> "KolmogorovNetwork":
        tables = fit(stack, sample, tolerance, default_value)
        res = residual_report(stack, tables, sample).max_abs_residual
        prov = Provenance(n_fitted=len(sample), fit_timestamp=timestamp, residual=res)
        return cls(stack, tables, prov)

    def eval(self, x, tolerance=None):
        return predict(self.stack, self.tables, x, tolerance)

    __call__ = eval

    def to_dict(self) -> dict:
        fmt = lambda v: format_number(v, self.mode)
        return {
            "version": FORMAT_VERSION,
            "numeric_mode": self.mode.value,
            "stack": self.stack.to_dict(),
            "tables": [
                {
                    "k": t.k,
                    "default": fmt(t.default),
                    "entries": [[fmt(key), fmt(val)] for key, val in t.entries],
                }
                for t in self.tables
            ],
            "provenance": {
                "n_fitted": self.provenance.n_fitted,
                "fit_timestamp": self.provenance.fit_timestamp,
                "residual": fmt(self.provenance.residual),
            },
        }

    def dumps(self) -> str:
        return _dump(self.to_dict(), 0) + "\n"

    @classmethod
    def loads(cls, text: str) -> "KolmogorovNetwork":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(exc.msg, line=exc.lineno) from exc
        return _from_dict(data, text)


def _dump(obj, depth):
    """JSON with flat lists kept on one line, so each table entry is one line."""
    pad = " " * (depth + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * depth + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return json.dumps(obj)
        items = [pad + _dump(v, depth + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + " " * depth + "]"
    return json.dumps(obj)


def _field_line(text, name):
    needle = f'"{name}"'
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return None


def _from_dict(data, text=""):
    def fail(msg, name):
        raise FormatError(msg, line=_field_line(text, name), field=name)

    if not isinstance(data, dict):
        raise FormatError("top level must be an object", line=1)
    for name in ("version", "numeric_mode", "stack", "tables", "provenance"):
        if name not in data:
            raise FormatError("missing field", field=name)
    if data["version"] != FORMAT_VERSION:
        fail(f"unsupported version {data['version']!r}", "version")
    try:
        mode = NumericMode.coerce(data["numeric_mode"])
    except ValueError as exc:
        fail(str(exc), "numeric_mode")
    try:
        stack = TransferStack.from_dict(data["stack"], mode)
    except (KeyError, TypeError, ValueError) as exc:
        fail(f"bad stack: {exc}", "stack")
    raw_tables = data["tables"]
    if not isinstance(raw_tables, list) or len(raw_tables) != stack.blocks:
        n = len(raw_tables) if isinstance(raw_tables, list) else "?"
        fail(f"expected {stack.blocks} tables, found {n}", "tables")
    tables = []
    for pos, t in enumerate(raw_tables):
        try:
            entries = tuple((parse_number(k, mode), parse_number(v, mode))
                            for k, v in t["entries"])
            table = LookupTable(int(t["k"]), entries, parse_number(t["default"], mode))
        except (KeyError, TypeError, ValueError) as exc:
            fail(f"bad table {pos}: {exc}", "entries")
        tables.append(table)
    prov = data["provenance"]
    try:
        provenance = Provenance(int(prov["n_fitted"]), str(prov["fit_timestamp"]),
                                parse_number(prov["residual"], mode))
    except (KeyError, TypeError, ValueError) as exc:
        fail(f"bad provenance: {exc}", "provenance")
    try:
        return KolmogorovNetwork(stack, tables, provenance)
    except ValueError as exc:
        fail(str(exc), "tables")


def save(net: KolmogorovNetwork, path) -> None:
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(net.dumps())
    os.replace(tmp, path)


def load(path) -> KolmogorovNetwork:
    with open(path, encoding="utf-8") as fh:
        return KolmogorovNetwork.loads(fh.read())
