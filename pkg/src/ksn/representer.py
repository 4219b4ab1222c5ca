"""Solve for outer lookup tables reproducing a sample exactly.

Unknowns are the table values ``h[k, group]`` for every block k and every
group of equal w_k values. Point j contributes the equation
``sum_k h[k, group_k(j)] = F(x_j)``. With ``A`` that n-row system the
minimum-norm solution is ``h = A^T y`` where ``(A A^T) y = F``; ``A A^T``
counts the blocks in which two points share a group, so it splits along the
connected components of the incidence structure.
"""

from __future__ import annotations

import bisect
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .condition_z import build_incidence, check_z, components
from .errors import DomainError, InvalidWitness, NumericalRankWarning, Unrepresentable
from .numeric import NumericMode, convert
from .transfer import TransferStack


@dataclass(frozen=True)
class SampleSet:
    d: int
    points: tuple
    values: tuple
    mode: NumericMode = NumericMode.FLOAT

    def __post_init__(self):
        mode = NumericMode.coerce(self.mode)
        object.__setattr__(self, "mode", mode)
        if len(self.points) != len(self.values):
            raise ValueError(f"{len(self.points)} points but {len(self.values)} values")
        pts = []
        for x in self.points:
            if len(x) != self.d:
                raise DomainError(f"point {x!r} is not of dimension {self.d}")
            pt = tuple(convert(c, mode) for c in x)
            if any(c < 0 or c > 1 for c in pt):
                raise DomainError(f"point {x!r} outside the unit cube")
            pts.append(pt)
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "values", tuple(convert(v, mode) for v in self.values))

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class LookupTable:
    """Finite partial function on block-k keys plus a default elsewhere."""

    k: int
    entries: tuple
    default: object = 0
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = tuple(sorted((key, val) for key, val in self.entries))
        keys = [key for key, _ in entries]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError(f"table {self.k} keys are not strictly increasing")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_index", dict(entries))

    @property
    def keys(self) -> list:
        return [key for key, _ in self.entries]

    def __len__(self):
        return len(self.entries)

    def lookup(self, w, tolerance=None):
        """Value at key ``w``; exact match unless a nearest-key tolerance is given."""
        hit = self._index.get(w)
        if hit is not None or tolerance is None or not self.entries:
            return self.default if hit is None else hit
        keys = self.keys
        i = bisect.bisect_left(keys, w)
        best = None
        for c in (i - 1, i):
            if 0 <= c < len(keys) and abs(keys[c] - w) <= tolerance:
                if best is None or abs(keys[c] - w) < abs(keys[best] - w):
                    best = c
        return self.default if best is None else self.entries[best][1]

    def with_default(self, value) -> "LookupTable":
        return LookupTable(self.k, self.entries, value)


def w_table(stack: TransferStack, points) -> list[list]:
    return [stack.w_row(x) for x in points]


def predict(stack: TransferStack, tables, x, tolerance=None):
    """Network output ``sum_k h_k(w_k(x))``."""
    row = stack.w_row(x)
    total = 0
    for k, w in enumerate(row):
        total += tables[k].lookup(w, tolerance)
    return total


def _closed_path(system, report):
    if report.witness is not None:
        return list(range(system.n)), list(report.witness)
    vec = min(report.nullspace, key=lambda b: (sum(1 for v in b if v), b))
    idx = [j for j, v in enumerate(vec) if v]
    return idx, [vec[j] for j in idx]


def _coincident_pair(system):
    labels = [[0] * system.n for _ in system.blocks]
    for k, groups in enumerate(system.blocks):
        for g_id, g in enumerate(groups):
            for j in g:
                labels[k][j] = g_id
    seen = {}
    for j in range(system.n):
        sig = tuple(col[j] for col in labels)
        if sig in seen:
            return seen[sig], j
        seen[sig] = j
    return None


def _gram(system, comp):
    """Shared-group counts between the points of one component."""
    local = {j: i for i, j in enumerate(comp)}
    m = len(comp)
    g = [[0] * m for _ in range(m)]
    for groups in system.blocks:
        for grp in groups:
            if grp[0] not in local:
                continue
            ids = [local[j] for j in grp]
            for a in ids:
                for b in ids:
                    g[a][b] += 1
    return g


def _solve_component(gram, rhs, mode):
    if mode is NumericMode.RATIONAL:
        return exact.solve(gram, rhs)
    g = np.asarray(gram, dtype=float)
    ev = np.linalg.eigvalsh(g)
    cutoff = len(g) * np.finfo(float).eps * ev[-1]
    if ev[0] < 1e3 * cutoff:
        warnings.warn(
            f"component of size {len(g)} is nearly rank deficient "
            f"(smallest eigenvalue {ev[0]:.3e}, cutoff {cutoff:.3e})",
            NumericalRankWarning,
            stacklevel=3,
        )
    return np.linalg.solve(g, np.asarray(rhs, dtype=float)).tolist()


def fit(stack: TransferStack, sample: SampleSet, tolerance=None, default_value=0):
    """Lookup tables ``h_0..h_r`` with ``sum_k h_k(w_k(x_j)) = F(x_j)`` on the sample.

    Raises :class:`Unrepresentable` with a closed-path witness when the
    incidence matrix has rank below n, and propagates
    :class:`~ksn.errors.GroupingAmbiguity`.
    """
    if len(sample) == 0:
        raise ValueError("cannot fit an empty sample")
    if sample.d != stack.d:
        raise ValueError(f"sample dimension {sample.d} != stack dimension {stack.d}")
    mode = stack.mode
    points = [tuple(convert(c, mode) for c in x) for x in sample.points]
    values = [convert(v, mode) for v in sample.values]
    wt = w_table(stack, points)
    system = build_incidence(wt, mode, tolerance)

    pair = _coincident_pair(system)
    if pair is not None:
        raise Unrepresentable(list(pair), [1, -1])
    report = check_z(system)
    if not report.solvable_for_all_F:
        raise Unrepresentable(*_closed_path(system, report))

    nblocks = stack.blocks
    y = [None] * system.n
    for comp in components(system):
        if len(comp) == 1:
            j = comp[0]
            y[j] = values[j] / nblocks
            continue
        sol = _solve_component(_gram(system, comp), [values[j] for j in comp], mode)
        for j, v in zip(comp, sol):
            y[j] = v
    zero = Fraction(0) if mode is NumericMode.RATIONAL else 0.0
    default_value = convert(default_value, mode)
    tables = []
    for k, (groups, keys) in enumerate(zip(system.blocks, system.keys)):
        entries = []
        for grp, kvals in zip(groups, keys):
            h = sum((y[j] for j in grp), zero)
            entries.extend((key, h) for key in kvals)
        tables.append(LookupTable(k, tuple(entries), default_value))
    return tables


def annihilate(points, mu, stack: TransferStack, tables, tolerance=None):
    """``sum_j mu_j * yhat(x_j)`` after checking ``mu`` solves every block equation."""
    mode = stack.mode
    points = [tuple(convert(c, mode) for c in x) for x in points]
    mu = [convert(m, mode) for m in mu]
    if len(points) != len(mu):
        raise InvalidWitness("one coefficient per point is required")
    if points:
        system = build_incidence(w_table(stack, points), mode, tolerance)
        bad = [i for i, v in enumerate(system.residual(mu)) if v != 0]
        if bad:
            raise InvalidWitness(f"{len(bad)} block equations do not vanish")
    total = Fraction(0) if mode is NumericMode.RATIONAL else 0.0
    for x, m in zip(points, mu):
        total += m * predict(stack, tables, x)
    return total


@dataclass(frozen=True)
class ResidualReport:
    max_abs_residual: object
    table_sizes: list
    distinct_keys: int


def residual_report(stack: TransferStack, tables, sample: SampleSet) -> ResidualReport:
    mode = stack.mode
    worst = Fraction(0) if mode is NumericMode.RATIONAL else 0.0
    for x, f in zip(sample.points, sample.values):
        got = predict(stack, tables, x)
        worst = max(worst, abs(got - convert(f, mode)))
    sizes = [len(t) for t in tables]
    return ResidualReport(max_abs_residual=worst, table_sizes=sizes,
                          distinct_keys=sum(sizes))
