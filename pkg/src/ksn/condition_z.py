"""Incidence systems over w-values and closed-path (Condition Z) detection.

For each block k the sample indices are partitioned by equal w_k value; every
group contributes one homogeneous equation ``sum_{j in group} mu_j = 0``. A
closed path is a coefficient vector with every entry nonzero solving all
equations at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .errors import GroupingAmbiguity, SizeError
from .numeric import NumericMode

DEFAULT_TOLERANCE = 1e-12
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class IncidenceSystem:
    """Blocks of index groups; ``keys[k][g]`` are the distinct values in group g."""

    n: int
    blocks: tuple
    keys: tuple = field(compare=False)

    @property
    def s_counts(self) -> list[int]:
        return [len(groups) for groups in self.blocks]

    @property
    def s(self) -> int:
        return sum(self.s_counts)

    @property
    def matrix(self) -> list[list[int]]:
        rows = []
        for groups in self.blocks:
            for g in groups:
                row = [0] * self.n
                for j in g:
                    row[j] = 1
                rows.append(row)
        return rows

    def residual(self, mu) -> list:
        """Left side of every equation for coefficients ``mu``."""
        return [sum(mu[j] for j in g) for groups in self.blocks for g in groups]


@dataclass(frozen=True)
class ZReport:
    n: int
    rank: int
    solvable_for_all_F: bool
    z_satisfied: bool
    witness: tuple | None
    nullspace_dim: int
    nullspace: tuple = field(default=(), repr=False)
    s_counts: tuple = ()


def _close(a, b, tol):
    return abs(b - a) <= tol * max(1.0, abs(a), abs(b))


def _group_column(values, k, mode, tol):
    order = sorted(range(len(values)), key=lambda j: values[j])
    groups, keys = [], []
    for j in order:
        v = values[j]
        if groups:
            last = values[groups[-1][-1]]
            if v == last:
                groups[-1].append(j)
                if keys[-1][-1] != v:
                    keys[-1].append(v)
                continue
            if mode is NumericMode.FLOAT and tol > 0:
                thr = tol * max(1.0, abs(last), abs(v))
                gap = v - last
                if gap <= thr:
                    groups[-1].append(j)
                    keys[-1].append(v)
                    continue
                if gap < 10 * thr:
                    raise GroupingAmbiguity(k, last, v, gap, thr)
        groups.append([j])
        keys.append([v])
    canon = sorted(zip(groups, keys), key=lambda gk: gk[1][0])
    return (tuple(tuple(sorted(g)) for g, _ in canon),
            tuple(tuple(kv) for _, kv in canon))


def build_incidence(w_values, mode=NumericMode.FLOAT, tolerance=None) -> IncidenceSystem:
    """Group each column of an ``n x (r+1)`` table into equal-value classes.

    In float mode consecutive sorted values merge when their gap is at most
    ``tolerance * max(1, |a|, |b|)``; a gap within ten times that raises
    :class:`GroupingAmbiguity`. Rational mode groups by exact equality.
    """
    mode = NumericMode.coerce(mode)
    if mode is NumericMode.RATIONAL:
        if tolerance:
            raise ValueError("rational mode groups exactly; tolerance must be 0")
        tol = 0
    else:
        tol = DEFAULT_TOLERANCE if tolerance is None else float(tolerance)
        if tol < 0:
            raise ValueError("tolerance must be nonnegative")
    rows = [list(r) for r in w_values]
    n = len(rows)
    width = len(rows[0]) if rows else 0
    if any(len(r) != width for r in rows):
        raise ValueError("w-table is not rectangular")
    blocks, keys = [], []
    for k in range(width):
        g, kv = _group_column([r[k] for r in rows], k, mode, tol)
        blocks.append(g)
        keys.append(kv)
    return IncidenceSystem(n=n, blocks=tuple(blocks), keys=tuple(keys))


class _DisjointSets:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def components(system: IncidenceSystem) -> list[list[int]]:
    """Connected classes of points that share a group in some block."""
    ds = _DisjointSets(system.n)
    for groups in system.blocks:
        for g in groups:
            for j in g[1:]:
                ds.union(g[0], j)
    comps: dict[int, list[int]] = {}
    for j in range(system.n):
        comps.setdefault(ds.find(j), []).append(j)
    return sorted(comps.values())


def _component_rows(system, comp):
    local = {j: i for i, j in enumerate(comp)}
    rows = []
    for groups in system.blocks:
        for g in groups:
            if g[0] in local:
                row = [0] * len(comp)
                for j in g:
                    row[local[j]] = 1
                rows.append(row)
    return rows


def nowhere_zero_combination(basis, n):
    """Combine basis vectors with weights ``t**i`` (t prime) until no entry vanishes.

    Each entry is a nonzero polynomial in t of degree below ``len(basis)``,
    so only finitely many t fail; every candidate is verified entrywise.
    """
    if not basis:
        return None
    if any(all(b[j] == 0 for b in basis) for j in range(n)):
        return None
    t_values = itertools.chain(_PRIMES, itertools.count(_PRIMES[-1] + 2, 2))
    for t in t_values:
        mu = [0] * n
        w = 1
        for b in basis:
            for j, v in enumerate(b):
                if v:
                    mu[j] += w * v
            w *= t
        if all(mu):
            return exact.primitive(mu)
    raise AssertionError("unreachable")


def check_z(system: IncidenceSystem) -> ZReport:
    """Rank, nullspace and closed-path witness of an incidence system.

    Works per connected component; the matrix entries are 0/1 so the
    elimination is exact whatever the numeric mode used for grouping.
    """
    n = system.n
    total_rank = 0
    basis = []
    for comp in components(system):
        if len(comp) == 1:
            total_rank += 1
            continue
        rows = _component_rows(system, comp)
        local_basis = exact.nullspace(rows, len(comp))
        total_rank += len(comp) - len(local_basis)
        for vec in local_basis:
            full = [0] * n
            for j, v in zip(comp, vec):
                full[j] = v
            basis.append(full)
    witness = nowhere_zero_combination(basis, n)
    if witness is not None:
        assert all(v == 0 for v in system.residual(witness)) and all(witness)
    return ZReport(
        n=n,
        rank=total_rank,
        solvable_for_all_F=total_rank == n,
        z_satisfied=witness is None,
        witness=tuple(witness) if witness is not None else None,
        nullspace_dim=len(basis),
        nullspace=tuple(tuple(b) for b in basis),
        s_counts=tuple(system.s_counts),
    )


def brute_force_z(w_values, max_n: int = 10) -> ZReport:
    """Independent oracle for :func:`check_z` on tiny tables.

    Equations come from exact value equality, the nullspace from sympy, and a
    witness is searched over integer weight grids ``{0..g}^dim`` for growing
    g. A grid with ``g = n`` always contains one when any exists: each
    coordinate's bad set is a hyperplane hitting at most ``(n+1)^(dim-1)``
    of the ``(n+1)^dim`` grid points.
    """
    import sympy

    rows = [list(r) for r in w_values]
    n = len(rows)
    if n > max_n:
        raise SizeError(f"brute force limited to n <= {max_n}, got {n}")
    if n == 0:
        return ZReport(n=0, rank=0, solvable_for_all_F=True, z_satisfied=True,
                       witness=None, nullspace_dim=0)
    eqs = []
    for k in range(len(rows[0])):
        by_value: dict = {}
        for j, r in enumerate(rows):
            by_value.setdefault(r[k], []).append(j)
        for members in by_value.values():
            eqs.append([1 if j in members else 0 for j in range(n)])
    m = sympy.Matrix(eqs) if eqs else sympy.zeros(0, n)
    rk = m.rank()
    basis = []
    for vec in m.nullspace():
        qs = [Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in vec]
        basis.append(exact.primitive(qs))
    witness = None
    best = [max((abs(b[j]) for b in basis), default=0) for j in range(n)]
    if basis and min(best) > 0:
        b = np.array(basis, dtype=np.int64)
        dim = len(basis)
        for g in range(1, n + 1):
            for c in itertools.product(range(g + 1), repeat=dim):
                if max(c) != g:
                    continue
                mu = np.asarray(c, dtype=np.int64) @ b
                if np.all(mu != 0):
                    witness = exact.primitive(mu.tolist())
                    break
            if witness is not None:
                break
        assert witness is not None, "grid bound violated"
    return ZReport(
        n=n,
        rank=rk,
        solvable_for_all_F=rk == n,
        z_satisfied=witness is None,
        witness=tuple(witness) if witness is not None else None,
        nullspace_dim=len(basis),
        nullspace=tuple(tuple(v) for v in basis),
    )


def minimal_violation(w_values, max_subset: int = 12, mode=NumericMode.FLOAT,
                      tolerance=None):
    """Smallest subset of points carrying a closed path, or ``None``.

    Returns ``(indices, mu)`` with ``mu`` aligned to ``indices``.
    """
    rows = [list(r) for r in w_values]
    n = len(rows)
    if max_subset > 12:
        raise SizeError("max_subset is capped at 12")
    for size in range(2, min(n, max_subset) + 1):
        for subset in itertools.combinations(range(n), size):
            sub = [rows[j] for j in subset]
            report = check_z(build_incidence(sub, mode, tolerance))
            if report.witness is not None:
                return list(subset), list(report.witness)
    return None
