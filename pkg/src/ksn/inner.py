"""Concrete strictly increasing Lipschitz inner functions.

Two kinds are provided:

``HashedPiecewiseLinear(seed, segments)``
    Piecewise linear on ``segments`` equal pieces of ``[0, upper]``. Raw slope
    of piece ``i`` is ``1 + 3 u_i`` with ``u_i`` in ``[0, 1)`` drawn from a
    SplitMix64 stream keyed by ``(seed, i)``. Slopes are rescaled so the image
    has the same length as the domain, which keeps them in ``(0, 4)``. All
    knot values are exact rationals.

``TranscendentalPower``
    ``(t + 1) ** sqrt(2)``, float only.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import DomainError
from .numeric import NumericMode

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
LIPSCHITZ_BOUND = 4

HASHED = "hashed_piecewise_linear"
POWER = "transcendental_power"


def splitmix64(x: int) -> int:
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix(seed: int, index: int) -> int:
    """64-bit hash of the pair ``(seed, index)``."""
    return splitmix64(splitmix64(seed & MASK64) ^ (index & MASK64))


def unit_fraction(seed: int, index: int) -> Fraction:
    """Exact dyadic in ``[0, 1)`` with 53 bits, so it converts to float losslessly."""
    return Fraction(mix(seed, index) >> 11, 1 << 53)


@dataclass(frozen=True)
class InnerFunction:
    kind: str
    seed: int = 0
    segments: int = 1
    upper: Fraction = field(default=Fraction(3, 2))

    def __post_init__(self):
        if self.kind not in (HASHED, POWER):
            raise ValueError(f"unknown inner function kind {self.kind!r}")
        if self.kind == HASHED and self.segments < 1:
            raise ValueError("segments must be positive")
        object.__setattr__(self, "upper", Fraction(self.upper))
        if self.upper <= 0:
            raise ValueError("domain upper end must be positive")

    @classmethod
    def hashed(cls, seed: int, segments: int, upper=Fraction(3, 2)) -> "InnerFunction":
        return cls(HASHED, seed=seed, segments=segments, upper=upper)

    @classmethod
    def power(cls, upper=Fraction(3, 2)) -> "InnerFunction":
        return cls(POWER, upper=upper)

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return (Fraction(0), self.upper)

    @property
    def exact(self) -> bool:
        return self.kind == HASHED

    # knots and slopes of the hashed kind, exact then rounded once
    @cached_property
    def _exact_knots(self):
        n = self.segments
        raw = [1 + 3 * unit_fraction(self.seed, i) for i in range(n)]
        scale = n / sum(raw)
        slopes = [s * scale for s in raw]
        width = self.upper / n
        xs = [width * i for i in range(n + 1)]
        ys = [Fraction(0)]
        for s in slopes:
            ys.append(ys[-1] + s * width)
        return xs, ys, slopes

    @cached_property
    def _float_knots(self):
        xs, ys, slopes = self._exact_knots
        return [float(x) for x in xs], [float(y) for y in ys], [float(s) for s in slopes]

    def slopes(self) -> list[Fraction]:
        """Exact per-piece slopes (hashed kind only)."""
        if self.kind != HASHED:
            raise TypeError("only the piecewise linear kind has discrete slopes")
        return list(self._exact_knots[2])

    def __call__(self, t):
        return eval_phi(self, t)


def eval_phi(spec: InnerFunction, t):
    """Evaluate the inner function; a ``Fraction`` argument gives an exact result."""
    if t < 0 or t > spec.upper:
        raise DomainError(f"t = {t} outside inner domain [0, {spec.upper}]")
    if spec.kind == POWER:
        if isinstance(t, Fraction):
            raise DomainError("transcendental power inner function has no exact mode")
        return (float(t) + 1.0) ** math.sqrt(2.0)
    exact = isinstance(t, (Fraction, int))
    xs, ys, slopes = spec._exact_knots if exact else spec._float_knots
    n = spec.segments
    i = min(bisect.bisect_right(xs, t) - 1, n - 1)
    if exact:
        return ys[i] + slopes[i] * (Fraction(t) - xs[i])
    return ys[i] + slopes[i] * (float(t) - xs[i])


@dataclass(frozen=True)
class MonotoneReport:
    monotone: bool
    lipschitz_estimate: float


def verify_monotone_lipschitz(spec: InnerFunction, grid_points: int) -> MonotoneReport:
    """Scan a uniform grid over the domain; consecutive differences and slopes."""
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    hi = float(spec.upper)
    h = hi / (grid_points - 1)
    ts = [i * h for i in range(grid_points - 1)] + [hi]
    vals = [eval_phi(spec, t) for t in ts]
    monotone = True
    lip = 0.0
    for t0, t1, v0, v1 in zip(ts, ts[1:], vals, vals[1:]):
        if not v1 > v0:
            monotone = False
        lip = max(lip, (v1 - v0) / (t1 - t0))
    return MonotoneReport(monotone=monotone, lipschitz_estimate=lip)


def phi_to_dict(spec: InnerFunction) -> dict:
    d = {"kind": spec.kind, "upper": f"{spec.upper.numerator}/{spec.upper.denominator}"}
    if spec.kind == HASHED:
        d["seed"] = spec.seed
        d["segments"] = spec.segments
    return d


def phi_from_dict(d: dict) -> InnerFunction:
    kind = d["kind"]
    upper = Fraction(d["upper"])
    if kind == HASHED:
        return InnerFunction.hashed(int(d["seed"]), int(d["segments"]), upper)
    return InnerFunction(kind, upper=upper)
