"""Middle layer z_k and the disjoint-range remap w_k = tau_k(z_k)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .inner import InnerFunction, eval_phi, phi_from_dict, phi_to_dict
from .numeric import NumericMode, convert, format_number, parse_number

DEFAULT_SEED = 0x4B535431
DEFAULT_SEGMENTS = 64


def sigma(u):
    """Algebraic sigmoid onto (0, 1): ``1/2 + u / (2 (1 + |u|))``."""
    half = Fraction(1, 2) if isinstance(u, (Fraction, int)) else 0.5
    return half + u / (2 * (1 + abs(u)))


def sigma_inv(v):
    if not 0 < v < 1:
        raise DomainError(f"sigma_inv needs 0 < v < 1, got {v}")
    s = 2 * v - 1
    if s >= 0:
        return s / (1 - s)
    return s / (1 + s)


@dataclass(frozen=True)
class TransferStack:
    d: int
    lam: object
    epsilon: object
    phi: InnerFunction
    intervals: tuple
    mode: NumericMode = NumericMode.FLOAT

    def __post_init__(self):
        mode = NumericMode.coerce(self.mode)
        object.__setattr__(self, "mode", mode)
        if self.d < 2:
            raise ValueError("input dimension d must be > 1")
        lam = convert(self.lam, mode)
        eps = convert(self.epsilon, mode)
        if lam == 0 or eps == 0:
            raise ValueError("lambda and epsilon must be nonzero")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "epsilon", eps)
        ivs = tuple((convert(a, mode), convert(b, mode)) for a, b in self.intervals)
        if len(ivs) != self.r + 1:
            raise ValueError(f"need {self.r + 1} intervals, got {len(ivs)}")
        for a, b in ivs:
            if not a < b:
                raise ValueError(f"empty interval ({a}, {b})")
        ordered = sorted(ivs)
        for (a0, b0), (a1, b1) in zip(ordered, ordered[1:]):
            if a1 < b0:
                raise ValueError(f"intervals ({a0}, {b0}) and ({a1}, {b1}) overlap")
        object.__setattr__(self, "intervals", ivs)
        if mode is NumericMode.RATIONAL and not self.phi.exact:
            raise ValueError(f"inner function {self.phi.kind} has no exact mode")

    @property
    def r(self) -> int:
        return 2 * self.d

    @property
    def blocks(self) -> int:
        return self.r + 1

    def _point(self, x):
        if len(x) != self.d:
            raise DomainError(f"expected a point of dimension {self.d}, got {len(x)}")
        pt = [convert(c, self.mode) for c in x]
        for c in pt:
            if c < 0 or c > 1:
                raise DomainError(f"coordinate {c} outside [0, 1]")
        return pt

    def z(self, x, k: int):
        return z_eval(self, x, k)

    def w(self, x, k: int):
        return w_eval(self, x, k)

    def tau(self, t, k: int):
        a, b = self.intervals[k]
        return a + (b - a) * sigma(t)

    def tau_inv(self, w, k: int):
        a, b = self.intervals[k]
        return sigma_inv((w - a) / (b - a))

    def w_row(self, x) -> list:
        pt = self._point(x)
        return [self.tau(self._z(pt, k), k) for k in range(self.blocks)]

    def z_row(self, x) -> list:
        pt = self._point(x)
        return [self._z(pt, k) for k in range(self.blocks)]

    def _z(self, pt, k):
        shift = self.epsilon * k
        total = 0
        weight = 1
        for c in pt:
            total += weight * eval_phi(self.phi, c + shift)
            weight *= self.lam
        return total

    def to_dict(self) -> dict:
        fmt = lambda v: format_number(v, self.mode)
        return {
            "d": self.d,
            "r": self.r,
            "lambda": fmt(self.lam),
            "epsilon": fmt(self.epsilon),
            "intervals": [[fmt(a), fmt(b)] for a, b in self.intervals],
            "phi": phi_to_dict(self.phi),
        }

    @classmethod
    def from_dict(cls, data: dict, mode) -> "TransferStack":
        mode = NumericMode.coerce(mode)
        num = lambda s: parse_number(s, mode)
        stack = cls(
            d=int(data["d"]),
            lam=num(data["lambda"]),
            epsilon=num(data["epsilon"]),
            phi=phi_from_dict(data["phi"]),
            intervals=tuple((num(a), num(b)) for a, b in data["intervals"]),
            mode=mode,
        )
        if int(data["r"]) != stack.r:
            raise ValueError(f"r = {data['r']} inconsistent with d = {stack.d}")
        return stack


def z_eval(stack: TransferStack, x, k: int):
    """``sum_j lam**(j-1) * phi(x_j + eps*k)``."""
    if not 0 <= k <= stack.r:
        raise DomainError(f"block index {k} outside [0, {stack.r}]")
    return stack._z(stack._point(x), k)


def w_eval(stack: TransferStack, x, k: int):
    return stack.tau(z_eval(stack, x, k), k)


def default_stack(d: int, mode=NumericMode.FLOAT, *, lam=None, epsilon=None,
                  phi: str = "hashed", seed: int = DEFAULT_SEED,
                  segments: int = DEFAULT_SEGMENTS) -> TransferStack:
    """Stack with ``eps = 1/(4d)``, ``lam = 1/2`` and intervals ``(3k, 3k+1)``.

    The inner domain is ``[0, 1 + 2d*eps]`` so every shifted coordinate fits.
    """
    mode = NumericMode.coerce(mode)
    if d < 2:
        raise ValueError("input dimension d must be > 1")
    lam = Fraction(1, 2) if lam is None else lam
    epsilon = Fraction(1, 4 * d) if epsilon is None else epsilon
    eps_exact = Fraction(repr(epsilon)) if isinstance(epsilon, float) else Fraction(epsilon)
    if eps_exact <= 0:
        raise ValueError("this stack layout needs epsilon > 0")
    upper = 1 + 2 * d * eps_exact
    if mode is NumericMode.FLOAT:
        # largest shifted coordinate as the float pipeline computes it
        upper = max(upper, Fraction(1.0 + float(epsilon) * (2 * d)))
    if phi == "hashed":
        inner = InnerFunction.hashed(seed, segments, upper)
    elif phi == "power":
        inner = InnerFunction.power(upper)
    else:
        raise ValueError(f"unknown phi {phi!r}")
    intervals = tuple((3 * k, 3 * k + 1) for k in range(2 * d + 1))
    return TransferStack(d=d, lam=lam, epsilon=epsilon, phi=inner,
                         intervals=intervals, mode=mode)
