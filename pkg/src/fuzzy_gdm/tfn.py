"""Triangular fuzzy numbers and the handful of operations the pipeline needs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

# |signed area| below this is treated as zero when classifying pairs
AREA_EPS = 1e-9


@dataclass(frozen=True, order=False)
class TFN:
    """Triangular fuzzy number ``(lower, mode, upper)``."""

    lower: float
    mode: float
    upper: float

    def __post_init__(self) -> None:
        if not (self.lower <= self.mode <= self.upper):
            raise ValueError(
                f"TFN requires lower <= mode <= upper, got ({self.lower}, {self.mode}, {self.upper})"
            )

    @classmethod
    def of(cls, triple: Sequence[float]) -> "TFN":
        if len(triple) != 3:
            raise ValueError(f"expected an (l, m, u) triple, got {len(triple)} values")
        return cls(float(triple[0]), float(triple[1]), float(triple[2]))

    @classmethod
    def crisp(cls, value: float) -> "TFN":
        return cls(value, value, value)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lower, self.mode, self.upper)

    def __iter__(self):
        return iter(self.as_tuple())

    def __neg__(self) -> "TFN":
        return TFN(-self.upper, -self.mode, -self.lower)

    def scale(self, k: float) -> "TFN":
        if k < 0:
            return -self.scale(-k)
        return TFN(k * self.lower, k * self.mode, k * self.upper)

    def alpha_cut(self, alpha: float) -> tuple[float, float]:
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        return (
            self.lower + alpha * (self.mode - self.lower),
            self.upper - alpha * (self.upper - self.mode),
        )

    def membership(self, x: float) -> float:
        if x < self.lower or x > self.upper:
            return 0.0
        if x == self.mode:
            return 1.0
        if x < self.mode:
            return (x - self.lower) / (self.mode - self.lower)
        return (self.upper - x) / (self.upper - self.mode)

    def __repr__(self) -> str:
        return f"TFN({self.lower:g}, {self.mode:g}, {self.upper:g})"


def extended_subtract(a: TFN, b: TFN) -> TFN:
    """Extended (interval) subtraction ``a - b``."""
    return TFN(a.lower - b.upper, a.mode - b.mode, a.upper - b.lower)


def weighted_sum(terms: Iterable[tuple[float, TFN]]) -> TFN:
    """Componentwise combination ``sum(c * t)`` with nonnegative coefficients."""
    terms = list(terms)
    if not terms:
        raise ValueError("weighted_sum needs at least one term")
    lo = mo = up = 0.0
    for coef, t in terms:
        if coef < 0:
            raise ValueError(f"coefficients must be nonnegative, got {coef}")
        lo += coef * t.lower
        mo += coef * t.mode
        up += coef * t.upper
    return TFN(lo, mo, up)


def _area_right_of_zero(t: TFN) -> float:
    l, m, u = t.lower, t.mode, t.upper
    if l >= 0.0:
        return 0.5 * (u - l)
    if u <= 0.0:
        return 0.0
    if m >= 0.0:
        # trapezoid on [0, m] under the rising edge, then the falling edge
        h0 = -l / (m - l)
        return 0.5 * m * (h0 + 1.0) + 0.5 * (u - m)
    # only the tail of the falling edge crosses zero
    h0 = u / (u - m)
    return 0.5 * u * h0


def signed_area(t: TFN) -> float:
    """Area of the membership function over ``x > 0`` minus the area over ``x < 0``.

    A zero-width number has no area and returns 0.
    """
    total = 0.5 * (t.upper - t.lower)
    if total <= 0.0:
        return 0.0
    pos = _area_right_of_zero(t)
    return pos - (total - pos)


def rank_score(t: TFN) -> float:
    """Crisp ranking value ``(l + 2m + u) / 4``."""
    return (t.lower + 2.0 * t.mode + t.upper) / 4.0
