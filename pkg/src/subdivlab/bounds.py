"""Closed-form exponents of n in the bounds on ex(n, H_t), in exact arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .constructions import lower_bound_exponent
from .errors import InvalidParams

__all__ = ["BoundRow", "upper_exponent", "prior_exponent", "kab_exponent", "bound_table"]

T_MAX = 64


def upper_exponent(t: int) -> Fraction:
    """``3/2 - 1/(4t-6)``, equal to ``1 + (t-2)/(2t-3)``."""
    return Fraction(3, 2) - Fraction(1, 4 * t - 6)


def prior_exponent(t: int) -> Fraction:
    """``3/2 - 1/6^t``."""
    return Fraction(3, 2) - Fraction(1, 6**t)


def kab_exponent(a: int) -> Fraction:
    """Upper exponent for the subdivided ``K_{a,b}``: ``3/2 - 1/(4a-2)``."""
    return upper_exponent(a + 1)


@dataclass(frozen=True)
class BoundRow:
    t: int
    upper: Fraction
    prior: Fraction
    lower: Fraction

    @property
    def ordered(self) -> bool:
        return self.lower <= self.upper <= self.prior

    def to_dict(self, comparisons: bool = True) -> dict:
        d = {"t": self.t, "upper": float(self.upper), "upper_exact": str(self.upper)}
        if comparisons:
            d.update(
                prior=float(self.prior),
                prior_exact=str(self.prior),
                lower=float(self.lower),
                lower_exact=str(self.lower),
                ordered=self.ordered,
            )
        return d


def bound_table(ts: Iterable[int]) -> list[BoundRow]:
    rows = []
    for t in ts:
        if not 3 <= t <= T_MAX:
            raise InvalidParams(f"t={t} outside [3, {T_MAX}]")
        rows.append(BoundRow(t, upper_exponent(t), prior_exponent(t), lower_bound_exponent(t)))
    return rows
