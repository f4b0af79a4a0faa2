"""Structured verdicts for inequality checks.

A BoundReport records one checked inequality: the two sides (each either an
exact rational or a certified enclosure), the signed margin rhs - lhs, the
three-valued verdict, and the working precision that decided it.  A HOLDS or
FAILS verdict is only ever issued when the margin interval excludes zero (or,
for non-strict checks, when the endpoint comparison is decisive), so verdicts
are certified by construction.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .intervals import Interval, cert_le, cert_lt


class Verdict(enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Quantity:
    """One side of a comparison: an enclosure plus an exactness flag."""

    enclosure: Interval
    exact: bool

    @staticmethod
    def exact_value(x) -> "Quantity":
        return Quantity(Interval.point(Fraction(x)), exact=True)

    @staticmethod
    def certified(enclosure: Interval) -> "Quantity":
        return Quantity(enclosure, exact=enclosure.is_point)

    @property
    def value(self) -> Fraction:
        return self.enclosure.mid

    @property
    def error(self) -> Fraction:
        return self.enclosure.error_bound

    def to_json(self) -> dict:
        out: dict = {"value": float(self), "err": float(self.error), "exact": self.exact}
        if self.exact:
            f = self.enclosure.lo
            out["rational"] = f"{f.numerator}/{f.denominator}"
        return out

    def __float__(self) -> float:
        return float(self.enclosure.mid)


@dataclass
class BoundReport:
    name: str
    params: dict
    lhs: Quantity
    rhs: Quantity
    verdict: Verdict
    precision_used: int
    relation: str = "<"
    note: str = ""

    @property
    def margin(self) -> Interval:
        return self.rhs.enclosure - self.lhs.enclosure

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "relation": self.relation,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "margin": float(self.margin.mid),
            "verdict": self.verdict.value,
            "precision_used": self.precision_used,
            **({"note": self.note} if self.note else {}),
        }

    def __str__(self) -> str:
        return (
            f"{self.name} {self.params}: lhs={float(self.lhs):.6g} "
            f"{self.relation} rhs={float(self.rhs):.6g} -> {self.verdict.value}"
        )


def _jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


def compare_report(
    name: str,
    params: dict,
    lhs: Quantity,
    rhs: Quantity,
    digits: int,
    strict: bool = True,
    note: str = "",
) -> BoundReport:
    """Build a report for `lhs < rhs` (or `lhs <= rhs` when strict=False)."""
    decided = (
        cert_lt(lhs.enclosure, rhs.enclosure)
        if strict
        else cert_le(lhs.enclosure, rhs.enclosure)
    )
    if decided is None:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.HOLDS if decided else Verdict.FAILS
    return BoundReport(
        name=name,
        params=params,
        lhs=lhs,
        rhs=rhs,
        verdict=verdict,
        precision_used=digits,
        relation="<" if strict else "<=",
        note=note,
    )


def reports_to_json(reports: list[BoundReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2)
