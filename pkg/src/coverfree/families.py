"""Maximum r-cover-free families: exact search, greedy witnesses, size bounds.

The exact search is a branch-and-bound over bitmasks in lexicographic order
with incremental cover-free feasibility checks.  Two symmetry-breaking rules
cut ground-set permutations at the first two branch levels only:

* level 1: the lexicographically smallest member of some optimal family can
  be mapped to a prefix mask 2**k - 1 (send its elements to the lowest
  positions); masks of popcount >= k are numerically >= 2**k - 1, so the
  prefix stays lex-minimal and later members may be restricted to popcount
  >= k.
* level 2: permutations fixing the prefix split the ground set in two blocks,
  so the second member can be normalized to a prefix inside each block.

Both rules keep at least one optimum reachable; deeper levels are explored
without restrictions.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .backend import kernels
from .combinatorics import binom, middle_binomial
from .distributions import FamilyOfSets
from .intervals import Interval, iexp, ilog
from .reporting import BoundReport, Quantity, Verdict, compare_report
from .rng import Xoshiro256StarStar

__all__ = [
    "GBoundsReport",
    "SearchBudget",
    "SearchResult",
    "eq3_upper_sum",
    "g_bounds_report",
    "greedy_cover_free",
    "max_cover_free_size",
]

EXACT_SEARCH_CAP = 8


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 2_000_000
    time_limit: Optional[float] = None


@dataclass
class SearchResult:
    n: int
    r: int
    best_size: int
    witness: FamilyOfSets
    exact: bool
    nodes_explored: int
    time_budget_hit: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "r": self.r,
                "best_size": self.best_size,
                "witness": [list(_bits(m)) for m in self.witness.members],
                "exact": self.exact,
                "nodes_explored": self.nodes_explored,
                "time_budget_hit": self.time_budget_hit,
            }
        )


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def max_cover_free_size(
    n: int,
    r: int,
    budget: Optional[SearchBudget] = None,
    symmetry_break: bool = True,
) -> SearchResult:
    """Branch-and-bound for the maximum r-cover-free family size.

    exact=True only when the search ran to completion; a budget stop returns
    the best family found so far with exact=False.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if not 0 <= n <= EXACT_SEARCH_CAP:
        raise ValueError(f"exact search is guarded to n <= {EXACT_SEARCH_CAP}")
    budget = budget or SearchBudget()
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit

    best_size = 1
    best_members: tuple[int, ...] = (0,)
    nodes = 0
    aborted = False
    time_hit = False

    all_masks = list(range(1, 1 << n))
    if symmetry_break:
        first_choices = [(1 << k) - 1 for k in range(1, n + 1)]
    else:
        first_choices = all_masks

    def out_of_budget() -> bool:
        nonlocal aborted, time_hit
        if nodes >= budget.max_nodes:
            aborted = True
            return True
        if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
            aborted = time_hit = True
            return True
        return False

    def recurse(family: list[int], cands: list[int], depth: int) -> None:
        nonlocal best_size, best_members, nodes
        if len(family) > best_size:
            best_size = len(family)
            best_members = tuple(family)
        for idx, cand in enumerate(cands):
            if aborted or len(family) + (len(cands) - idx) <= best_size:
                return
            if depth == 1 and symmetry_break and not _canonical_second(family[0], cand):
                continue
            nodes += 1
            if out_of_budget():
                return
            family.append(cand)
            child = [
                m
                for m in cands[idx + 1 :]
                if kernels.cover_free_insert_ok(family, m, r)
            ]
            recurse(family, child, depth + 1)
            family.pop()

    for first in first_choices:
        if aborted:
            break
        floor = first.bit_count() if symmetry_break else 0
        cands = [
            m
            for m in all_masks
            if m > first
            and m.bit_count() >= floor
            and kernels.cover_free_insert_ok([first], m, r)
        ]
        recurse([first], cands, 1)

    witness = FamilyOfSets(n, best_members)
    if not kernels.is_cover_free(witness.members, r):
        raise AssertionError("search produced an invalid witness")
    return SearchResult(
        n=n,
        r=r,
        best_size=best_size,
        witness=witness,
        exact=not aborted,
        nodes_explored=nodes,
        time_budget_hit=time_hit,
    )


def _canonical_second(first: int, cand: int) -> bool:
    """Second member must be a prefix inside and outside the first's block."""
    k = first.bit_count()
    inside = cand & first
    outside = cand >> k
    return (inside & (inside + 1)) == 0 and (outside & (outside + 1)) == 0


def greedy_cover_free(n: int, r: int, seed: int) -> FamilyOfSets:
    """Seed-shuffled greedy insertion; always a valid r-cover-free family."""
    if r < 1:
        raise ValueError("r must be >= 1")
    rng = Xoshiro256StarStar(seed)
    masks = list(range(1, 1 << n))
    for i in range(len(masks) - 1, 0, -1):
        j = rng.randbelow(i + 1)
        masks[i], masks[j] = masks[j], masks[i]
    members: list[int] = []
    for m in masks:
        if kernels.cover_free_insert_ok(members, m, r):
            members.append(m)
    if not members:
        members = [0]
    return FamilyOfSets(n, tuple(members))


# -- size bounds ----------------------------------------------------------------


def eq3_upper_sum(n: int, r: int) -> Fraction:
    """Exact value of the summation upper bound on the maximum family size:
    sum over k of C(n, ceil(k/r)) / C(k-1, ceil(k/r)-1)."""
    total = Fraction(0)
    for k in range(1, n + 1):
        j = -(-k // r)  # ceil(k/r)
        total += Fraction(binom(n, j), binom(k - 1, j - 1))
    return total


def best_ratio_ell(n: int, r: int) -> tuple[int, Fraction]:
    """Maximizer of C(n, ell+1)/C(r*ell, ell) over integers 0 <= ell < n/r."""
    best_ell, best_val = 0, Fraction(binom(n, 1), 1)
    for ell in range(1, -(-n // r)):
        val = Fraction(binom(n, ell + 1), binom(r * ell, ell))
        if val > best_val:
            best_ell, best_val = ell, val
    return best_ell, best_val


@dataclass
class GBoundsReport:
    n: int
    r: int
    g_value: Optional[int]
    entries: list[BoundReport] = field(default_factory=list)

    def entry(self, name: str) -> BoundReport:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "r": self.r,
                "g_value": self.g_value,
                "entries": [e.to_json() for e in self.entries],
            },
            indent=2,
        )


def g_bounds_report(
    n: int, r: int, g_value: Optional[int] = None, digits: int = 60
) -> GBoundsReport:
    """Evaluate the applicable size bounds at (n, r).

    Upper bounds are checked against g_value when supplied.  The exponential
    envelopes (1.134**n and (5/4)**n at r=2, and r**(8n/r**2)) are proven
    only asymptotically, so a violation at small n is annotated as not
    applicable rather than treated as a contradiction; the summation bound
    holds for every n and is asserted whenever g_value is known.  Lower
    bounds are reported as values only, never asserted.
    """
    report = GBoundsReport(n=n, r=r, g_value=g_value)
    gq = Quantity.exact_value(g_value) if g_value is not None else None

    if r == 1:
        sperner = middle_binomial(n)
        verdict = Verdict.HOLDS if (g_value is None or g_value == sperner) else Verdict.FAILS
        report.entries.append(
            BoundReport(
                "sperner-equality",
                {"n": n},
                gq or Quantity.exact_value(sperner),
                Quantity.exact_value(sperner),
                verdict,
                digits,
                relation="==",
            )
        )
        return report

    sum_bound = eq3_upper_sum(n, r)
    if gq is not None:
        entry = compare_report(
            "sum-upper-bound", {"n": n, "r": r}, gq,
            Quantity.exact_value(sum_bound), digits, strict=False,
        )
    else:
        entry = BoundReport(
            "sum-upper-bound", {"n": n, "r": r},
            Quantity.exact_value(0), Quantity.exact_value(sum_bound),
            Verdict.HOLDS, digits, relation="value",
            note="upper bound value only (no g supplied)",
        )
    report.entries.append(entry)

    ell_star, ratio = best_ratio_ell(n, r)
    rell_value = n * ratio
    note = f"maximizing ell = {ell_star}"
    if gq is not None:
        entry = compare_report(
            "n-times-ratio-upper-bound", {"n": n, "r": r, "ell": ell_star},
            gq, Quantity.exact_value(rell_value), digits, strict=False, note=note,
        )
    else:
        entry = BoundReport(
            "n-times-ratio-upper-bound", {"n": n, "r": r, "ell": ell_star},
            Quantity.exact_value(0), Quantity.exact_value(rell_value),
            Verdict.HOLDS, digits, relation="value", note=note,
        )
    report.entries.append(entry)

    lower = Fraction(1 + Fraction(1, 4 * r * r)) ** n
    report.entries.append(
        BoundReport(
            "growth-lower-bound", {"n": n, "r": r},
            Quantity.exact_value(lower), gq or Quantity.exact_value(0),
            Verdict.HOLDS, digits, relation="value",
            note="asymptotic lower bound (1 + 1/(4r^2))^n, reported only",
        )
    )

    if r == 2:
        report.entries.append(
            BoundReport(
                "r2-lower-envelope", {"n": n},
                Quantity.exact_value(Fraction(1134, 1000) ** n),
                gq or Quantity.exact_value(0),
                Verdict.HOLDS, digits, relation="value",
                note="asymptotic lower envelope 1.134^n, reported only",
            )
        )
        upper2 = Fraction(5, 4) ** n
        if gq is not None:
            entry = compare_report(
                "r2-upper-envelope", {"n": n}, gq,
                Quantity.exact_value(upper2), digits, strict=True,
            )
            if entry.verdict is Verdict.FAILS:
                entry.note = "asymptotic envelope (5/4)^n not applicable at this n"
        else:
            entry = BoundReport(
                "r2-upper-envelope", {"n": n},
                Quantity.exact_value(0), Quantity.exact_value(upper2),
                Verdict.HOLDS, digits, relation="value",
                note="upper envelope value only",
            )
        report.entries.append(entry)

    large_r = iexp(Interval.point(Fraction(8 * n, r * r)) * ilog(Interval.point(r), digits), digits)
    if gq is not None:
        entry = compare_report(
            "large-r-upper-bound", {"n": n, "r": r}, gq,
            Quantity.certified(large_r), digits, strict=False,
        )
        if entry.verdict is Verdict.FAILS:
            entry.note = "bound proven for large n only; not applicable here"
    else:
        entry = BoundReport(
            "large-r-upper-bound", {"n": n, "r": r},
            Quantity.exact_value(0), Quantity.certified(large_r),
            Verdict.HOLDS, digits, relation="value",
            note="upper bound value only (large n)",
        )
    report.entries.append(entry)
    return report
