"""Coverage probabilities: tau_r(p) = Pr(S0 inside S1 u ... u Sr), exactly.

Four independent routes to the same quantity:

* `tau_naive`     -- direct enumeration of all (r+1)-tuples of support sets.
* `tau_exact`     -- subset-lattice route: with Q the subset-sum transform of
                     p, the union of r independent draws has distribution
                     mobius(Q**r), and tau is its inner product with Q.
                     O(2**n (n + r)) exact big-integer operations.
* `tau_layer_exact` -- for the uniform distribution on an ell-layer only:
                     convolve the union-size chain (hypergeometric steps) and
                     average C(m, ell)/C(n, ell) over the union size m.  No
                     2**n structure, feasible for n in the hundreds.
* `tau_cf_closed_form` -- when the support is r-cover-free, coverage happens
                     only via repeats: 1 - sum p(F)(1-p(F))**r.

A seeded Monte Carlo estimator with Wilson score intervals covers parameter
ranges beyond the exact routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Optional

from .backend import kernels
from .combinatorics import binom
from .distributions import FamilyOfSets, SubsetDistribution, is_cover_free, support
from .rng import ALGORITHM, spawn_seed

__all__ = [
    "MonteCarloResult",
    "NAIVE_BUDGET_BITS",
    "TauBudgetError",
    "SupportNotCoverFreeError",
    "TauResult",
    "UnionSizeDistribution",
    "tau_cf_closed_form",
    "tau_exact",
    "tau_layer_exact",
    "tau_monte_carlo",
    "tau_naive",
    "union_size_distribution",
    "wilson_interval",
]

NAIVE_BUDGET_BITS = 24
MC_CHUNK = 1 << 16


class TauBudgetError(RuntimeError):
    """Raised when the naive enumeration guard 2**(n(r+1)) <= 2**24 trips."""


class SupportNotCoverFreeError(ValueError):
    """Closed-form route demands an r-cover-free support."""


@dataclass(frozen=True)
class TauResult:
    value: Fraction
    method: str
    n: int
    r: int
    distribution: str

    def __post_init__(self) -> None:
        if not 0 <= self.value <= 1:
            raise ValueError(f"tau out of [0,1]: {self.value}")

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class UnionSizeDistribution:
    """Exact distribution of |S1 u ... u Sr| for iid uniform ell-subsets."""

    n: int
    ell: int
    r: int
    prob: dict[int, Fraction]

    def tail_above(self, threshold: int) -> Fraction:
        """Pr(|union| > threshold)."""
        return sum((q for m, q in self.prob.items() if m > threshold), Fraction(0))


def union_size_distribution(n: int, ell: int, r: int) -> UnionSizeDistribution:
    """Convolve r-1 hypergeometric growth steps over the union cardinality.

    Conditioned on the current union having m elements, a fresh ell-subset
    adds h new ones with probability C(n-m, h) C(m, ell-h) / C(n, ell).
    """
    if not 0 <= ell <= n:
        raise ValueError("need 0 <= ell <= n")
    if r < 1:
        raise ValueError("need r >= 1")
    denom = binom(n, ell)
    probs: dict[int, Fraction] = {ell: Fraction(1)}
    for _ in range(r - 1):
        nxt: dict[int, Fraction] = {}
        for m, q in probs.items():
            for h in range(max(0, ell - m), min(ell, n - m) + 1):
                weight = Fraction(binom(n - m, h) * binom(m, ell - h), denom)
                key = m + h
                nxt[key] = nxt.get(key, Fraction(0)) + q * weight
        probs = nxt
    total = sum(probs.values())
    assert total == 1, f"union-size masses sum to {total}"
    return UnionSizeDistribution(n, ell, r, probs)


def tau_naive(p: SubsetDistribution, r: int) -> TauResult:
    """Reference enumeration over all (r+1)-tuples from the support."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if p.n * (r + 1) > NAIVE_BUDGET_BITS:
        raise TauBudgetError(
            f"naive enumeration needs 2**{p.n * (r + 1)} tuples, over the 2**{NAIVE_BUDGET_BITS} guard"
        )
    supp = [(m, q) for m, q in enumerate(p.mass.values) if q]
    total = Fraction(0)
    for a0, q0 in supp:
        total += q0 * _cover_probability(supp, a0, r)
    return TauResult(total, "NAIVE", p.n, r, p.descriptor)


def _cover_probability(supp, target: int, r: int) -> Fraction:
    """Pr(target inside union of r independent draws), by direct recursion."""
    if r == 0:
        return Fraction(1) if target == 0 else Fraction(0)
    acc = Fraction(0)
    for m, q in supp:
        acc += q * _cover_probability(supp, target & ~m, r - 1)
    return acc


def tau_exact(p: SubsetDistribution, r: int) -> TauResult:
    """Lattice-transform route, exact over a common integer denominator."""
    if r < 1:
        raise ValueError("r must be >= 1")
    n = p.n
    common = reduce(math.lcm, (q.denominator for q in p.mass.values), 1)
    weights = [int(q * common) for q in p.mass.values]
    q_int = list(weights)
    kernels.zeta_inplace(q_int, n)  # q_int[B] = common * Pr(S inside B)
    if r == 1:
        num = kernels.dot(weights, q_int)
        return TauResult(Fraction(num, common * common), "TRANSFORM", n, r, p.descriptor)
    powered = [v**r for v in q_int]
    kernels.mobius_inplace(powered, n)  # common**r * Pr(union == B)
    num = kernels.dot(powered, q_int)
    return TauResult(Fraction(num, common ** (r + 1)), "TRANSFORM", n, r, p.descriptor)


def tau_layer_exact(n: int, ell: int, r: int) -> TauResult:
    """Exact tau for the uniform ell-layer via the union-size chain."""
    dist = union_size_distribution(n, ell, r)
    denom = binom(n, ell)
    value = sum(
        (q * Fraction(binom(m, ell), denom) for m, q in dist.prob.items()),
        Fraction(0),
    )
    return TauResult(value, "LAYER", n, r, f"layer(n={n},l={ell})")


def tau_cf_closed_form(p: SubsetDistribution, r: int) -> TauResult:
    """1 - sum p(F)(1-p(F))**r, valid exactly when the support is r-cover-free."""
    if r < 1:
        raise ValueError("r must be >= 1")
    supp = support(p)
    if not is_cover_free(supp, r):
        raise SupportNotCoverFreeError(
            f"support of {p.descriptor} is not {r}-cover-free"
        )
    miss = sum((p[m] * (1 - p[m]) ** r for m in supp), Fraction(0))
    return TauResult(1 - miss, "CLOSED_FORM_CF", p.n, r, p.descriptor)


# -- Monte Carlo ---------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    ci95: tuple[float, float]
    samples: int
    hits: int
    seed: int
    algorithm: str = ALGORITHM

    def wilson(self, z: float) -> tuple[float, float]:
        return wilson_interval(self.hits, self.samples, z)


def wilson_interval(hits: int, samples: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    phat = hits / samples
    z2 = z * z
    denom = 1.0 + z2 / samples
    center = (phat + z2 / (2 * samples)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / samples + z2 / (4 * samples * samples))
    return (max(0.0, center - half), min(1.0, center + half))


def tau_monte_carlo(
    r: int,
    samples: int,
    seed: int,
    n: Optional[int] = None,
    ell: Optional[int] = None,
    p: Optional[SubsetDistribution] = None,
) -> MonteCarloResult:
    """Simulate coverage for a layer (n, ell) or a general distribution p.

    Deterministic per seed: samples are processed in fixed chunks, each on a
    child stream derived from the seed, so chunks could run in parallel and
    merge to the same totals.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if r < 1:
        raise ValueError("r must be >= 1")
    if (p is None) == (n is None or ell is None):
        raise ValueError("specify either a layer (n, ell) or a distribution p")
    hits = 0
    if p is None:
        assert n is not None and ell is not None
        if not 0 <= ell <= n:
            raise ValueError("need 0 <= ell <= n")
        done = 0
        chunk_index = 0
        while done < samples:
            count = min(MC_CHUNK, samples - done)
            hits += kernels.mc_layer_hits(n, ell, r, count, spawn_seed(seed, chunk_index))
            done += count
            chunk_index += 1
    else:
        hits = _mc_general_hits(p, r, samples, seed)
    return MonteCarloResult(
        estimate=hits / samples,
        ci95=wilson_interval(hits, samples),
        samples=samples,
        hits=hits,
        seed=seed,
    )


def _mc_general_hits(p: SubsetDistribution, r: int, samples: int, seed: int) -> int:
    """Categorical sampling over the support via exact integer cumulative weights."""
    import bisect

    from .rng import Xoshiro256StarStar

    common = reduce(math.lcm, (q.denominator for q in p.mass.values), 1)
    masks = []
    cumulative = []
    acc = 0
    for m, q in enumerate(p.mass.values):
        if q:
            acc += int(q * common)
            masks.append(m)
            cumulative.append(acc)
    hits = 0
    done = 0
    chunk_index = 0
    while done < samples:
        count = min(MC_CHUNK, samples - done)
        rng = Xoshiro256StarStar(spawn_seed(seed, chunk_index))
        for _ in range(count):
            target = masks[bisect.bisect_right(cumulative, rng.randbelow(acc))]
            union = 0
            for _ in range(r):
                union |= masks[bisect.bisect_right(cumulative, rng.randbelow(acc))]
            if target & ~union == 0:
                hits += 1
        done += count
        chunk_index += 1
    return hits
