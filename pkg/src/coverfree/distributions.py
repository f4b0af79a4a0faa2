"""Probability distributions on the subset lattice and families of sets.

Masses are exact Fractions; every constructor validates nonnegativity and
that the masses sum to exactly 1.  A family of sets is a list of distinct
bitmasks; the r-cover-free property (no member inside the union of up to r
other members) is decided by an exact pruned search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .backend import kernels
from .combinatorics import DENSE_CAP, LatticeVector, binom
from .rng import ALGORITHM, Xoshiro256StarStar

__all__ = [
    "FamilyOfSets",
    "SubsetDistribution",
    "is_cover_free",
    "make_layer_distribution",
    "mask_to_indices",
    "masks_of_size",
    "indices_to_mask",
    "random_distribution",
    "support",
]


def mask_to_indices(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def indices_to_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def masks_of_size(n: int, ell: int) -> list[int]:
    """All n-bit masks of popcount ell, ascending."""
    return [m for m in range(1 << n) if m.bit_count() == ell]


@dataclass
class SubsetDistribution:
    """Exact probability distribution on all subsets of an n-element set."""

    n: int
    mass: LatticeVector
    descriptor: str = "custom"

    def __post_init__(self) -> None:
        if self.mass.n != self.n:
            raise ValueError("mass vector dimension mismatch")
        total = Fraction(0)
        for q in self.mass.values:
            if q < 0:
                raise ValueError("negative probability mass")
            total += q
        if total != 1:
            raise ValueError(f"masses must sum to exactly 1, got {total}")

    def __getitem__(self, mask: int) -> Fraction:
        return self.mass[mask]

    @property
    def size(self) -> int:
        return 1 << self.n


def make_layer_distribution(n: int, ell: int) -> SubsetDistribution:
    """Uniform distribution on all ell-element subsets."""
    if not 0 <= ell <= n:
        raise ValueError(f"layer must satisfy 0 <= ell <= n, got ell={ell}, n={n}")
    if n > DENSE_CAP:
        raise ValueError(f"dense distributions capped at n <= {DENSE_CAP}")
    count = binom(n, ell)
    q = Fraction(1, count)
    values = [q if m.bit_count() == ell else Fraction(0) for m in range(1 << n)]
    return SubsetDistribution(n, LatticeVector(n, values), descriptor=f"layer(n={n},l={ell})")


def random_distribution(n: int, seed: int, max_weight: int = 1000) -> SubsetDistribution:
    """Seeded random distribution with exact rational masses.

    Each subset gets an integer weight uniform in [0, max_weight] from a
    xoshiro256** stream; weights are normalized exactly.  A draw where every
    weight is zero is rejected and redrawn, so the result is always valid.
    """
    if max_weight < 1:
        raise ValueError("max_weight must be >= 1")
    if n > DENSE_CAP:
        raise ValueError(f"dense distributions capped at n <= {DENSE_CAP}")
    rng = Xoshiro256StarStar(seed)
    size = 1 << n
    while True:
        weights = [rng.randbelow(max_weight + 1) for _ in range(size)]
        total = sum(weights)
        if total:
            break
    values = [Fraction(w, total) for w in weights]
    return SubsetDistribution(
        n,
        LatticeVector(n, values),
        descriptor=f"random(n={n},seed={seed},max_weight={max_weight},prng={ALGORITHM})",
    )


@dataclass
class FamilyOfSets:
    """Finite family of distinct subsets, stored as sorted bitmasks."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        members = tuple(self.members)
        if len(set(members)) != len(members):
            raise ValueError("family members must be distinct")
        for m in members:
            if not 0 <= m < (1 << self.n):
                raise ValueError(f"mask {m} out of range for n={self.n}")
        object.__setattr__(self, "members", tuple(sorted(members)))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def __iter__(self):
        return iter(self.members)

    # -- text format: one member per line, comma-separated 0-based indices.
    # '#' starts a comment, blank lines are ignored, and the empty set is
    # written as '-' (a blank line would be skipped by the reader).

    def to_text(self) -> str:
        lines = [f"# family n={self.n} size={len(self.members)}"]
        for m in self.members:
            lines.append(",".join(str(i) for i in mask_to_indices(m)) if m else "-")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str, n: int) -> "FamilyOfSets":
        members = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line == "-":
                members.append(0)
                continue
            members.append(indices_to_mask(int(tok) for tok in line.split(",")))
        return FamilyOfSets(n, tuple(members))

    def is_antichain(self) -> bool:
        """No member is a submask of another (exact pairwise test)."""
        ms = self.members
        for i, a in enumerate(ms):
            for b in ms[i + 1 :]:
                if a & ~b == 0 or b & ~a == 0:
                    return False
        return True


def support(p: SubsetDistribution) -> FamilyOfSets:
    """Masks with positive mass, ascending."""
    members = tuple(m for m, q in enumerate(p.mass.values) if q > 0)
    return FamilyOfSets(p.n, members)


def is_cover_free(family: FamilyOfSets | Sequence[int], r: int) -> bool:
    """Exact r-cover-free test: no member inside a union of <= r others.

    Worst case exponential in r; intended for desk-scale families.  The
    union search is pruned by relevance masks and suffix unions.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    members = tuple(family.members if isinstance(family, FamilyOfSets) else family)
    return kernels.is_cover_free(members, r)
