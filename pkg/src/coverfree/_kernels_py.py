"""Pure-Python kernels: lattice transforms, layer Monte Carlo, cover checks.

This module is the reference implementation of the hot loops.  A compiled
Cython twin (`coverfree._kernels`) provides the same functions with the same
bit-for-bit behavior; `coverfree.backend` picks one at import time.

Transform kernels mutate a dense length-2**n list in place and work for any
element type supporting + and - (exact ints, Fractions, floats).
"""

from __future__ import annotations

BACKEND = "python"


def zeta_inplace(vals: list, n: int) -> None:
    """Subset sums: vals[B] <- sum of vals[A] over A a submask of B."""
    size = 1 << n
    for i in range(n):
        bit = 1 << i
        for base in range(0, size, bit << 1):
            for b in range(base, base + bit):
                vals[b + bit] += vals[b]


def mobius_inplace(vals: list, n: int) -> None:
    """Inverse of `zeta_inplace` (inclusion-exclusion over submasks)."""
    size = 1 << n
    for i in range(n):
        bit = 1 << i
        for base in range(0, size, bit << 1):
            for b in range(base, base + bit):
                vals[b + bit] -= vals[b]


def superset_zeta_inplace(vals: list, n: int) -> None:
    """Superset sums: vals[A] <- sum of vals[B] over B a supermask of A."""
    size = 1 << n
    for i in range(n):
        bit = 1 << i
        for base in range(0, size, bit << 1):
            for b in range(base, base + bit):
                vals[b] += vals[b + bit]


def superset_mobius_inplace(vals: list, n: int) -> None:
    """Inverse of `superset_zeta_inplace`."""
    size = 1 << n
    for i in range(n):
        bit = 1 << i
        for base in range(0, size, bit << 1):
            for b in range(base, base + bit):
                vals[b] -= vals[b + bit]


def dot(a: list, b: list):
    """Sum of pairwise products (exact for int/Fraction inputs)."""
    total = 0
    for x, y in zip(a, b):
        if x and y:
            total += x * y
    return total


# -- Monte Carlo layer sampling ----------------------------------------------

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mc_layer_hits(n: int, ell: int, r: int, samples: int, seed: int) -> int:
    """Count coverage hits among `samples` draws of r+1 uniform ell-subsets.

    One xoshiro256** stream per call; draw order per sample is S0 first,
    then the r covering sets.  Subsets are drawn by partial Fisher-Yates
    over a persistent permutation array.
    """
    s0_, s1_, s2_, s3_ = _splitmix4(seed)
    perm = list(range(n))
    hits = 0
    for _ in range(samples):
        target = 0
        union = 0
        for slot in range(r + 1):
            mask = 0
            for i in range(ell):
                # inline bounded draw: j uniform in [i, n)
                bound = n - i
                if bound > 1:
                    threshold = ((1 << 64) - bound) % bound
                    while True:
                        # inline xoshiro256** step
                        x = (s1_ * 5) & _M64
                        res = ((((x << 7) | (x >> 57)) & _M64) * 9) & _M64
                        t = (s1_ << 17) & _M64
                        s2_ ^= s0_
                        s3_ ^= s1_
                        s1_ ^= s2_
                        s0_ ^= s3_
                        s2_ ^= t
                        s3_ = ((s3_ << 45) | (s3_ >> 19)) & _M64
                        if res >= threshold:
                            break
                    j = i + res % bound
                else:
                    j = i
                perm[i], perm[j] = perm[j], perm[i]
                mask |= 1 << perm[i]
            if slot == 0:
                target = mask
            else:
                union |= mask
        if target & ~union == 0:
            hits += 1
    return hits


def _splitmix4(seed: int) -> tuple[int, int, int, int]:
    out = []
    state = seed & _M64
    for _ in range(4):
        state = (state + _GOLDEN) & _M64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        out.append(z ^ (z >> 31))
    return out[0], out[1], out[2], out[3]


# -- cover-free feasibility ----------------------------------------------------


def covers_any(members, target: int, k: int) -> bool:
    """True iff target is a submask of the union of 1..k distinct members."""
    if k <= 0:
        return False
    if target == 0:
        return len(members) > 0
    rel = sorted(
        {m & target for m in members if m & target},
        key=lambda m: (-m.bit_count(), m),
    )
    if not rel:
        return False
    suffix = [0] * (len(rel) + 1)
    for i in range(len(rel) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | rel[i]
    if suffix[0] != target:
        return False
    return _cover_dfs(rel, suffix, target, 0, 0, k)


def _cover_dfs(rel, suffix, target: int, i: int, acc: int, budget: int) -> bool:
    if acc == target:
        return True
    if budget == 0 or i == len(rel):
        return False
    for j in range(i, len(rel)):
        if acc | suffix[j] != target:
            return False
        new = acc | rel[j]
        if new == acc:
            continue
        if _cover_dfs(rel, suffix, target, j + 1, new, budget - 1):
            return True
    return False


def cover_free_insert_ok(members, cand: int, r: int) -> bool:
    """Whether adding `cand` to an r-cover-free family keeps it r-cover-free.

    Assumes `members` is already r-cover-free and does not contain `cand`;
    any new violation must involve the candidate.
    """
    if covers_any(members, cand, r):
        return False
    for idx, a0 in enumerate(members):
        residue = a0 & ~cand
        if residue == 0:
            return False  # a0 is a submask of cand
        if r > 1:
            others = members[:idx] + members[idx + 1 :]
            if covers_any(others, residue, r - 1):
                return False
    return True


def is_cover_free(members, r: int) -> bool:
    """Full check of the r-cover-free property for a distinct-mask family."""
    members = list(members)
    for i in range(1, len(members)):
        if not cover_free_insert_ok(members[:i], members[i], r):
            return False
    return True
