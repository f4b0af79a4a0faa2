"""Minimizing coverage probability over the probability simplex.

Multi-start projected gradient descent on the 2**n-simplex.  The coverage
probability tau_r(p) extends to a degree-(r+1) polynomial on R^(2**n); its
gradient is computable with subset/superset lattice transforms:

    tau_r(v) = sum_A Q(A)**r * M(A),      Q = zeta(v), M = superset_mobius(Q)

    d tau_r / d v_C = r * sum_{A >= C} Q(A)**(r-1) M(A)
                      + sum_{A : A u C = full} (-1)^(n-|A|) Q(A)**r

The float loop uses numpy transforms; candidate minima are re-evaluated
exactly (big rationals) before being reported, and the finite-difference
`gradient_check` validates the gradient formula in exact arithmetic.

The optimizer never claims global optimality: at r = 1 the known lower bound
1/C(n, floor(n/2)) acts as an external certificate; for r >= 2 results are
"best found".
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .backend import kernels
from .combinatorics import LatticeVector, middle_binomial
from .distributions import FamilyOfSets, SubsetDistribution, masks_of_size, support
from .rng import Xoshiro256StarStar, spawn_seed
from .tau import tau_exact

__all__ = [
    "EqualityDiagnostics",
    "GradientCheckReport",
    "LayerSweep",
    "LayerSweepRow",
    "OptimizerResult",
    "equality_diagnostics",
    "gradient_check",
    "layer_sweep",
    "meets_every_maximal_chain",
    "minimize_tau_simplex",
    "project_simplex",
    "project_simplex_exact",
    "tau_polynomial_exact",
    "tau_gradient_exact",
]


# -- float lattice transforms ---------------------------------------------------


def _zeta_f(v: np.ndarray, n: int) -> np.ndarray:
    v = v.copy()
    for i in range(n):
        w = v.reshape(-1, 2, 1 << i)
        w[:, 1, :] += w[:, 0, :]
    return v


def _mobius_f(v: np.ndarray, n: int) -> np.ndarray:
    v = v.copy()
    for i in range(n):
        w = v.reshape(-1, 2, 1 << i)
        w[:, 1, :] -= w[:, 0, :]
    return v


def _superset_zeta_f(v: np.ndarray, n: int) -> np.ndarray:
    v = v.copy()
    for i in range(n):
        w = v.reshape(-1, 2, 1 << i)
        w[:, 0, :] += w[:, 1, :]
    return v


def _superset_mobius_f(v: np.ndarray, n: int) -> np.ndarray:
    v = v.copy()
    for i in range(n):
        w = v.reshape(-1, 2, 1 << i)
        w[:, 0, :] -= w[:, 1, :]
    return v


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def _popcounts(n: int) -> np.ndarray:
    arr = _POPCOUNT_CACHE.get(n)
    if arr is None:
        arr = np.array([m.bit_count() for m in range(1 << n)], dtype=np.int64)
        _POPCOUNT_CACHE[n] = arr
    return arr


def tau_polynomial_float(v: np.ndarray, r: int, n: int) -> float:
    q = _zeta_f(v, n)
    if r == 1:
        return float(v @ q)
    w = _mobius_f(q**r, n)
    return float(w @ q)


def tau_gradient_float(v: np.ndarray, r: int, n: int) -> np.ndarray:
    q = _zeta_f(v, n)
    m = _superset_mobius_f(q, n)
    term1 = r * _superset_zeta_f(q ** (r - 1) * m, n)
    signs = np.where((_popcounts(n) - n) % 2 == 0, 1.0, -1.0)
    g = _superset_zeta_f(signs * q**r, n)
    return term1 + g[::-1]


# -- exact counterparts (used by gradient_check and for final certification) ----


def tau_polynomial_exact(values: list[Fraction], r: int, n: int) -> Fraction:
    """Multilinear-polynomial extension of tau to arbitrary vectors, exact."""
    q = list(values)
    kernels.zeta_inplace(q, n)
    if r == 1:
        return Fraction(kernels.dot(values, q))
    w = [x**r for x in q]
    kernels.mobius_inplace(w, n)
    return Fraction(kernels.dot(w, q))


def tau_gradient_exact(values: list[Fraction], r: int, n: int) -> list[Fraction]:
    size = 1 << n
    q = list(values)
    kernels.zeta_inplace(q, n)
    m = list(q)
    kernels.superset_mobius_inplace(m, n)
    term1 = [r * q[a] ** (r - 1) * m[a] for a in range(size)]
    kernels.superset_zeta_inplace(term1, n)
    signed = [(q[a] ** r if (n - a.bit_count()) % 2 == 0 else -(q[a] ** r)) for a in range(size)]
    kernels.superset_zeta_inplace(signed, n)
    full = size - 1
    return [term1[c] + signed[full ^ c] for c in range(size)]


# -- simplex projection ----------------------------------------------------------


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    theta = css[cond][-1] / rho
    return np.maximum(v - theta, 0.0)


def project_simplex_exact(v: list[Fraction]) -> list[Fraction]:
    """Exact-rational projection; oracle for the float version."""
    u = sorted((Fraction(x) for x in v), reverse=True)
    css = Fraction(0)
    theta = None
    running = Fraction(0)
    for j, uj in enumerate(u, start=1):
        running += uj
        candidate = (running - 1) / j
        if uj - candidate > 0:
            theta = candidate
    assert theta is not None
    return [max(Fraction(x) - theta, Fraction(0)) for x in v]


# -- optimizer -------------------------------------------------------------------


@dataclass
class OptimizerResult:
    best_p: SubsetDistribution
    best_value: float
    best_value_exact: Fraction
    iterations: int
    restarts: int
    converged: bool
    gradient_norm_at_exit: float
    n: int = 0
    r: int = 0

    def __post_init__(self) -> None:
        recomputed = tau_exact(self.best_p, self.r).value
        if recomputed != self.best_value_exact:
            raise AssertionError("exact re-evaluation mismatch")


def _random_simplex_point(size: int, rng: Xoshiro256StarStar) -> np.ndarray:
    draws = np.array([-np.log(1.0 - rng.random()) for _ in range(size)])
    return draws / draws.sum()


def _to_exact_distribution(v: np.ndarray, n: int, descriptor: str) -> SubsetDistribution:
    """Exact rational distribution from a float iterate (renormalized exactly)."""
    fracs = [Fraction(float(x)) if x > 0 else Fraction(0) for x in v]
    total = sum(fracs)
    fracs = [x / total for x in fracs]
    return SubsetDistribution(n, LatticeVector(n, fracs), descriptor=descriptor)


def minimize_tau_simplex(
    n: int,
    r: int,
    restarts: int = 20,
    max_iters: int = 4000,
    tol: float = 1e-12,
    seed: int = 0,
    initial: Optional[SubsetDistribution] = None,
    patience: int = 50,
    on_iterate: Optional[Callable[[np.ndarray, float], None]] = None,
) -> OptimizerResult:
    """Multi-start projected gradient descent for min tau_r over distributions.

    Restart 0 starts at the barycenter (or at `initial` when supplied); the
    remaining restarts use seeded random interior points.  Each restart runs
    projected-gradient steps with a backtracking line search (exact line
    search for the quadratic r = 1 case) and stops after `patience`
    consecutive improvements below `tol`.  The best candidate across restarts
    is re-evaluated in exact arithmetic.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    size = 1 << n
    best_exact: Optional[Fraction] = None
    best_dist: Optional[SubsetDistribution] = None
    total_iters = 0
    any_converged = False
    exit_grad_norm = 0.0

    for restart in range(max(1, restarts)):
        if restart == 0:
            if initial is not None:
                x = np.array([float(q) for q in initial.mass.values])
            else:
                x = np.full(size, 1.0 / size)
        else:
            rng = Xoshiro256StarStar(spawn_seed(seed, restart))
            x = _random_simplex_point(size, rng)
        f = tau_polynomial_float(x, r, n)
        stall = 0
        converged = False
        grad_norm = float("inf")
        for _ in range(max_iters):
            total_iters += 1
            g = tau_gradient_float(x, r, n)
            y = project_simplex(x - g)
            d = y - x
            grad_norm = float(np.linalg.norm(d))
            slope = float(g @ d)
            if grad_norm < 1e-16 or slope >= 0:
                converged = True
                break
            if r == 1:
                curv = tau_polynomial_float(d, 1, n)
                t = 1.0 if curv <= 0 else min(1.0, -slope / (2.0 * curv))
                xt = x + t * d
                ft = tau_polynomial_float(xt, r, n)
                if ft > f:  # fall back to halving if rounding spoiled the model
                    t, ft = _backtrack(x, d, f, slope, r, n)
                    xt = x + t * d
            else:
                t, ft = _backtrack(x, d, f, slope, r, n)
                xt = x + t * d
            improvement = f - ft
            x, f = xt, ft
            if on_iterate is not None:
                on_iterate(x.copy(), f)
            if improvement < tol:
                stall += 1
                if stall >= patience:
                    converged = True
                    break
            else:
                stall = 0
        p_exact = _to_exact_distribution(x, n, f"optimizer(n={n},r={r},restart={restart})")
        value_exact = tau_exact(p_exact, r).value
        if best_exact is None or value_exact < best_exact:
            best_exact = value_exact
            best_dist = p_exact
            exit_grad_norm = grad_norm
        any_converged = any_converged or converged

    assert best_exact is not None and best_dist is not None
    return OptimizerResult(
        best_p=best_dist,
        best_value=float(best_exact),
        best_value_exact=best_exact,
        iterations=total_iters,
        restarts=max(1, restarts),
        converged=any_converged,
        gradient_norm_at_exit=exit_grad_norm,
        n=n,
        r=r,
    )


def _backtrack(x, d, f, slope, r, n, shrink=0.5, c1=1e-4, max_halvings=60):
    t = 1.0
    for _ in range(max_halvings):
        ft = tau_polynomial_float(x + t * d, r, n)
        if ft <= f + c1 * t * slope:
            return t, ft
        t *= shrink
    return 0.0, f


# -- gradient check ---------------------------------------------------------------


@dataclass
class GradientCheckReport:
    n: int
    r: int
    h: Fraction
    max_rel_error: float
    max_abs_error: float


def gradient_check(
    n: int, r: int, p: SubsetDistribution, h: Fraction = Fraction(1, 10**6)
) -> GradientCheckReport:
    """Central finite differences of the exact polynomial vs the gradient formula.

    All arithmetic is exact, so the only discrepancy is the genuine
    O(h**2) truncation term of the central difference (zero when r = 1).
    Requires an interior p (every mass positive).
    """
    if any(q <= 0 for q in p.mass.values):
        raise ValueError("gradient_check needs an interior distribution")
    values = list(p.mass.values)
    grad = tau_gradient_exact(values, r, n)
    max_rel = 0.0
    max_abs = 0.0
    for c in range(1 << n):
        bumped_up = list(values)
        bumped_up[c] += h
        bumped_dn = list(values)
        bumped_dn[c] -= h
        fd = (
            tau_polynomial_exact(bumped_up, r, n)
            - tau_polynomial_exact(bumped_dn, r, n)
        ) / (2 * h)
        err = abs(fd - grad[c])
        denom = max(abs(grad[c]), Fraction(1, 10**12))
        max_rel = max(max_rel, float(err / denom))
        max_abs = max(max_abs, float(err))
    return GradientCheckReport(n=n, r=r, h=h, max_rel_error=max_rel, max_abs_error=max_abs)


# -- layer sweep -------------------------------------------------------------------


@dataclass(frozen=True)
class LayerSweepRow:
    ell: int
    tau: Fraction
    in_window: bool


@dataclass
class LayerSweep:
    n: int
    r: int
    rows: list[LayerSweepRow] = field(default_factory=list)

    def argmin_global(self) -> LayerSweepRow:
        return min(self.rows, key=lambda row: (row.tau, row.ell))

    def argmin_window(self) -> Optional[LayerSweepRow]:
        inside = [row for row in self.rows if row.in_window]
        if not inside:
            return None
        return min(inside, key=lambda row: (row.tau, row.ell))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["n", "r", "ell", "tau_num", "tau_den", "tau_float", "in_window"])
        for row in self.rows:
            writer.writerow(
                [
                    self.n,
                    self.r,
                    row.ell,
                    row.tau.numerator,
                    row.tau.denominator,
                    f"{float(row.tau):.17g}",
                    int(row.in_window),
                ]
            )
        return buf.getvalue()


def layer_sweep(n: int, r: int) -> LayerSweep:
    """Exact tau_r for every layer, flagging the window n/(4r) < ell < n/r."""
    from .tau import tau_layer_exact

    if r < 1:
        raise ValueError("r must be >= 1")
    sweep = LayerSweep(n=n, r=r)
    for ell in range(n + 1):
        value = tau_layer_exact(n, ell, r).value
        in_window = (4 * r * ell > n) and (r * ell < n)
        sweep.rows.append(LayerSweepRow(ell=ell, tau=value, in_window=in_window))
    return sweep


# -- equality diagnostics ------------------------------------------------------------


def meets_every_maximal_chain(family: FamilyOfSets, n: int) -> bool:
    """True iff no maximal chain from {} to the full set avoids the family."""
    members = set(family.members)
    full = (1 << n) - 1
    reachable = [False] * (1 << n)
    reachable[0] = 0 not in members
    for ell in range(1, n + 1):
        for mask in masks_of_size(n, ell):
            if mask in members:
                continue
            m = mask
            while m:
                bit = m & -m
                if reachable[mask ^ bit]:
                    reachable[mask] = True
                    break
                m ^= bit
    return not reachable[full]


@dataclass
class EqualityDiagnostics:
    n: int
    tau1: Fraction
    target: Fraction
    equality: bool
    support: FamilyOfSets
    is_antichain: bool
    meets_every_chain: bool
    uniform_on_support: bool
    alpha: Optional[Fraction] = None


def equality_diagnostics(p: SubsetDistribution) -> EqualityDiagnostics:
    """Decide exactly whether tau_1(p) hits the antichain lower bound 1/C(n, n//2).

    Reports the structural facts behind the equality cases: whether the
    support is an antichain, whether it meets every maximal chain, whether
    the masses are uniform on it, and (n = 3 only) the one-parameter family
    with mass alpha on singletons and 1/3 - alpha on two-element sets.
    """
    n = p.n
    target = Fraction(1, middle_binomial(n))
    tau1 = tau_exact(p, 1).value
    supp = support(p)
    alpha: Optional[Fraction] = None
    if n == 3:
        singles = [p[m] for m in masks_of_size(3, 1)]
        doubles = [p[m] for m in masks_of_size(3, 2)]
        if (
            p[0] == 0
            and p[7] == 0
            and len(set(singles)) == 1
            and len(set(doubles)) == 1
            and singles[0] + doubles[0] == Fraction(1, 3)
        ):
            alpha = singles[0]
    return EqualityDiagnostics(
        n=n,
        tau1=tau1,
        target=target,
        equality=tau1 == target,
        support=supp,
        is_antichain=supp.is_antichain(),
        meets_every_chain=meets_every_maximal_chain(supp, n),
        uniform_on_support=len({p[m] for m in supp.members}) == 1,
        alpha=alpha,
    )
