"""Certified evaluation of the analytic rate functions and tail inequalities.

The quantities here control how fast layer-distribution coverage
probabilities beat uniform cover-free distributions:

* lambda(a): maximizer of x -> P(x) / (P(x-a)^3 P(1-x) P(2a-x)) on
  (a, min(1, 2a)), where P(x) = x^x; a root of the quadratic
  (1-a) x^2 - (2-3a) a x - a^3.
* rho(a): the resulting exponential rate for two covering sets.
* theta_r, mu_r: rate constants (< 1) bounding the binomial ratio tails
  C(rl-t, l)/C(rl, l) and C(n-l, l-t) C(l, t)/C(n, l) in their windows.

Every inequality check produces a BoundReport whose HOLDS/FAILS verdict is
certified: exact sides are compared as big rationals, analytic sides are
enclosed by interval arithmetic, and inconclusive comparisons escalate the
working precision (60 -> 120 -> 240 digits) before giving up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .combinatorics import binom
from .families import best_ratio_ell
from .intervals import (
    Interval,
    cert_ge,
    cert_gt,
    cert_le,
    cert_lt,
    certify_with_escalation,
    default_digits,
    e_const,
    escalation_schedule,
    iexp,
    ilog,
    isqrt_iv,
    log_pi_fn,
)
from .reporting import BoundReport, Quantity, Verdict, compare_report
from .tau import tau_layer_exact, union_size_distribution

__all__ = [
    "AnalyticConstants",
    "CertificationError",
    "analytic_constants",
    "check_claim_infi",
    "check_claim_infi2",
    "check_lemma_H",
    "check_lemma_comp1",
    "check_lemma_comp2",
    "check_lemma_max_ell",
    "check_lemma_union",
    "check_prop2_chain",
    "check_prop_r100_chain",
    "check_prop_r101_boundary",
    "find_N_r",
    "lambda_fn",
    "log_rho",
    "mu_root",
    "rational_grid",
    "rho_fn",
]


class CertificationError(RuntimeError):
    """A certification stayed inconclusive at the precision cap."""


# -- rate functions ---------------------------------------------------------------


def _check_alpha(alpha: Fraction) -> Fraction:
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"need 0 < alpha < 1, got {alpha}")
    return alpha


def _discriminant_root(alpha: Fraction, digits: int) -> Interval:
    """sqrt(alpha^2 + 4 (1-alpha)^2)."""
    return isqrt_iv(alpha * alpha + 4 * (1 - alpha) ** 2, digits)


def lambda_fn(alpha: Fraction, digits: Optional[int] = None) -> Interval:
    """The maximizer lambda(a) = a (1 + 2(1-a) / (sqrt(a^2 + 4(1-a)^2) + a)).

    Certified to satisfy a < lambda(a) < min(1, 2a).
    """
    alpha = _check_alpha(alpha)
    digits = digits or default_digits()

    def attempt(d: int) -> Optional[Interval]:
        s = _discriminant_root(alpha, d)
        lam = alpha * (1 + 2 * (1 - alpha) / (s + alpha))
        upper = min(Fraction(1), 2 * alpha)
        if cert_gt(lam, alpha) and cert_lt(lam, upper):
            return lam
        return None

    lam, _ = certify_with_escalation(attempt, digits)
    if lam is None:
        raise CertificationError(f"could not certify window of lambda({alpha})")
    return lam


def mu_root(alpha: Fraction, digits: Optional[int] = None) -> Interval:
    """The other quadratic root, mu(a) = a (1 - (a + sqrt(...)) / (2(1-a))) < 0."""
    alpha = _check_alpha(alpha)
    digits = digits or default_digits()

    def attempt(d: int) -> Optional[Interval]:
        s = _discriminant_root(alpha, d)
        mu = alpha * (1 - (alpha + s) / (2 * (1 - alpha)))
        if cert_lt(mu, 0):
            return mu
        return None

    mu, _ = certify_with_escalation(attempt, digits)
    if mu is None:
        raise CertificationError(f"could not certify negativity of mu({alpha})")
    return mu


def log_rho(alpha: Fraction, digits: Optional[int] = None) -> Interval:
    """log of the two-cover rate function rho(a).

    rho(a) = (5/4) P(lambda) P(a)^2 P(1-a)^3
             / (P(lambda-a)^3 P(1-lambda) P(2a-lambda)),  P(x) = x^x.
    """
    alpha = _check_alpha(alpha)
    d = digits or default_digits()
    lam = lambda_fn(alpha, d)
    return (
        ilog(Fraction(5, 4), d)
        + log_pi_fn(lam, d)
        + 2 * log_pi_fn(alpha, d)
        + 3 * log_pi_fn(1 - alpha, d)
        - 3 * log_pi_fn(lam - alpha, d)
        - log_pi_fn(1 - lam, d)
        - log_pi_fn(2 * alpha - lam, d)
    )


def rho_fn(alpha: Fraction, digits: Optional[int] = None) -> Interval:
    d = digits or default_digits()
    return iexp(log_rho(alpha, d), d)


# -- rate constants ----------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticConstants:
    """Certified rate constants at a given r >= 2.

    gamma = r / (2 (16 r^2 + 1)), alpha = 1/(4r), beta = 1/(16 r^2 + 1);
    theta and mu are both certified < 1, and eta_candidate is
    max(theta^(1/4r), mu): any eta strictly between eta_candidate and 1
    witnesses the exponential separation.
    """

    r: int
    gamma: Fraction
    alpha: Fraction
    beta: Fraction
    log_theta: Interval
    log_mu: Interval
    theta: Interval
    mu: Interval
    eta_candidate: Interval
    digits: int


@lru_cache(maxsize=None)
def analytic_constants(r: int, digits: Optional[int] = None) -> AnalyticConstants:
    if r < 2:
        raise ValueError("rate constants are defined for r >= 2")
    digits = digits or default_digits()
    gamma = Fraction(r, 2 * (16 * r * r + 1))
    alpha = Fraction(1, 4 * r)
    beta = Fraction(1, 16 * r * r + 1)

    def attempt(d: int):
        log_theta = (
            log_pi_fn(r - gamma, d)
            + log_pi_fn(r - 1, d)
            - log_pi_fn(r - 1 - gamma, d)
            - log_pi_fn(r, d)
        )
        log_mu = (
            2 * (log_pi_fn(1 - alpha, d) + log_pi_fn(alpha, d))
            - log_pi_fn(1 - 2 * alpha + beta, d)
            - 2 * log_pi_fn(alpha - beta, d)
            - log_pi_fn(beta, d)
        )
        if cert_lt(log_theta, 0) and cert_lt(log_mu, 0):
            return log_theta, log_mu, d
        return None

    result, used = certify_with_escalation(attempt, digits)
    if result is None:
        raise CertificationError(f"theta/mu < 1 inconclusive for r={r} at <= {used} digits")
    log_theta, log_mu, d = result
    theta = iexp(log_theta, d)
    mu = iexp(log_mu, d)
    theta_quarter = iexp(log_theta / (4 * r), d)
    eta_candidate = Interval(
        max(theta_quarter.lo, mu.lo), max(theta_quarter.hi, mu.hi)
    )
    return AnalyticConstants(
        r=r,
        gamma=gamma,
        alpha=alpha,
        beta=beta,
        log_theta=log_theta,
        log_mu=log_mu,
        theta=theta,
        mu=mu,
        eta_candidate=eta_candidate,
        digits=d,
    )


# -- separation threshold -----------------------------------------------------------


def find_N_r(r: int, eta: Fraction, n_cap: int = 10**9) -> Optional[int]:
    """Smallest n with (5 mu^n + 2 theta^(n/4r)) 4 r n sqrt(n) < eta^n certified.

    Soundness of minimality: each term c n^(3/2) x^n (x < 1) of the left
    side over eta^n is strictly decreasing once n >= 3/(2 log(eta/x)); below
    an exclusion threshold the concave function log(c) + (3/2) log n -
    n log(eta/x) is certified positive at both ends, hence positive
    throughout, so the ratio exceeds 1 there.  Binary search covers the
    monotone tail and the returned n is therefore the global minimum.
    Returns None when no n <= n_cap qualifies.
    """
    consts = analytic_constants(r)
    eta = Fraction(eta)
    if not (cert_gt(Interval.point(eta), consts.eta_candidate) and eta < 1):
        raise ValueError(
            f"eta must lie in (eta_candidate, 1); candidate ~ {float(consts.eta_candidate):.10g}"
        )
    d0 = consts.digits
    log_eta = ilog(eta, d0)
    gap_mu = log_eta - consts.log_mu
    gap_theta = log_eta - consts.log_theta / (4 * r)
    if not (cert_gt(gap_mu, 0) and cert_gt(gap_theta, 0)):
        raise CertificationError("eta window gaps could not be certified positive")

    def h_below_one(n: int, d: int) -> Optional[bool]:
        log_eta_d = ilog(eta, d)
        lhs = (
            5 * iexp(n * consts.log_mu, d)
            + 2 * iexp(Fraction(n, 4 * r) * consts.log_theta, d)
        ) * (4 * r * n) * isqrt_iv(n, d)
        return cert_lt(lhs, iexp(n * log_eta_d, d))

    def h_cert(n: int) -> bool:
        res, used = certify_with_escalation(lambda d: h_below_one(n, d), d0)
        if res is None:
            raise CertificationError(f"ratio comparison inconclusive at n={n} ({used} digits)")
        return res

    # Exclusion zone: largest n0 where one concave lower bound is certified
    # positive at 1 and at n0 (hence on all of [1, n0]).
    def exclusion_bound(const: Fraction, gap: Interval) -> int:
        log_c = ilog(const, d0)

        def u_pos(n: int) -> Optional[bool]:
            val = log_c + Fraction(3, 2) * ilog(n, d0) - n * gap
            return cert_gt(val, 0)

        if not u_pos(1):
            return 0
        g = float(gap.hi)
        est = max(2.0, math.log(float(const)) / g)
        for _ in range(80):  # fixed point of n = (log c + 1.5 log n)/g
            est = (math.log(float(const)) + 1.5 * math.log(est)) / g
        n0 = max(1, int(est * (1 - 1e-9)))
        while n0 > 1 and not u_pos(n0):
            n0 = max(1, n0 * 2 // 3)
        return n0

    n_excl = max(
        exclusion_bound(Fraction(20 * r), gap_mu),
        exclusion_bound(Fraction(8 * r), gap_theta),
    )
    # monotone beyond 3/(2 min gap); the exclusion zone always reaches it
    n_mono = math.ceil(1.5 / float(min(gap_mu.lo, gap_theta.lo)))
    if n_excl < n_mono:
        raise CertificationError("exclusion zone fell short of the monotone threshold")

    lo = n_excl  # certified h(lo) >= 1
    if lo >= n_cap or not h_cert(n_cap):
        return None
    hi = n_cap
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if h_cert(mid):
            hi = mid
        else:
            lo = mid
    # forward spot checks on a geometric grid
    for i in range(1, 11):
        m = hi + math.ceil(hi * i / 4)
        if not h_cert(m):
            raise CertificationError(f"forward spot check failed at n={m}")
    return hi


# -- single-inequality checks --------------------------------------------------------


def check_prop_r101_boundary(r: int) -> BoundReport:
    """Sign of e^(-1/e) r^(8/r) - 1; crosses from above to below 1 at r = 101."""
    if r < 2:
        raise ValueError("need r >= 2")

    def attempt(d: int) -> Optional[BoundReport]:
        exponent = Fraction(8, r) * ilog(r, d) - 1 / e_const(d)
        value = iexp(exponent, d)
        report = compare_report(
            "threshold-boundary", {"r": r},
            Quantity.certified(value), Quantity.exact_value(1), d, strict=True,
        )
        return report if report.verdict is not Verdict.INCONCLUSIVE else None

    report, used = certify_with_escalation(attempt)
    if report is None:
        return BoundReport(
            "threshold-boundary", {"r": r},
            Quantity.exact_value(1), Quantity.exact_value(1),
            Verdict.INCONCLUSIVE, used,
            note="undecided at the precision cap",
        )
    return report


def check_lemma_max_ell(r: int, n: int) -> BoundReport:
    """Growth of C(n, l+1)/C(r l, l) below n/(4r), and argmax beyond it (exact)."""
    if r < 2:
        raise ValueError("need r >= 2")
    if n <= 52 * r:
        raise ValueError(f"need n > 52 r = {52 * r}, got {n}")
    worst: Optional[tuple[Fraction, Fraction]] = None
    holds = True
    top = n // (4 * r)  # every integer 0 <= ell <= n/(4r)
    for ell in range(top + 1):
        lhs = Fraction(binom(n, ell + 1), binom(r * ell, ell))
        rhs = Fraction(binom(n, ell + 2), binom(r * (ell + 1), ell + 1))
        if lhs >= rhs:
            holds = False
            worst = (lhs, rhs)
            break
        if worst is None or rhs - lhs < worst[1] - worst[0]:
            worst = (lhs, rhs)
    ell_star, _ = best_ratio_ell(n, r)
    argmax_beyond = Fraction(ell_star) > Fraction(n, 4 * r)
    verdict = Verdict.HOLDS if holds and argmax_beyond else Verdict.FAILS
    assert worst is not None
    return BoundReport(
        "layer-ratio-growth",
        {"r": r, "n": n, "argmax_ell": ell_star},
        Quantity.exact_value(worst[0]),
        Quantity.exact_value(worst[1]),
        verdict,
        0,
        note=f"strict growth for all ell <= {top}; argmax {ell_star} > n/4r = {float(Fraction(n, 4*r)):.6g}",
    )


def check_lemma_union(n: int, ell: int, t: int) -> BoundReport:
    """Union tail: Pr(|S1 u S2| > 2l - t) < t C(n-l, l-t) C(l, t)/C(n, l) (exact)."""
    if min(n, ell, t) < 1:
        raise ValueError("need positive n, ell, t")
    if 2 * ell > n:
        raise ValueError("need ell <= n/2")
    if t * n > ell * ell:
        raise ValueError("need t <= ell^2 / n")
    tail = union_size_distribution(n, ell, 2).tail_above(2 * ell - t)
    rhs = Fraction(t * binom(n - ell, ell - t) * binom(ell, t), binom(n, ell))
    return compare_report(
        "pair-union-tail", {"n": n, "ell": ell, "t": t},
        Quantity.exact_value(tail), Quantity.exact_value(rhs), 0, strict=True,
    )


def check_lemma_comp2(r: int, ell: int, t: int) -> BoundReport:
    """Binomial ratio tail: C(rl-t, l)/C(rl, l) < 2 sqrt(rl) theta_r^l."""
    if r < 2 or ell < 1 or t < 1:
        raise ValueError("need r >= 2 and positive ell, t")
    consts = analytic_constants(r)
    if not consts.gamma * ell <= t:
        raise ValueError(f"need t >= gamma ell = {float(consts.gamma * ell):.6g}")
    if not t < (r - 1) * ell:
        raise ValueError("need t < (r-1) ell")
    lhs = Fraction(binom(r * ell - t, ell), binom(r * ell, ell))

    def attempt(d: int) -> Optional[BoundReport]:
        rhs = 2 * isqrt_iv(r * ell, d) * iexp(ell * consts.log_theta, d)
        report = compare_report(
            "ratio-tail-theta", {"r": r, "ell": ell, "t": t},
            Quantity.exact_value(lhs), Quantity.certified(rhs), d, strict=True,
        )
        return report if report.verdict is not Verdict.INCONCLUSIVE else None

    report, used = certify_with_escalation(attempt, consts.digits)
    if report is None:
        raise CertificationError(f"ratio-tail-theta inconclusive at <= {used} digits")
    return report


def check_lemma_comp1(r: int, n: int, ell: int, t: int) -> BoundReport:
    """Hypergeometric kernel tail: C(n-l, l-t) C(l, t)/C(n, l) < 5(16r^2+1)/sqrt(n) mu_r^n."""
    if r < 2 or min(n, ell, t) < 1:
        raise ValueError("need r >= 2 and positive n, ell, t")
    consts = analytic_constants(r)
    if not Fraction(n, 4 * r) <= ell <= Fraction(n, r):
        raise ValueError("need n/(4r) <= ell <= n/r")
    m = 16 * r * r + 1
    if not Fraction(n, 2 * m) < t <= Fraction(n, m):
        raise ValueError("need n/(2(16r^2+1)) < t <= n/(16r^2+1)")
    lhs = Fraction(binom(n - ell, ell - t) * binom(ell, t), binom(n, ell))

    def attempt(d: int) -> Optional[BoundReport]:
        rhs = (5 * m) * iexp(n * consts.log_mu, d) / isqrt_iv(n, d)
        report = compare_report(
            "kernel-tail-mu", {"r": r, "n": n, "ell": ell, "t": t},
            Quantity.exact_value(lhs), Quantity.certified(rhs), d, strict=True,
        )
        return report if report.verdict is not Verdict.INCONCLUSIVE else None

    report, used = certify_with_escalation(attempt, consts.digits)
    if report is None:
        raise CertificationError(f"kernel-tail-mu inconclusive at <= {used} digits")
    return report


# -- monotonicity grids ---------------------------------------------------------------


def rational_grid(
    lo: Fraction,
    hi: Fraction,
    count: int = 128,
    include_lo: bool = False,
    include_hi: bool = False,
) -> list[Fraction]:
    """Deterministic rational grid, geometrically refined toward both ends."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    span = hi - lo
    geo = min(count // 4, 40)
    pts = {lo + span / 2**k for k in range(2, geo + 2)}
    pts |= {hi - span / 2**k for k in range(2, geo + 2)}
    fill = max(count - len(pts), 1)
    pts |= {lo + span * Fraction(j, fill + 1) for j in range(1, fill + 1)}
    pts = {x for x in pts if lo < x < hi}
    if include_lo:
        pts.add(lo)
    if include_hi:
        pts.add(hi)
    return sorted(pts)


def _grid_monotone_report(
    name: str,
    params: dict,
    log_values: list[tuple[Fraction, Interval]],
    derivative_signs: list[Optional[bool]],
    increasing: bool,
    digits: int,
    extra_note: str = "",
) -> Optional[BoundReport]:
    """Certify the pairwise order of consecutive grid values plus sign checks.

    Returns None when any single comparison stayed inconclusive (callers
    escalate the working precision and retry).
    """
    if any(s is None for s in derivative_signs):
        return None
    holds = True
    worst: Optional[tuple[Interval, Interval]] = None
    worst_margin: Optional[Fraction] = None
    for (_, v0), (_, v1) in zip(log_values, log_values[1:]):
        ok = cert_lt(v0, v1) if increasing else cert_gt(v0, v1)
        if ok is None:
            return None
        if not ok:
            holds = False
            worst = (v0, v1)
            break
        margin = (v1 - v0).lo if increasing else (v0 - v1).lo
        if worst_margin is None or margin < worst_margin:
            worst_margin = margin
            worst = (v0, v1)
    sign_ok = all(derivative_signs)
    verdict = Verdict.HOLDS if holds and sign_ok else Verdict.FAILS
    assert worst is not None
    lhs, rhs = (worst if increasing else (worst[1], worst[0]))
    note = (
        f"{len(log_values)} grid points; derivative sign certified at "
        f"{len(derivative_signs)} interior points"
    )
    if extra_note:
        note += "; " + extra_note
    return BoundReport(
        name, params, Quantity.certified(lhs), Quantity.certified(rhs),
        verdict, digits, note=note,
    )


def check_claim_infi(
    part: int,
    alpha: Optional[Fraction] = None,
    beta: Optional[Fraction] = None,
    grid_points: int = 128,
    digits: Optional[int] = None,
    x_lo: Fraction = Fraction(1, 10),
    x_hi: Fraction = Fraction(10),
) -> BoundReport:
    """Monotonicity of the three self-power ratio functions on grids.

    part 1: x -> P(x+1)/P(x), strictly increasing on (0, inf)
            (checked on [x_lo, x_hi]).
    part 2: x -> P(1-2a+x) P(a-x)^2 P(x), strictly decreasing on (0, a^2],
            for 0 < a < 1/2.
    part 3: x -> (P(1-x) P(x))^2 / (P(1-2x+b) P(x-b)^2), decreasing on
            [sqrt(b), (1+b)/2), for 0 < b < 1.

    Consecutive grid values are compared with certified enclosures and the
    closed-form log-derivative sign is certified at every interior point.
    """
    if part == 1:
        grid = rational_grid(x_lo, x_hi, grid_points, include_lo=True, include_hi=True)

        def attempt(d: int) -> Optional[BoundReport]:
            vals = [(x, log_pi_fn(x + 1, d) - log_pi_fn(x, d)) for x in grid]
            signs = [cert_gt(ilog(x + 1, d) - ilog(x, d), 0) for x in grid]
            return _grid_monotone_report(
                "self-power-ratio-increasing", {"part": 1, "x_lo": x_lo, "x_hi": x_hi},
                vals, signs, increasing=True, digits=d,
            )

    elif part == 2:
        if alpha is None or not 0 < alpha < Fraction(1, 2):
            raise ValueError("part 2 needs 0 < alpha < 1/2")
        hi = alpha * alpha
        grid = rational_grid(Fraction(0), hi, grid_points, include_hi=True)

        def attempt(d: int) -> Optional[BoundReport]:
            vals = [
                (
                    x,
                    log_pi_fn(1 - 2 * alpha + x, d)
                    + 2 * log_pi_fn(alpha - x, d)
                    + log_pi_fn(x, d),
                )
                for x in grid
            ]
            signs = [
                cert_lt(ilog((1 - 2 * alpha + x) * x, d) - 2 * ilog(alpha - x, d), 0)
                for x in grid
                if x < hi  # derivative vanishes exactly at the right endpoint
            ]
            return _grid_monotone_report(
                "triple-product-decreasing", {"part": 2, "alpha": alpha},
                vals, signs, increasing=False, digits=d,
            )

    elif part == 3:
        if beta is None or not 0 < beta < 1:
            raise ValueError("part 3 needs 0 < beta < 1")

        def attempt(d: int) -> Optional[BoundReport]:
            left = isqrt_iv(beta, d)
            hi = (1 + beta) / 2
            grid = rational_grid(left.hi, hi, grid_points)

            def log_phi3(x) -> Interval:
                return 2 * (log_pi_fn(1 - x, d) + log_pi_fn(x, d)) - (
                    log_pi_fn(1 - 2 * x + beta, d) + 2 * log_pi_fn(x - beta, d)
                )

            vals = [(left.lo, log_phi3(left))] + [
                (x, log_phi3(Interval.point(x))) for x in grid
            ]
            signs = [
                cert_lt(
                    ilog((1 - 2 * x + beta) * x, d) - ilog((1 - x) * (x - beta), d), 0
                )
                for x in grid  # sign degenerates at sqrt(beta) itself
            ]
            return _grid_monotone_report(
                "ratio-product-decreasing", {"part": 3, "beta": beta},
                vals, signs, increasing=False, digits=d,
                extra_note="left endpoint sqrt(beta) included via enclosure",
            )

    else:
        raise ValueError("part must be 1, 2 or 3")

    report, used = certify_with_escalation(attempt, digits or default_digits())
    if report is None:
        raise CertificationError(f"monotonicity part {part} inconclusive at <= {used} digits")
    return report


def check_claim_infi2(
    alpha: Fraction, grid_points: int = 128, digits: Optional[int] = None
) -> BoundReport:
    """Maximum of x -> P(x)/(P(x-a)^3 P(1-x) P(2a-x)) at lambda(a), on a grid.

    Certifies phi(lambda) >= phi(x) for every grid point and the derivative
    sign pattern (positive left of lambda, negative right of it).
    """
    alpha = _check_alpha(alpha)
    hi = min(Fraction(1), 2 * alpha)
    grid = rational_grid(alpha, hi, grid_points)

    def attempt(d: int) -> Optional[BoundReport]:
        lam = lambda_fn(alpha, d)

        def log_phi(x) -> Interval:
            xi = Interval._coerce(x)
            return (
                log_pi_fn(xi, d)
                - 3 * log_pi_fn(xi - alpha, d)
                - log_pi_fn(1 - xi, d)
                - log_pi_fn(2 * alpha - xi, d)
            )

        peak = log_phi(lam)
        holds = True
        worst_val: Optional[Interval] = None
        for x in grid:
            val = log_phi(x)
            ok = cert_ge(peak, val)
            if ok is None:
                return None
            if not ok:
                holds = False
                worst_val = val
                break
            if worst_val is None or (peak - val).lo < (peak - worst_val).lo:
                worst_val = val
            side = cert_lt(Interval.point(x), lam)
            if side is None:
                return None
            deriv = ilog(x * (1 - x) * (2 * alpha - x), d) - 3 * ilog(x - alpha, d)
            sign = cert_gt(deriv, 0) if side else cert_lt(deriv, 0)
            if sign is None:
                return None
            if not sign:
                holds = False
                worst_val = val
                break
        assert worst_val is not None
        return BoundReport(
            "peak-at-lambda",
            {"alpha": alpha, "lambda": float(lam)},
            Quantity.certified(worst_val),
            Quantity.certified(peak),
            Verdict.HOLDS if holds else Verdict.FAILS,
            d,
            relation="<=",
            note=f"{len(grid)} grid points over (alpha, min(1, 2 alpha)); "
            f"derivative sign certified on both sides of lambda",
        )

    report, used = certify_with_escalation(attempt, digits or default_digits())
    if report is None:
        raise CertificationError(f"peak-at-lambda inconclusive at <= {used} digits")
    return report


# -- composite chains -------------------------------------------------------------------


def check_lemma_H(n: int, ell: int, digits: Optional[int] = None) -> BoundReport:
    """Triple binomial bound: C(n-l,k-l) C(l,2l-k) C(k,l) < ((4/5) rho(l/n) / (P P)^2)^n."""
    if not 3 <= ell <= Fraction(n, 2):
        raise ValueError("need 3 <= ell <= n/2")
    if not 2 * (n - 2 * ell + 1) <= ell * ell:
        raise ValueError("need 2(n - 2 ell + 1) <= ell^2")
    a = Fraction(ell, n)

    def attempt(d: int) -> Optional[BoundReport]:
        log_base = (
            ilog(Fraction(4, 5), d)
            + log_rho(a, d)
            - 2 * (log_pi_fn(a, d) + log_pi_fn(1 - a, d))
        )
        rhs = iexp(n * log_base, d)
        worst: Optional[tuple[int, Fraction]] = None
        for k in range(ell, 2 * ell + 1):
            lhs = binom(n - ell, k - ell) * binom(ell, 2 * ell - k) * binom(k, ell)
            ok = cert_lt(Interval.point(lhs), rhs)
            if ok is None:
                return None
            if not ok:
                return compare_report(
                    "triple-binomial-bound", {"n": n, "ell": ell, "k": k},
                    Quantity.exact_value(lhs), Quantity.certified(rhs), d, strict=True,
                )
            if worst is None or lhs > worst[1]:
                worst = (k, Fraction(lhs))
        assert worst is not None
        return compare_report(
            "triple-binomial-bound",
            {"n": n, "ell": ell, "worst_k": worst[0]},
            Quantity.exact_value(worst[1]), Quantity.certified(rhs), d, strict=True,
            note=f"all k in [{ell}, {2*ell}] certified; worst at k={worst[0]}",
        )

    report, used = certify_with_escalation(attempt, digits or default_digits())
    if report is None:
        raise CertificationError(f"triple-binomial-bound inconclusive at <= {used} digits")
    return report


def check_prop2_chain(n: int, ell: int, digits: Optional[int] = None) -> BoundReport:
    """Exact two-cover layer tau against 2 n^2 rho(l/n)^n (4/5)^n."""
    if not 3 <= ell <= Fraction(n, 2):
        raise ValueError("need 3 <= ell <= n/2")
    if not 2 * (n - 2 * ell + 1) <= ell * ell:
        raise ValueError("need 2(n - 2 ell + 1) <= ell^2")
    tau = tau_layer_exact(n, ell, 2).value
    a = Fraction(ell, n)

    def attempt(d: int) -> Optional[BoundReport]:
        rhs = (2 * n * n) * iexp(n * (log_rho(a, d) + ilog(Fraction(4, 5), d)), d)
        report = compare_report(
            "two-cover-rate-bound", {"n": n, "ell": ell},
            Quantity.exact_value(tau), Quantity.certified(rhs), d, strict=True,
        )
        return report if report.verdict is not Verdict.INCONCLUSIVE else None

    report, used = certify_with_escalation(attempt, digits or default_digits())
    if report is None:
        raise CertificationError(f"two-cover-rate-bound inconclusive at <= {used} digits")
    return report


def check_prop_r100_chain(r: int, n: int, digits: Optional[int] = None) -> BoundReport:
    """tau_r(layer) <= C(rl,l)/C(n,l) <= (rl/n)^l <= e^-l at l = floor(n/(e r))."""
    if r < 2:
        raise ValueError("need r >= 2")
    d = digits or default_digits()
    ell = None
    for dd in escalation_schedule(d):
        x = Interval.point(Fraction(n, r)) / e_const(dd)
        if math.floor(x.lo) == math.floor(x.hi):
            ell = math.floor(x.lo)
            break
    if ell is None:
        raise CertificationError(f"floor(n/(e r)) undecided for n={n}, r={r}")
    if ell < 1:
        raise ValueError(f"n too small: floor(n/(e r)) = {ell}")
    if r * ell > n:
        raise ValueError("need r ell <= n")
    tau = tau_layer_exact(n, ell, r).value
    ratio = Fraction(binom(r * ell, ell), binom(n, ell))
    geo = Fraction(r * ell, n) ** ell
    step1 = tau <= ratio
    step2 = ratio <= geo

    def attempt(dd: int) -> Optional[bool]:
        return cert_le(Interval.point(geo), iexp(Interval.point(Fraction(-ell)), dd))

    step3, _ = certify_with_escalation(attempt, d)
    if step3 is None:
        raise CertificationError("geometric-vs-exponential step undecided")
    verdict = Verdict.HOLDS if (step1 and step2 and step3) else Verdict.FAILS
    return BoundReport(
        "geometric-decay-chain",
        {"r": r, "n": n, "ell": ell},
        Quantity.exact_value(tau),
        Quantity.exact_value(geo),
        verdict,
        d,
        relation="<=",
        note=f"tau <= C(rl,l)/C(n,l) = {float(ratio):.6g} <= (rl/n)^l, and (rl/n)^l <= e^-l certified",
    )
