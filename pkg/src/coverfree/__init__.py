"""coverfree: exact coverage probabilities on the subset lattice.

Core quantities: for iid random subsets S0, ..., Sr of an n-element ground
set, tau_r(p) is the probability that S0 is contained in the union of the
other r draws.  The package computes tau exactly by several independent
routes, searches for maximum r-cover-free families, minimizes tau over the
probability simplex, and certifies the analytic inequalities that control
the large-n behavior, at escalating precision.
"""

from .backend import BACKEND
from .combinatorics import (
    LatticeVector,
    binom,
    middle_binomial,
    mobius_transform,
    stirling_sandwich_check,
    superset_mobius,
    superset_zeta,
    zeta_transform,
)
from .distributions import (
    FamilyOfSets,
    SubsetDistribution,
    is_cover_free,
    make_layer_distribution,
    random_distribution,
    support,
)
from .families import (
    SearchBudget,
    SearchResult,
    g_bounds_report,
    greedy_cover_free,
    max_cover_free_size,
)
from .intervals import Interval, Trichotomy, pi_fn
from .optimizer import (
    equality_diagnostics,
    gradient_check,
    layer_sweep,
    minimize_tau_simplex,
)
from .reporting import BoundReport, Verdict
from .tau import (
    MonteCarloResult,
    TauResult,
    UnionSizeDistribution,
    tau_cf_closed_form,
    tau_exact,
    tau_layer_exact,
    tau_monte_carlo,
    tau_naive,
    union_size_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundReport",
    "FamilyOfSets",
    "Interval",
    "LatticeVector",
    "MonteCarloResult",
    "SearchBudget",
    "SearchResult",
    "SubsetDistribution",
    "TauResult",
    "Trichotomy",
    "UnionSizeDistribution",
    "Verdict",
    "__version__",
    "binom",
    "equality_diagnostics",
    "g_bounds_report",
    "gradient_check",
    "greedy_cover_free",
    "is_cover_free",
    "layer_sweep",
    "make_layer_distribution",
    "max_cover_free_size",
    "middle_binomial",
    "minimize_tau_simplex",
    "mobius_transform",
    "pi_fn",
    "random_distribution",
    "stirling_sandwich_check",
    "superset_mobius",
    "superset_zeta",
    "support",
    "tau_cf_closed_form",
    "tau_exact",
    "tau_layer_exact",
    "tau_monte_carlo",
    "tau_naive",
    "union_size_distribution",
    "zeta_transform",
]
