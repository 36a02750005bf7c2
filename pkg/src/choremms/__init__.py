"""Fair division of indivisible chores under additive costs: FFD, MultiFit
and HFFD packing, First-Fit-Valid verification, swap-transcript reductions,
and maximin-share solvers with exact rational arithmetic."""

from .core import (Allocation, Instance, InstanceClass, LiftingMap, Rational,
                   UniversalOrdering, bundle_cost, classify, format_rational,
                   lex_compare, parse_rational, swap, to_ido, universal_ordering)
from .ffv import (SwapStep, SwapTranscript, benchmark_bundle, find_exact_subset,
                  fit_in_space, is_ffv, reduce_bivalued, reduce_factored,
                  remove_redundant, transform_mms_to_ffd)
from .io import format_allocation, format_instance, parse_allocation, parse_instance
from .mms import (MMSResult, SolveResult, min_success_threshold, mms_brute,
                  mms_factored, solve_auto, solve_bivalued, solve_factored,
                  solve_ordinal)
from .packing import PackOutcome, ffd, hffd, multifit, subset_sums

__all__ = [name for name in dir() if not name.startswith("_")]
