"""Toolkit for the lambda-upsilon calculus of explicit substitutions.

Terms, the eight-rule rewriting system, exact Catalan enumeration and
generating-function expectations, a size-preserving bijection with plane
binary tree skeletons driving an exact-size uniform sampler, and a seeded
statistics harness.
"""

from .rewrite import (
    ALL_RULES,
    BudgetExceeded,
    InvalidRedex,
    Redex,
    RuleKind,
    Trace,
    TraceStep,
    UPSILON_RULES,
    apply_at,
    count_all_redexes,
    count_redexes,
    find_redexes,
    has_nested_substitution,
    is_strict_form_bounded,
    match_redex,
    normalize,
    trace_to_json,
    unsuspended_constructors,
)
from .series import (
    BoundExceeded,
    ENUMERATION_BOUND,
    ParamKind,
    Series,
    catalan,
    count_substs,
    count_terms,
    enumerate_substs,
    enumerate_terms,
    expected_param_exact,
    nested_free_fraction,
    param_value,
    solve_core_series,
    solve_restricted_series,
    total_param_bruteforce,
)
from .stats import (
    ComparisonReport,
    InsufficientSamples,
    LIMIT_MEAN_SLOPE,
    LIMIT_VARIANCE_SLOPE,
    NESTED,
    SampleSummary,
    Tolerance,
    UNSUSPENDED_MEAN_LIMIT,
    compare_to_reference,
    export_report,
    import_summaries,
    run_experiment,
    standard_error,
    standardized_skewness,
)
from .syntax import ParseError, parse_term, render_subst, render_term
from .terms import (
    SHIFT,
    Abs,
    App,
    Closure,
    Index,
    Lift,
    Position,
    Shift,
    Slash,
    Subst,
    Term,
    is_pure,
    iter_subterms,
    replace_at,
    size,
    size_sub,
    subterm_at,
)
from .trees import (
    BinTree,
    InvalidSize,
    Rng,
    enumerate_trees,
    node_count,
    phi,
    phi_inv,
    remy_tree,
    sample_term,
    tree_from_json,
    tree_to_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
