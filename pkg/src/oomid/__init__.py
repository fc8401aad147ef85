"""Exact and order-of-magnitude influence diagram solvers."""

from .values import (
    INF,
    MINUS_ONE,
    ONE,
    ZERO,
    OOMValue,
    Sign,
    add,
    dominates,
    inverse,
    maximal_set,
    mul,
    negate,
    parse_value,
)
from .sets import (
    OOMSet,
    ZERO_SET,
    canonicalize,
    convex_closure_bounded,
    equiv,
    max_sets,
    parse_set,
    scale,
    set_dominates,
    singleton,
    sum_sets,
)

from .diagram import (
    CPT,
    DiagramError,
    GuardExceeded,
    InfluenceDiagram,
    Kind,
    Policy,
    PolicyRule,
    UtilityFunction,
    Variable,
    apply_nonforgetting,
    from_dict,
    load,
    save,
    temporal_partition,
    to_dict,
    validate,
    wildcatter,
)
from .ordering import induced_width, is_legal_ordering, legal_ordering
from .exact import (
    PolicyEvaluator,
    brute_force_meu,
    evaluate_policy,
    solve_exact,
)
from .convert import (
    ConversionConfig,
    OOMInfluenceDiagram,
    convert,
    load_oom,
    save_oom,
    spohn_prob,
    spohn_util,
    validate_oom,
)
from .oom_solve import PolicySet, brute_force_oom, elim_oom_id, policy_count
from .generator import GeneratorParams, generate
from .bench import (
    ExperimentResult,
    SummaryRow,
    run_experiment,
    summarize,
    write_results_csv,
    write_summary_csv,
)

__all__ = [
    "INF",
    "MINUS_ONE",
    "ONE",
    "ZERO",
    "OOMValue",
    "Sign",
    "add",
    "dominates",
    "inverse",
    "maximal_set",
    "mul",
    "negate",
    "parse_value",
    "OOMSet",
    "ZERO_SET",
    "canonicalize",
    "convex_closure_bounded",
    "equiv",
    "max_sets",
    "parse_set",
    "scale",
    "set_dominates",
    "singleton",
    "sum_sets",
    "CPT",
    "DiagramError",
    "GuardExceeded",
    "InfluenceDiagram",
    "Kind",
    "Policy",
    "PolicyRule",
    "UtilityFunction",
    "Variable",
    "apply_nonforgetting",
    "from_dict",
    "load",
    "save",
    "temporal_partition",
    "to_dict",
    "validate",
    "wildcatter",
    "induced_width",
    "is_legal_ordering",
    "legal_ordering",
    "PolicyEvaluator",
    "brute_force_meu",
    "evaluate_policy",
    "solve_exact",
    "ConversionConfig",
    "OOMInfluenceDiagram",
    "convert",
    "load_oom",
    "save_oom",
    "spohn_prob",
    "spohn_util",
    "validate_oom",
    "PolicySet",
    "brute_force_oom",
    "elim_oom_id",
    "policy_count",
    "GeneratorParams",
    "generate",
    "ExperimentResult",
    "SummaryRow",
    "run_experiment",
    "summarize",
    "write_results_csv",
    "write_summary_csv",
]
