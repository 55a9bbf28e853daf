"""Inference systems with corules: inductive, coinductive, and generated
interpretations, proof-principle checking, and lasso-colist predicates."""

from .colist import Colist, Finite, Lasso, SuffixAutomaton, equal, get, pointwise, suffix, suffix_automaton
from .inference import (
    BOUNDEDNESS,
    CLOSEDNESS,
    CONSISTENCY,
    CheckReport,
    Failure,
    InferenceSystem,
    InternalError,
    Judgment,
    JudgmentSet,
    Rule,
    apply_step,
    bounded_coinduction_check,
    coind_interpretation,
    derivation_rounds,
    gen_interpretation,
    ind_interpretation,
    is_closed,
    is_consistent,
    restrict,
    rule,
)
from .predicates import (
    EVEN,
    ODD,
    POSITIVE,
    ElementPredicate,
    JudgmentScheme,
    Kind,
    decide_direct,
    eq_to,
    from_table,
    greater_than,
    predicate_by_name,
    gen_allpos_system,
    gen_always_system,
    gen_eventually_system,
    gen_infoften_system,
    gen_maxelem_system,
    gen_member_system,
    max_of,
    spec_oracle,
)
from .prooftree import (
    FiniteProofTree,
    RationalNode,
    RationalProofTree,
    StructuralError,
    check_finite,
    check_rational_in_gen,
    extract_finite_proof,
    extract_rational_proof,
    is_acyclic,
)

__all__ = [name for name in dir() if not name.startswith("_")]
