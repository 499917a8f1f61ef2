"""Finite Kripke structures for intuitionistic set theory experiments."""

from .frame import (
    Frame,
    FrameKind,
    build_frame,
    chain,
    compatible,
    dump_frame,
    fan,
    forest,
    leaves,
    leq,
    parse_frame_spec,
    tree,
    up_set,
)
from .formula import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Member,
    Not,
    Or,
    Param,
    ParseError,
    Term,
    Var,
    classify,
    enumerate_delta0,
    enumerate_pi,
    enumerate_sigma,
    free_vars,
    is_delta0,
    is_positive_in,
    params_of,
    parse,
    relativize,
    render,
    substitute,
)
from .semantics import (
    EvalError,
    KripkeSet,
    Structure,
    Verdict,
    delta0_absolute,
    forced_equal,
    forced_member,
    forces,
    is_end_extension,
    is_extensional,
    is_ordinal,
    universe_at,
)
from .construct import (
    alpha_forest,
    branch_clause_witness,
    branch_formula,
    branch_from_bits,
    empty_set,
    externalize,
    internal_nat,
    is_branch,
    make_xi,
    monotone_t_families,
    one_sigma,
    p_hat,
    p_hat_sub,
    phi_xy,
    subset_of_t,
    t_classes_at,
    t_family,
    tree_depth,
    truth_ordinal,
    with_zero,
)
from .hierarchy import (
    DefConfig,
    constructible,
    def_along,
    def_step,
    definable_branches,
    define_subset,
    empty_structure,
    gamma_apply,
    gfp,
    hereditary_closure,
    iterate_def,
    lfp,
    powerset,
    structure_from_sets,
)
from .schema import (
    AXIOM_IDS,
    BASE_SCHEMAS,
    EQUIVALENT_TRIO,
    CheckBounds,
    CheckReport,
    CrosscheckReport,
    DesignatedInstance,
    LemmaResult,
    Prop1Report,
    Prop1Row,
    SchemaId,
    bounding_uniformity_agreement,
    build_template,
    check_all,
    check_instance,
    check_schema,
    lemma_suite,
    proposition1_crosscheck,
)
from .specfile import (
    SpecError,
    StructSpec,
    build_structure,
    canonical_structure,
    dump_structure_spec,
    load_structure,
    parse_structure_spec,
    uniformity_gap,
)

__version__ = "0.1.0"

__all__ = [
    "AXIOM_IDS",
    "And",
    "BASE_SCHEMAS",
    "CheckBounds",
    "CheckReport",
    "CrosscheckReport",
    "DefConfig",
    "DesignatedInstance",
    "EQUIVALENT_TRIO",
    "Eq",
    "EvalError",
    "Exists",
    "Forall",
    "Formula",
    "Frame",
    "FrameKind",
    "Implies",
    "KripkeSet",
    "LemmaResult",
    "Member",
    "Not",
    "Or",
    "Param",
    "ParseError",
    "Prop1Report",
    "Prop1Row",
    "SchemaId",
    "SpecError",
    "StructSpec",
    "Structure",
    "Term",
    "Var",
    "Verdict",
    "alpha_forest",
    "bounding_uniformity_agreement",
    "branch_clause_witness",
    "branch_formula",
    "branch_from_bits",
    "build_frame",
    "build_structure",
    "build_template",
    "canonical_structure",
    "chain",
    "check_all",
    "check_instance",
    "check_schema",
    "classify",
    "compatible",
    "constructible",
    "def_along",
    "def_step",
    "definable_branches",
    "define_subset",
    "delta0_absolute",
    "dump_frame",
    "dump_structure_spec",
    "empty_set",
    "empty_structure",
    "enumerate_delta0",
    "enumerate_pi",
    "enumerate_sigma",
    "externalize",
    "fan",
    "forced_equal",
    "forced_member",
    "forces",
    "forest",
    "free_vars",
    "gamma_apply",
    "gfp",
    "hereditary_closure",
    "internal_nat",
    "is_branch",
    "is_delta0",
    "is_end_extension",
    "is_extensional",
    "is_ordinal",
    "is_positive_in",
    "iterate_def",
    "leaves",
    "lemma_suite",
    "leq",
    "lfp",
    "load_structure",
    "make_xi",
    "monotone_t_families",
    "one_sigma",
    "p_hat",
    "p_hat_sub",
    "params_of",
    "parse",
    "parse_frame_spec",
    "parse_structure_spec",
    "phi_xy",
    "powerset",
    "proposition1_crosscheck",
    "relativize",
    "render",
    "structure_from_sets",
    "subset_of_t",
    "substitute",
    "t_classes_at",
    "t_family",
    "tree",
    "tree_depth",
    "truth_ordinal",
    "universe_at",
    "up_set",
    "uniformity_gap",
    "with_zero",
]
