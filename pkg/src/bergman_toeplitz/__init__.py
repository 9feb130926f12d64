"""Commuting and semi-commuting monomial-type Toeplitz operators on weighted Bergman domains."""

from .calculus import (
    SparseOperator,
    Truncation,
    action_coefficient,
    build_commutator,
    build_operator,
    build_semicommutator,
    commutator_coefficient,
    h_value,
    max_abs_entry,
    max_rel_entry,
    norm_sq,
    semicommutator_coefficient,
)
from .core import (
    DomainSpec,
    InputError,
    MonomialSymbol,
    ProblemPair,
    condition_I,
    coordinatewise_condition_I,
    delta_index,
    gamma_index,
    mu_nu_a_b,
    weighted_degree,
)
from .decide import (
    TrivialityReport,
    Verdict,
    classify_trivial,
    decide_commute,
    decide_commute_holomorphic,
    decide_commute_monomial,
    decide_semicommute,
    necessary_eq14,
    necessary_integrality,
)
from .gamma import (
    GammaRatioIdentity,
    RationalFunction,
    RationalPoly,
    decide_gamma_identity,
    gamma_ratio_reduce,
    log_gamma,
    pochhammer_poly,
    sample_identity_residual,
)
from .oracle import McConfig, McResult, mc_inner_product, mc_volume, oracle_action_coefficient
from .search import SearchSpace, enumerate_commuting, enumerate_semicommuting
