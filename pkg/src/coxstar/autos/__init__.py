"""Automorphisms of star-shaped Coxeter groups."""

from .basic import (
    AutError,
    Automorphism,
    BasicAut,
    Verdict,
    apply,
    check_relations,
    compose,
    compose_all,
    diag,
    format_cycles,
    from_basics,
    identity_aut,
    inner,
    invert_aut,
    make_basic,
    parse_cycles,
    parse_automorphism,
    phi,
    psi,
    sigma,
    tau,
    verify_is_automorphism,
)
from .factorize import Factorization, FactorizationError, factorize_automorphism, spe_membership
from .structure import (
    CenterReport,
    QResult,
    SuiteReport,
    build_complement_Q,
    check_center_P2,
    closure,
    enumerate_P3,
    euler_phi,
    is_complement,
    p1_generators,
    p2_generators,
    relation_suite,
    splitting_predicate,
    structure_report,
    unit_group_complement,
    units,
)
