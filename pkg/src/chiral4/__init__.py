"""Chiral 4-polytopes with automorphism group PSL(2,q) or PGL(2,q)."""

from chiral4.fields import (
    FieldCtx,
    FieldElement,
    element_order,
    is_primitive,
    is_square,
    make_field,
    negate_order,
    parse_field,
    sqrt,
    subfield_embed,
)
from chiral4.projective import ProjElement, ProjPoint
from chiral4.subgroups import SubgroupClass, SubgroupHandle, classify as classify_subgroup
from chiral4.subgroups import generate, intersect, trace_field_degree
from chiral4.polytopes import (
    PolytopeRecord,
    RotationTriple,
    SchlafliSymbol,
    are_equivalent,
    check_generation,
    check_intersection,
    check_relations,
    dual,
    enantiomorph,
    is_chiral,
    schlafli_of,
    verify_triple,
)
from chiral4.constructions import (
    build_family_353,
    build_family_534,
    build_family_535,
    complete_triple,
    icosahedral_embeddings,
    pgl_family,
    pgl_triple,
    psl_family,
)
from chiral4.classifier import classify, predicted_counts, smallest_witnesses
from chiral4.enumerator import enumerate_rank4, enumerate_rank5, table2_row
from chiral4.conjecture import (
    ConjectureWitness,
    build_candidate,
    omega_of,
    search_witness,
    verify_candidate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
