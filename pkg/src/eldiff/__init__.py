"""Logical difference between EL-family terminologies over a signature."""

from .model import (
    ABox, Atom, Concept, ConceptAssert, Conj, DomainRestr, EqAtom, Exists,
    ExistsRoles, ExistsUniversal, InternalError, ModelError, Ran, RangeRestr,
    RoleAssert, RoleIncl, Signature, SubAtom, Terminology, Top, TOP, conj,
    exists_roles, family, is_acyclic, non_conj, role_depth, signature_of,
)
from .syntax import (
    ParseError, SourceLocation, parse_abox, parse_concept, parse_signature,
    parse_terminology, render_concept, render_report, render_terminology,
)
from .normalize import NormalizedTerminology, ensure_normalized, is_normalized, normalize
from .reasoner import (
    FamilyError, SubsumptionIndex, classify, entails_role, entails_subsumption,
)
from .canonical import (
    Aux, Interpretation, KnowledgeBase, Named, UnknownIndividualError,
    abox_neighborhood_concept, build_canonical, build_generating,
    concept_to_abox, eval_concept, instance_check,
)
from .simulation import (
    SimulationResult, global_intersection_simulation, range_simulation,
    sigma_simulation,
)
from .witnesses import (
    ALL, CyclicityError, XI_SIGMA, build_witness_abox, noimply_cover,
    notwitness_el, notwitness_elhr, role_splitting_unfold, xi,
)
from .diff import (
    Inclusion, ModeSets, WitnessReport, compute_diff, default_signature,
    generate_lhs_example, generate_rhs_example, lhs_witnesses, role_witnesses,
    rhs_witnesses_concept, rhs_witnesses_instance,
)
from .oracle import brute_force_witnesses, enumerate_concepts, generate_random_terminology

__all__ = [n for n in dir() if not n.startswith("_")]
