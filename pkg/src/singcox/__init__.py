"""Parabolic double cosets, core cosets and atomic expressions in finite Coxeter systems."""
from .atoms import (
    Atom,
    AtomicExpression,
    RotationSequence,
    atom,
    atomic_braid,
    atomic_factorize,
    atomic_factorize_right,
    parse_atomic,
    rotation_sequence,
    switchback,
    switchback_depth,
)
from .chambers import CombinatorialChamber, chamber_adjacency, chambers, subset_classes
from .cosets import (
    DoubleCoset,
    SingularExpression,
    compose,
    core_of,
    coset_of,
    evaluate,
    identity_coset,
    is_core,
    parse_expression,
    redundancy,
)
from .coxeter import INF, CoxeterMatrix, CoxeterSystem, Element, build_system, load_system, preset
from .errors import (
    BadDescent,
    BarMismatch,
    BarObstruction,
    Budget,
    CoxeterError,
    InvalidMatrix,
    MalformedExpression,
    MismatchedMiddle,
    NonFinite,
    NotAGenerator,
    NotAdmissible,
    NotCore,
    WrongCorank,
)
from .poset import (
    CorePoset,
    anti_involution,
    anti_isomorphism,
    dihedral_classify,
    enumerate_core,
    maximal_element,
)
from .ring import CyclotomicRealRing, RingScalar
from .rewrite import (
    ZERO,
    NilMorphism,
    RexGraph,
    apply_shrinking_moves,
    atomic_length,
    atomic_rex_graph,
    enumerate_atomic_rexes,
    neighbors,
    nil_compose,
    presentation_witness,
    reduce_admissible,
    singular_rex_graph,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "AtomicExpression",
    "RotationSequence",
    "atom",
    "atomic_braid",
    "atomic_factorize",
    "atomic_factorize_right",
    "parse_atomic",
    "rotation_sequence",
    "switchback",
    "switchback_depth",
    "DoubleCoset",
    "SingularExpression",
    "compose",
    "core_of",
    "coset_of",
    "evaluate",
    "identity_coset",
    "is_core",
    "parse_expression",
    "redundancy",
    "CorePoset",
    "anti_involution",
    "anti_isomorphism",
    "dihedral_classify",
    "enumerate_core",
    "maximal_element",
    "ZERO",
    "NilMorphism",
    "RexGraph",
    "apply_shrinking_moves",
    "atomic_length",
    "atomic_rex_graph",
    "enumerate_atomic_rexes",
    "neighbors",
    "nil_compose",
    "presentation_witness",
    "reduce_admissible",
    "singular_rex_graph",
    "CombinatorialChamber",
    "chamber_adjacency",
    "chambers",
    "subset_classes",
    "INF",
    "CoxeterMatrix",
    "CoxeterSystem",
    "Element",
    "build_system",
    "load_system",
    "preset",
    "CyclotomicRealRing",
    "RingScalar",
    "BadDescent",
    "BarMismatch",
    "BarObstruction",
    "Budget",
    "CoxeterError",
    "InvalidMatrix",
    "MalformedExpression",
    "MismatchedMiddle",
    "NonFinite",
    "NotAGenerator",
    "NotAdmissible",
    "NotCore",
    "WrongCorank",
]
