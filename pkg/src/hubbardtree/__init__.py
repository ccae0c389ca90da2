"""Kneading sequences, admissibility, tree reconstruction and embeddings."""

__version__ = "0.1.0"

from .admissibility import (
    BranchSpectrumEntry,
    FailureDiagnostic,
    OrbitKind,
    branch_spectrum,
    evil_arm_count,
    failing_periods,
    fails_for_period,
    is_admissible,
    tame_arm_count,
)
from .atlas import (
    AtlasRow,
    CrossCheckError,
    analyze_sequence,
    diagnostics_record,
    embedding_census,
    enumerate_rows,
    star_periodic_sequences,
)
from .embedding import (
    EmbeddedTree,
    EvilOrbitError,
    count_embeddings,
    enumerate_embeddings,
    euler_phi,
    generate_embedding,
    verify_embedding,
)
from .sequences import (
    INFINITY,
    InternalAddress,
    Itinerary,
    KneadingSequence,
    ParseError,
    Symbol,
    address_to_sequence,
    critical_orbit_itinerary,
    exact_period,
    first_mismatch,
    internal_address,
    mismatch_orbit,
    orbit_contains,
    symbols_differ,
    upper_lower,
)
from .tree import (
    HubbardTree,
    MarkedPoint,
    SpectrumMismatchError,
    StructuralError,
    arm_permutation,
    build_tree,
    characteristic_point,
    classify_orbits,
    closest_precritical_itinerary,
    lies_between,
    marked_points,
    verify_axioms,
)
from .triods import (
    Branch,
    Middle,
    TriodError,
    TriodResult,
    UnrealizedPointError,
    classify_triod,
)

__all__ = [
    "INFINITY",
    "AtlasRow",
    "Branch",
    "BranchSpectrumEntry",
    "CrossCheckError",
    "analyze_sequence",
    "diagnostics_record",
    "embedding_census",
    "enumerate_rows",
    "star_periodic_sequences",
    "EmbeddedTree",
    "EvilOrbitError",
    "FailureDiagnostic",
    "HubbardTree",
    "InternalAddress",
    "Itinerary",
    "KneadingSequence",
    "MarkedPoint",
    "Middle",
    "OrbitKind",
    "ParseError",
    "SpectrumMismatchError",
    "StructuralError",
    "Symbol",
    "TriodError",
    "TriodResult",
    "UnrealizedPointError",
    "address_to_sequence",
    "arm_permutation",
    "branch_spectrum",
    "build_tree",
    "characteristic_point",
    "classify_orbits",
    "classify_triod",
    "closest_precritical_itinerary",
    "count_embeddings",
    "critical_orbit_itinerary",
    "enumerate_embeddings",
    "euler_phi",
    "evil_arm_count",
    "exact_period",
    "failing_periods",
    "fails_for_period",
    "first_mismatch",
    "generate_embedding",
    "internal_address",
    "lies_between",
    "is_admissible",
    "marked_points",
    "mismatch_orbit",
    "orbit_contains",
    "symbols_differ",
    "tame_arm_count",
    "upper_lower",
    "verify_axioms",
    "verify_embedding",
]
