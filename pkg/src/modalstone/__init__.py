"""Finite modal frames, relational spaces, and the adjunction between them.

The package is organised around one contravariant adjunction: ``omega_space``
turns a finite relational space into the modal frame of its open sets, and
``build_point_space`` recovers a relational space from a modal frame via
characters.  ``duality`` and ``sweep`` check how close the round trips come to
identities; ``formulas`` adds a small modal language interpreted on both sides.
"""

from .order import (
    StructureError,
    FiniteLattice,
    Character,
    PrincipalFilter,
    PrincipalIdeal,
    validate_lattice,
    characters,
    all_ideals,
)
from .frames import (
    AXIOMS,
    ModalFrame,
    ModalFrameMorphism,
    validate_modal_frame,
    classify_frame,
    classify_morphism,
    ideal_completion,
)
from .spaces import (
    RelationalSpace,
    SpaceMorphism,
    validate_space,
    classify_space,
    classify_space_morphism,
    box_class,
    dia_class,
    is_lens,
)
from .omega import omega_space, omega_morphism, omega_class_report
from .points import (
    MODES,
    ConstructionMode,
    PrePoint,
    PointSpace,
    build_point_space,
    brute_force_points,
    f_sharp,
    psi,
    PreconditionViolated,
    SelfCheckFailed,
)
from .duality import (
    Verdict,
    check_spatial,
    check_sober,
    check_triangles,
    check_adjunction_bijection,
    duality_report,
    correspondence_report,
)
from .formulas import (
    Formula,
    FormulaSyntaxError,
    Model,
    parse,
    to_text,
    evaluate,
    evaluate_in_frame,
    bisim_invariance_check,
)
from .sweep import omega_soundness_sweep, frame_duality_sweep, run_sweeps
from .kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION

__version__ = "0.1.0"

__all__ = [
    "StructureError",
    "FiniteLattice",
    "Character",
    "PrincipalFilter",
    "PrincipalIdeal",
    "validate_lattice",
    "characters",
    "all_ideals",
    "AXIOMS",
    "ModalFrame",
    "ModalFrameMorphism",
    "validate_modal_frame",
    "classify_frame",
    "classify_morphism",
    "ideal_completion",
    "RelationalSpace",
    "SpaceMorphism",
    "validate_space",
    "classify_space",
    "classify_space_morphism",
    "box_class",
    "dia_class",
    "is_lens",
    "omega_space",
    "omega_morphism",
    "omega_class_report",
    "MODES",
    "ConstructionMode",
    "PrePoint",
    "PointSpace",
    "build_point_space",
    "brute_force_points",
    "f_sharp",
    "psi",
    "PreconditionViolated",
    "SelfCheckFailed",
    "Verdict",
    "check_spatial",
    "check_sober",
    "check_triangles",
    "check_adjunction_bijection",
    "duality_report",
    "correspondence_report",
    "Formula",
    "FormulaSyntaxError",
    "Model",
    "parse",
    "to_text",
    "evaluate",
    "evaluate_in_frame",
    "bisim_invariance_check",
    "omega_soundness_sweep",
    "frame_duality_sweep",
    "run_sweeps",
    "KERNEL_IMPLEMENTATION",
    "__version__",
]
