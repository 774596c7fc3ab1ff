"""Decision procedures for homotopical presentations of finite categories."""
from .core import (
    Adjunction,
    FinCat,
    Functor,
    StructureError,
    Verdict,
    compose_functors,
    identity_functor,
    is_equivalence,
    is_isomorphism,
    opposite,
    validate_category,
    validate_functor,
    verify_adjunction,
)

__all__ = [
    "Adjunction",
    "FinCat",
    "Functor",
    "StructureError",
    "Verdict",
    "compose_functors",
    "identity_functor",
    "is_equivalence",
    "is_isomorphism",
    "opposite",
    "validate_category",
    "validate_functor",
    "verify_adjunction",
]

__version__ = "0.1.0"
