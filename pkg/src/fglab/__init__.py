"""fglab: exact-arithmetic lab for point-hyperplane flag geometries.

Builds the flag geometry of PG(n, q) over a small finite field, realizes
its matrix-space embeddings and their automorphism twistings, and runs
exhaustive verification campaigns for the structural statements about
geometric hyperplanes, quotient embeddings, polarized embeddings and
semi-polynomial identities that hold at desk scale.
"""

__version__ = "0.1.0"

from .errors import ConfigError, FglabError, VerificationError
from .flaggeom import build_geometry
from .gf import (
    FieldAutomorphism,
    FieldElement,
    FieldSpec,
    apply_automorphism,
    automorphism_group,
    make_field,
)
from .reporting import Report

__all__ = [
    "ConfigError",
    "FglabError",
    "VerificationError",
    "FieldAutomorphism",
    "FieldElement",
    "FieldSpec",
    "Report",
    "apply_automorphism",
    "automorphism_group",
    "build_geometry",
    "make_field",
    "__version__",
]
