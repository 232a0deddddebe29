"""Exact toolkit for involutive Hom-associative and Hom-Lie algebras and their HNN-extensions."""
from .exactlin import AxiomReport, InvalidInput, Matrix
from .homalg import (
    DEFAULT_VARIANT,
    HomAssociativeAlgebra,
    HomLieAlgebra,
    LeibnizVariant,
    SubspaceData,
    check_hom_associative,
    check_hom_lie,
)

__all__ = [
    "AxiomReport",
    "InvalidInput",
    "Matrix",
    "DEFAULT_VARIANT",
    "HomAssociativeAlgebra",
    "HomLieAlgebra",
    "LeibnizVariant",
    "SubspaceData",
    "check_hom_associative",
    "check_hom_lie",
]
