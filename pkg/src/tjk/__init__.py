"""Exact computer algebra for the Toeplitz-Jacobson algebra K<x,y>/(xy - 1)."""

from .algebra import AlgebraElement, LaurentPoly, XPolynomial, idempotent_f, p_star, quotient_to_laurent
from .homology import (ext_dim_general, ext_Lp_S1k_dim, ext_M_S1k_dim, ext_oracle, hom_R_dim,
                       laurent_ext_dim, laurent_hom_dim)
from .ideals import IdealCanonicalForm, canonical_form, member
from .parser import ParseError, format_element, parse
from .reps import GammaRep, ModuleVector, build_Lp, build_S1_power, direct_sum, find_isomorphism
from .scalars import ExactMatrix, FieldCtx
from .windows import StabilizationError, TruncationWindow, WindowConfig

__all__ = [
    "AlgebraElement", "LaurentPoly", "XPolynomial", "idempotent_f", "p_star", "quotient_to_laurent",
    "ext_dim_general", "ext_Lp_S1k_dim", "ext_M_S1k_dim", "ext_oracle", "hom_R_dim",
    "laurent_ext_dim", "laurent_hom_dim",
    "IdealCanonicalForm", "canonical_form", "member",
    "ParseError", "format_element", "parse",
    "GammaRep", "ModuleVector", "build_Lp", "build_S1_power", "direct_sum", "find_isomorphism",
    "ExactMatrix", "FieldCtx",
    "StabilizationError", "TruncationWindow", "WindowConfig",
]

__version__ = "0.1.0"
