"""
Expansions Module

Taylor, Chebyshev and Pade expansions of sqrt(x) and 1/sqrt(x), their
coefficients, and their norm-scaled evaluation on sparse SPD matrices.
"""

from .base_expansion import BaseExpansion
from .chebyshev import ChebyshevExpansion
from .coefficients import (
    cpe_coefficients,
    cpe_order,
    cpe_tabulated,
    pade_closed_form,
    pae_coefficients,
    select_cpe_order,
    tse_coefficients,
)
from .expansion_spec import CoeffVector, ExpansionSpec, Kind, Method, Mode, match_n0_class
from .matrix_functions import (
    ScaledOperand,
    build_expansion,
    make_expansion,
    matfun,
    matfun_apply,
    matfun_dense,
    normalize_operator,
    resolve_order,
    scalar_error,
)
from .pade import PadeExpansion
from .taylor import TaylorExpansion

__all__ = [
    "BaseExpansion",
    "TaylorExpansion",
    "ChebyshevExpansion",
    "PadeExpansion",
    "CoeffVector",
    "ExpansionSpec",
    "Kind",
    "Method",
    "Mode",
    "match_n0_class",
    "tse_coefficients",
    "cpe_coefficients",
    "cpe_tabulated",
    "cpe_order",
    "select_cpe_order",
    "pae_coefficients",
    "pade_closed_form",
    "ScaledOperand",
    "make_expansion",
    "build_expansion",
    "matfun",
    "matfun_dense",
    "matfun_apply",
    "normalize_operator",
    "resolve_order",
    "scalar_error",
]
