"""
Expansion Specification

Value types describing which expansion to evaluate and with which
coefficients.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from src.expansions.tables import N0_CLASSES
from src.utils.exceptions import UnsupportedClassError


class Method(str, Enum):
    TSE = "tse"
    CPE1 = "cpe1"
    CPE2 = "cpe2"
    PAE = "pae"


class Kind(str, Enum):
    SQRT = "sqrt"
    INVSQRT = "invsqrt"

    def scalar(self, x):
        """The exact scalar function."""
        if self is Kind.SQRT:
            return np.sqrt(x)
        return 1.0 / np.sqrt(x)

    @property
    def exponent(self) -> float:
        return 0.5 if self is Kind.SQRT else -0.5


class Mode(str, Enum):
    DENSE = "dense"
    APPLY = "apply"


def match_n0_class(value: float) -> float:
    """
    Map a user-supplied class bound onto the tabulated one.

    Raises:
        UnsupportedClassError: if value is not one of the tabulated bounds
    """
    for n0_class in N0_CLASSES:
        if math.isclose(value, n0_class, rel_tol=1e-9):
            return n0_class
    supported = ", ".join(f"{c:g}" for c in N0_CLASSES)
    raise UnsupportedClassError(f"n0 class {value:g} is not tabulated (supported: {supported})")


@dataclass(frozen=True)
class ExpansionSpec:
    """
    Which expansion to evaluate.

    Attributes:
        method: TSE, CPE1 (matrix-specific coefficients), CPE2 (tabulated) or PAE
        kind: sqrt or inverse sqrt
        order: N_T, N_C or N_A depending on the method
        n0: lower end of the Chebyshev interval for CPE1; computed when None
        n0_class: tabulated class bound, required for CPE2
        mode: dense matrix result or action on a vector
        strict_n0: CPE2 only, verify the scaled spectrum stays above n0_class
    """

    method: Method
    kind: Kind
    order: int
    n0: Optional[float] = None
    n0_class: Optional[float] = None
    mode: Mode = Mode.DENSE
    strict_n0: bool = False

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "mode", Mode(self.mode))
        if int(self.order) != self.order or self.order < 0:
            raise ValueError(f"order must be a nonnegative integer, got {self.order}")
        object.__setattr__(self, "order", int(self.order))

        if self.n0 is not None and not 0.0 < self.n0 < 1.0:
            raise ValueError(f"n0 must lie in (0, 1), got {self.n0}")
        if self.method is Method.CPE2:
            if self.n0_class is None:
                raise ValueError("CPE2 needs an n0_class")
            object.__setattr__(self, "n0_class", match_n0_class(self.n0_class))
        if self.strict_n0 and self.method is not Method.CPE2:
            raise ValueError("strict_n0 only applies to CPE2")

    def with_kind(self, kind: Kind) -> "ExpansionSpec":
        return ExpansionSpec(
            method=self.method,
            kind=kind,
            order=self.order,
            n0=self.n0,
            n0_class=self.n0_class,
            mode=self.mode,
            strict_n0=self.strict_n0,
        )


@dataclass(frozen=True)
class CoeffVector:
    """
    Expansion coefficients c_0..c_order for one method, kind and order.

    Chebyshev vectors store the raw c_0; the evaluator halves it. exact holds
    the rational values when they are known exactly (TSE, PAE, tabulated CPE).
    """

    kind: Kind
    method: Method
    values: np.ndarray
    n0: Optional[float] = None
    exact: Optional[Tuple[Fraction, ...]] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.exact is not None and len(self.exact) != values.size:
            raise ValueError("exact and float coefficients differ in length")

    @property
    def order(self) -> int:
        return self.values.size - 1

    def __len__(self) -> int:
        return self.values.size

    def truncated(self, order: int) -> "CoeffVector":
        """The leading coefficients c_0..c_order."""
        if not 0 <= order <= self.order:
            raise ValueError(f"cannot truncate {self.order + 1} coefficients to order {order}")
        return CoeffVector(
            kind=self.kind,
            method=self.method,
            values=self.values[: order + 1],
            n0=self.n0,
            exact=None if self.exact is None else self.exact[: order + 1],
        )
