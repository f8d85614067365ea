"""
Chebyshev Polynomial Expansion

Chebyshev series of sqrt(x) and 1/sqrt(x) on [n0, 1], lifted to matrices by
mapping the spectrum onto [-1, 1].
"""

import numpy as np

from src.expansions.base_expansion import BaseExpansion, MatVec
from src.expansions.expansion_spec import CoeffVector
from src.expansions.recurrences import chebyshev_clenshaw, chebyshev_forward


class ChebyshevExpansion(BaseExpansion):
    """
    Truncated Chebyshev series sum'_n c_n T_n(Y), Y = (2X - (1 + n0) I) / (1 - n0).

    The primed sum halves c_0. Scalar and dense evaluation run the forward
    three-term recurrence, keeping two matrix terms alive; the action on a
    vector uses Clenshaw's backward recurrence.
    """

    def __init__(self, coefficients: CoeffVector, n0: float):
        """
        Initialize the expansion.

        Args:
            coefficients: raw Chebyshev coefficients (c_0 not halved)
            n0: lower end of the approximation interval [n0, 1]
        """
        if not 0.0 < n0 < 1.0:
            raise ValueError(f"n0 must lie in (0, 1), got {n0}")
        super().__init__(coefficients, n0=n0)
        self.n0 = n0
        self.scale = 2.0 / (1.0 - n0)
        self.shift = (1.0 + n0) / (1.0 - n0)

    def evaluate_scalar(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return chebyshev_forward(
            self.coefficients.values,
            lambda a: self.scale * (x * a) - self.shift * a,
            np.ones_like(x),
        )

    def evaluate_dense(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return chebyshev_forward(
            self.coefficients.values,
            lambda A: self.scale * (X @ A) - self.shift * A,
            np.eye(X.shape[0]),
        )

    def apply(self, matvec: MatVec, v: np.ndarray) -> np.ndarray:
        return chebyshev_clenshaw(
            self.coefficients.values,
            lambda w: self.scale * matvec(w) - self.shift * w,
            np.asarray(v, dtype=float),
        )
