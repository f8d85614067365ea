"""
Taylor Series Expansion

sqrt(x) and 1/sqrt(x) expanded about x = 1 and evaluated by Horner's rule
in powers of (X - I).
"""

import numpy as np

from src.expansions.base_expansion import BaseExpansion, MatVec
from src.expansions.recurrences import horner_shifted


class TaylorExpansion(BaseExpansion):
    """
    Truncated Taylor series sum_n c_n (X - I)^n.

    Converges for spectra in (0, 2); accuracy degrades quickly as the
    smallest scaled eigenvalue approaches 0.
    """

    def evaluate_scalar(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return horner_shifted(self.coefficients.values, lambda a: x * a, np.ones_like(x))

    def evaluate_dense(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return horner_shifted(self.coefficients.values, lambda A: X @ A, np.eye(X.shape[0]))

    def apply(self, matvec: MatVec, v: np.ndarray) -> np.ndarray:
        return horner_shifted(self.coefficients.values, matvec, np.asarray(v, dtype=float))
