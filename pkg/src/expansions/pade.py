"""
Pade Approximant Expansion

[N/N] Pade approximants of sqrt(x) and 1/sqrt(x) at x = 1.

With E(x) = sum_n c_n x^n and its reversal O(x) = sum_n c_n x^(N - n),
sqrt(x) ~ O(x)^-1 E(x) and 1/sqrt(x) ~ E(x)^-1 O(x). Both polynomials
have positive coefficients, so the denominator is SPD for SPD X.
"""

import logging

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from src.expansions.base_expansion import BaseExpansion, MatVec
from src.expansions.expansion_spec import CoeffVector, Kind
from src.expansions.recurrences import horner_power
from src.sparse.iterative import cg_solve
from src.utils.config import DEFAULT_TOL_PADE_CG
from src.utils.exceptions import NotPositiveDefiniteError

logger = logging.getLogger(__name__)


class PadeExpansion(BaseExpansion):
    """Rational approximant D(X)^-1 N(X)."""

    def __init__(self, coefficients: CoeffVector, cg_tol: float = DEFAULT_TOL_PADE_CG):
        super().__init__(coefficients, cg_tol=cg_tol)
        self.cg_tol = cg_tol
        forward = coefficients.values
        backward = forward[::-1]
        if self.kind is Kind.SQRT:
            self.numerator, self.denominator = forward, backward
        else:
            self.numerator, self.denominator = backward, forward

    def evaluate_scalar(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        one = np.ones_like(x)

        def mul(a):
            return x * a

        return horner_power(self.numerator, mul, one) / horner_power(self.denominator, mul, one)

    def evaluate_dense(self, X: np.ndarray) -> np.ndarray:
        """
        Factor the denominator once (Cholesky) and solve against the numerator.

        Raises:
            NotPositiveDefiniteError: if the denominator is not SPD
        """
        X = np.asarray(X, dtype=float)
        identity = np.eye(X.shape[0])

        def mul(A):
            return X @ A

        numerator = horner_power(self.numerator, mul, identity)
        denominator = horner_power(self.denominator, mul, identity)
        try:
            factor = cho_factor(denominator, lower=True)
        except LinAlgError as exc:
            raise NotPositiveDefiniteError(f"Pade denominator of order {self.order} is not SPD: {exc}") from exc
        return cho_solve(factor, numerator)

    def apply(self, matvec: MatVec, v: np.ndarray) -> np.ndarray:
        """Solve D(X) y = N(X) v by CG with D(X) applied as an operator."""
        v = np.asarray(v, dtype=float)
        numerator = horner_power(self.numerator, matvec, v)
        operator = (lambda w: horner_power(self.denominator, matvec, w), v.shape[0])
        logger.debug(f"Pade apply: CG on the order-{self.order} denominator")
        return cg_solve(operator, numerator, tol=self.cg_tol)
