"""
Base Expansion Class

Abstract base class for the scalar expansions lifted to matrix arguments.
"""

from abc import ABC, abstractmethod
from typing import Callable

import numpy as np

from src.expansions.expansion_spec import CoeffVector

MatVec = Callable[[np.ndarray], np.ndarray]


class BaseExpansion(ABC):
    """
    Abstract base class for expansions of sqrt(x) and 1/sqrt(x).

    Every expansion evaluates on three kinds of argument: scalar samples
    (elementwise), a dense matrix X whose spectrum lies in (0, 1], and the
    action on a vector given only X's matvec.
    """

    def __init__(self, coefficients: CoeffVector, **kwargs):
        """
        Initialize the expansion.

        Args:
            coefficients: expansion coefficients c_0..c_N
            **kwargs: expansion-specific parameters
        """
        self.coefficients = coefficients
        self.kind = coefficients.kind
        self.params = kwargs
        self.name = self.__class__.__name__

    @property
    def order(self) -> int:
        return self.coefficients.order

    @abstractmethod
    def evaluate_scalar(self, x: np.ndarray) -> np.ndarray:
        """
        Evaluate the scalar expansion elementwise.

        Args:
            x: sample points in (0, 1]

        Returns:
            Array of approximations of f(x)
        """
        pass

    @abstractmethod
    def evaluate_dense(self, X: np.ndarray) -> np.ndarray:
        """
        Evaluate the matrix expansion.

        Args:
            X: dense symmetric matrix with spectrum in (0, 1]

        Returns:
            Dense approximation of f(X)
        """
        pass

    @abstractmethod
    def apply(self, matvec: MatVec, v: np.ndarray) -> np.ndarray:
        """
        Evaluate f(X) v without forming f(X).

        Args:
            matvec: callable computing X w
            v: vector

        Returns:
            Approximation of f(X) v
        """
        pass

    def __str__(self) -> str:
        params_str = "".join(f", {k}={v}" for k, v in self.params.items())
        return f"{self.name}({self.kind.value}, order={self.order}{params_str})"
