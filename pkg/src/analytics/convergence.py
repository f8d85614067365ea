"""
Convergence Study

Relative error of every requested expansion against the eigendecomposition
oracle, as a function of the expansion order.
"""

import logging
from typing import Iterable, Optional, Sequence

import numpy as np

from src.analytics.oracle import reference_matfun, relative_error, spd_eig
from src.expansions.expansion_spec import ExpansionSpec, Kind, Method, Mode
from src.expansions.matrix_functions import (
    TABULATED_TERMS,
    ScaledOperand,
    SymMatrix,
    as_sparse_sym,
    matfun,
    resolve_n0,
)
from src.utils.config import DEFAULT_SEED, DEFAULT_TOL_NORM
from src.utils.results import ConvergenceResults

logger = logging.getLogger(__name__)


class ConvergenceStudy:
    """
    Sweep of expansion orders for a set of methods and kinds on one matrix.

    The spectral norm, the CPE1 interval and the oracle decomposition are
    computed once and shared by every evaluation.
    """

    def __init__(
        self,
        methods: Sequence[Method],
        kinds: Sequence[Kind] = (Kind.SQRT, Kind.INVSQRT),
        max_order: int = 9,
        min_order: int = 1,
        n0: Optional[float] = None,
        n0_class: Optional[float] = None,
        mode: Mode = Mode.DENSE,
        tol_norm: float = DEFAULT_TOL_NORM,
        seed: int = DEFAULT_SEED,
    ):
        """
        Initialize the study.

        Args:
            methods: expansions to compare
            kinds: sqrt and/or inverse sqrt
            max_order: last order evaluated
            min_order: first order evaluated
            n0: fixed CPE1 interval (computed from the matrix when None)
            n0_class: tabulated class, required when CPE2 is requested
            mode: dense evaluation or column-wise action
            tol_norm: power-method tolerance
            seed: seed of every power-method start vector
        """
        if not 0 <= min_order <= max_order:
            raise ValueError(f"need 0 <= min_order <= max_order, got {min_order} and {max_order}")
        self.methods = [Method(m) for m in methods]
        self.kinds = [Kind(k) for k in kinds]
        if not self.methods or not self.kinds:
            raise ValueError("a study needs at least one method and one kind")
        if Method.CPE2 in self.methods and n0_class is None:
            raise ValueError("CPE2 needs an n0 class")
        self.max_order = max_order
        self.min_order = min_order
        self.n0 = n0
        self.n0_class = n0_class
        self.mode = Mode(mode)
        self.tol_norm = tol_norm
        self.seed = seed

    def orders(self, method: Method) -> Iterable[int]:
        last = self.max_order
        if method is Method.CPE2 and last >= TABULATED_TERMS:
            logger.warning(f"CPE2 has {TABULATED_TERMS} tabulated coefficients; skipping orders from {TABULATED_TERMS}")
            last = TABULATED_TERMS - 1
        return range(self.min_order, last + 1)

    def run(self, G: SymMatrix) -> ConvergenceResults:
        """
        Evaluate every (method, kind, order) combination on G.

        Returns:
            ConvergenceResults with one row per evaluation
        """
        G = as_sparse_sym(G)
        decomposition = spd_eig(G)
        references = {kind: reference_matfun(G, kind, decomposition) for kind in self.kinds}

        operand = None
        n0 = self.n0
        if G.scalar_multiple_of_identity() is None:
            operand = ScaledOperand.from_matrix(G, tol_norm=self.tol_norm, seed=self.seed)
            if n0 is None and Method.CPE1 in self.methods:
                cpe1_spec = ExpansionSpec(method=Method.CPE1, kind=Kind.SQRT, order=0)
                n0 = resolve_n0(operand, cpe1_spec, seed=self.seed)

        rows = []
        for method in self.methods:
            for kind in self.kinds:
                for order in self.orders(method):
                    spec = ExpansionSpec(
                        method=method,
                        kind=kind,
                        order=order,
                        n0=n0 if method is Method.CPE1 else None,
                        n0_class=self.n0_class if method is Method.CPE2 else None,
                        mode=self.mode,
                    )
                    result = matfun(G, spec, tol_norm=self.tol_norm, seed=self.seed, operand=operand)
                    delta = relative_error(result, references[kind], tol=self.tol_norm, seed=self.seed)
                    logger.debug(f"{method.value} {kind.value} order {order}: delta = {delta:.3e}")
                    rows.append({"method": method.value, "kind": kind.value, "order": order, "delta": delta})

        condition = float(decomposition.values[-1] / decomposition.values[0])
        logger.info(f"Convergence study on dim {G.dim}: {len(rows)} evaluations, condition number {condition:.4g}")
        return ConvergenceResults(
            rows,
            dim=G.dim,
            norm=None if operand is None else operand.norm,
            n0=n0,
            n0_class=self.n0_class,
            condition_number=condition,
            eigenvalue_range=(float(np.min(decomposition.values)), float(np.max(decomposition.values))),
        )
