"""
Run Configuration

Numerical defaults and the validated description of one CLI invocation.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

# Power iteration for ||G||_2; the norm error must sit well below the expansion error.
DEFAULT_TOL_NORM = 1e-10
DEFAULT_MAX_ITER_NORM = 5000

# Inverse power iteration for the smallest eigenvalue (CPE-1 interval, strict CPE-2 check).
# The tolerance bounds the eigen-residual ||A x - rho x|| relative to rho.
DEFAULT_TOL_MIN_EIG = 1e-4
DEFAULT_MAX_ITER_MIN_EIG = 1000

DEFAULT_TOL_CG = 1e-12
DEFAULT_TOL_PADE_CG = 1e-12

# Shrinks the computed smallest scaled eigenvalue so the spectrum stays inside [n0, 1].
CPE_SAFETY_FACTOR = 0.95

DEFAULT_SEED = 0
JACOBI_MAX_SWEEPS = 60

# 17 significant digits.
CSV_FLOAT_FORMAT = "%.16e"

SUBCOMMANDS = ("gram", "sqrt", "invsqrt", "convergence", "coeffs", "normalize")


@dataclass
class RunConfig:
    """
    Configuration of a single command-line run.

    The CLI fills one of these from its options and calls validate() before
    any file is read, so inconsistent flag combinations fail fast.
    """

    subcommand: str
    inputs: Tuple[Path, ...] = field(default_factory=tuple)
    output: Optional[Path] = None
    method: Optional[str] = None
    methods: Tuple[str, ...] = field(default_factory=tuple)
    kind: Optional[str] = None
    order: Optional[int] = None
    n0: Optional[float] = None
    n0_class: Optional[float] = None
    delta: Optional[float] = None
    tol_norm: float = DEFAULT_TOL_NORM
    seed: int = DEFAULT_SEED
    strict_n0: bool = False

    def validate(self) -> "RunConfig":
        """
        Check the combination of options.

        Returns:
            self, for chaining

        Raises:
            ValueError: describing the first inconsistency found
        """
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        if self.tol_norm <= 0:
            raise ValueError("--tol-norm must be positive")
        if self.order is not None and self.order < 0:
            raise ValueError("--order must be nonnegative")
        if self.n0 is not None and not 0.0 < self.n0 < 1.0:
            raise ValueError("--n0 must lie in (0, 1)")

        if self.subcommand in ("sqrt", "invsqrt", "normalize"):
            if self.method is None:
                raise ValueError("--method is required")
            if self.delta is not None:
                if self.method not in ("cpe1", "cpe2"):
                    raise ValueError("--delta selects a Chebyshev order; use --method cpe1 or cpe2")
                if self.order is not None:
                    raise ValueError("give either --order or --delta, not both")
            elif self.order is None:
                raise ValueError("one of --order or --delta is required")

        if self.subcommand == "convergence":
            if not self.methods:
                raise ValueError("--methods needs at least one method")
            if "cpe2" in self.methods and self.n0_class is None:
                raise ValueError("cpe2 in --methods needs --n0-class")
        elif self.subcommand != "gram" and self.method == "cpe2" and self.n0_class is None:
            raise ValueError("--method cpe2 needs --n0-class")

        if self.subcommand == "coeffs":
            if self.method is None:
                raise ValueError("--method is required")
            if self.method != "cpe2" and self.order is None:
                raise ValueError(f"--method {self.method} needs --order")
            if self.method == "cpe1" and self.n0 is None:
                raise ValueError("--method cpe1 needs --n0")
        if self.n0 is not None:
            if self.subcommand == "convergence" and "cpe1" not in self.methods:
                raise ValueError("--n0 only applies when cpe1 is in --methods")
            if self.subcommand != "convergence" and self.method != "cpe1":
                raise ValueError("--n0 only applies to --method cpe1")
        if self.strict_n0 and self.method != "cpe2":
            raise ValueError("--strict-n0 only applies to --method cpe2")
        return self
