"""
Expansion Coefficients

Taylor coefficients by exact rational recurrence, Chebyshev coefficients by
cosine quadrature (or from the tables), Pade coefficients from the table or
their binomial closed form, and truncation-order selection.
"""

import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.fft import dct

from src.expansions.expansion_spec import CoeffVector, Kind, Method, match_n0_class
from src.expansions.tables import (
    CHEBYSHEV_INVSQRT,
    CHEBYSHEV_ORDER_INVSQRT,
    CHEBYSHEV_ORDER_SQRT,
    CHEBYSHEV_SQRT,
    DELTAS,
    N0_CLASSES,
    PADE,
)
from src.utils.exceptions import ConvergenceError, UnavailableOrderError

logger = logging.getLogger(__name__)

QUADRATURE_TOL = 1e-12
QUADRATURE_POINTS_PER_TERM = 64
QUADRATURE_MAX_POINTS = 1 << 22
MAX_SELECTED_ORDER = 400


def tse_coefficients(kind: Kind, order: int) -> CoeffVector:
    """
    Taylor coefficients of sqrt(x) or 1/sqrt(x) about x = 1.

    c_{n+1} = c_n (a - n) / (n + 1) with a = 1/2 (sqrt) or -1/2 (inverse),
    evaluated in exact rational arithmetic.
    """
    kind = Kind(kind)
    if order < 0:
        raise ValueError("order must be nonnegative")
    a = Fraction(1, 2) if kind is Kind.SQRT else Fraction(-1, 2)
    exact = [Fraction(1)]
    for n in range(order):
        exact.append(exact[n] * (a - n) / (n + 1))
    return CoeffVector(
        kind=kind,
        method=Method.TSE,
        values=np.array([float(c) for c in exact]),
        exact=tuple(exact),
    )


def _chebyshev_quadrature(kind: Kind, n0: float, order: int, points: int) -> np.ndarray:
    # c_n = (2/pi) int_0^pi g(x(theta)) cos(n theta) dtheta by the midpoint rule,
    # which is a type-II DCT of the samples.
    theta = np.pi * (np.arange(points) + 0.5) / points
    x = 0.5 * ((1.0 - n0) * np.cos(theta) + (1.0 + n0))
    samples = kind.scalar(x)
    return dct(samples, type=2)[: order + 1] / points


def cpe_coefficients(kind: Kind, n0: float, order: int) -> CoeffVector:
    """
    Chebyshev coefficients of sqrt(x) or 1/sqrt(x) on [n0, 1].

    The quadrature starts at 64 * (order + 1) points and doubles until two
    successive coefficient sets agree to 1e-12 absolute.

    Raises:
        ValueError: n0 outside (0, 1)
        ConvergenceError: the point budget ran out
    """
    kind = Kind(kind)
    if not 0.0 < n0 < 1.0:
        raise ValueError(f"n0 must lie in (0, 1), got {n0}")
    if order < 0:
        raise ValueError("order must be nonnegative")

    points = QUADRATURE_POINTS_PER_TERM * (order + 1)
    current = _chebyshev_quadrature(kind, n0, order, points)
    while points < QUADRATURE_MAX_POINTS:
        points *= 2
        refined = _chebyshev_quadrature(kind, n0, order, points)
        change = float(np.max(np.abs(refined - current)))
        current = refined
        if change <= QUADRATURE_TOL:
            logger.debug(f"Chebyshev quadrature settled at {points} points (change {change:.1e})")
            return CoeffVector(kind=kind, method=Method.CPE1, values=current, n0=n0)

    raise ConvergenceError(
        f"Chebyshev quadrature did not settle below {QUADRATURE_TOL:g} for n0={n0:g}",
        estimate=current,
    )


def cpe_tabulated(kind: Kind, n0_class: float) -> CoeffVector:
    """
    The 20 tabulated Chebyshev coefficients of a class.

    Raises:
        UnsupportedClassError: n0_class is not tabulated
    """
    kind = Kind(kind)
    n0_class = match_n0_class(n0_class)
    table = CHEBYSHEV_SQRT if kind is Kind.SQRT else CHEBYSHEV_INVSQRT
    exact = table[n0_class]
    return CoeffVector(
        kind=kind,
        method=Method.CPE2,
        values=np.array([float(c) for c in exact]),
        n0=n0_class,
        exact=exact,
    )


def _match_delta(delta: float) -> Optional[int]:
    for column, tabulated in enumerate(DELTAS):
        if math.isclose(delta, tabulated, rel_tol=1e-9):
            return column
    return None


def cpe_order(kind: Kind, n0_class: float, delta: float) -> Optional[int]:
    """
    Tabulated Chebyshev truncation order reaching relative error delta.

    Returns:
        the order, or None where the table has no entry (Unavailable)

    Raises:
        UnsupportedClassError: n0_class is not tabulated
        ValueError: delta is not one of 1e-2 .. 1e-6
    """
    kind = Kind(kind)
    n0_class = match_n0_class(n0_class)
    column = _match_delta(delta)
    if column is None:
        raise ValueError(f"delta {delta:g} is not tabulated (use one of {', '.join(f'{d:g}' for d in DELTAS)})")
    table = CHEBYSHEV_ORDER_SQRT if kind is Kind.SQRT else CHEBYSHEV_ORDER_INVSQRT
    return table[n0_class][column]


def select_cpe_order(kind: Kind, n0: float, delta: float) -> int:
    """
    Chebyshev order for an arbitrary interval [n0, 1] and target delta.

    Uses the table cell of the tightest class bound not above n0 when delta
    is tabulated; otherwise (or on a dash) takes the smallest order whose
    coefficient tail sum_{n > N} |c_n| stays below delta * sup|f|.

    Raises:
        UnavailableOrderError: not even order 400 reaches delta
    """
    kind = Kind(kind)
    if not 0.0 < n0 < 1.0:
        raise ValueError(f"n0 must lie in (0, 1), got {n0}")

    bounds = [c for c in N0_CLASSES if c <= n0]
    if bounds and _match_delta(delta) is not None:
        order = cpe_order(kind, max(bounds), delta)
        if order is not None:
            logger.info(f"Table order {order} for n0={n0:.4g} (class {max(bounds):g}), delta={delta:g}")
            return order

    coefficients = cpe_coefficients(kind, n0, MAX_SELECTED_ORDER).values
    sup = 1.0 if kind is Kind.SQRT else 1.0 / math.sqrt(n0)
    # tails[N] = sum_{n > N} |c_n|
    tails = np.append(np.cumsum(np.abs(coefficients[::-1]))[::-1][1:], 0.0)
    reachable = np.nonzero(tails[:-1] <= delta * sup)[0]
    if reachable.size == 0:
        raise UnavailableOrderError(
            f"no Chebyshev order up to {MAX_SELECTED_ORDER} reaches delta={delta:g} on [{n0:g}, 1]"
        )
    order = int(reachable[0])
    logger.info(f"Tail-estimated order {order} for n0={n0:.4g}, delta={delta:g}")
    return order


def pade_closed_form(order: int) -> tuple:
    """c_n = binom(2N + 1, 2n): the [N/N] Pade approximant of sqrt(x) at x = 1."""
    return tuple(math.comb(2 * order + 1, 2 * n) for n in range(order + 1))


def pae_coefficients(order: int, kind: Kind = Kind.SQRT) -> CoeffVector:
    """
    Pade coefficients c_0..c_N.

    The same coefficients serve both kinds; the inverse square root swaps
    numerator and denominator.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    integers = PADE[order] if order < len(PADE) else pade_closed_form(order)
    return CoeffVector(
        kind=Kind(kind),
        method=Method.PAE,
        values=np.array(integers, dtype=float),
        exact=tuple(Fraction(c) for c in integers),
    )
